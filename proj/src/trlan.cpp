#include "jlanczos/trlan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "jlanczos/rng.hpp"

namespace jlanczos {

CGConfig SolverConfig::resolved_cg() const {
  if (cg)
    return *cg;
  CGConfig out;
  out.tol = std::min(1e-14, tol / 10.0);
  return out;
}

void SolverConfig::validate(std::size_t n, bool jsym) const {
  if (nev < 1 || nev > mwin || mwin >= m)
    throw std::invalid_argument("SolverConfig: need 1 <= nev <= mwin < m");
  if (!(tol > 0.0))
    throw std::invalid_argument("SolverConfig: tol must be positive");
  if (max_restarts < 1)
    throw std::invalid_argument("SolverConfig: max_restarts must be at least 1");
  if (jsym && !(2 * m < n))
    throw std::invalid_argument("SolverConfig: the J-symmetric solver needs m < n/2 (n = " + std::to_string(n) + ")");
  if (!jsym && !(m < n))
    throw std::invalid_argument("SolverConfig: need m < n (n = " + std::to_string(n) + ")");
  resolved_cg().validate();
}

std::size_t restart_window(std::size_t icnv, std::size_t mwin, std::size_t m) {
  return std::min(icnv + mwin, m - 1);
}

double invert_residual_estimate(double lambda, double coupling, double c) {
  return c * std::abs(coupling * (1.0 / lambda));
}

CostBounds cost_bounds(std::size_t nev, std::size_t mwin, std::size_t m, int n_conv) {
  const long long steps = n_conv - 1;
  const auto mm = static_cast<long long>(m);
  return {mm + (mm - static_cast<long long>(mwin + nev)) * steps, mm + (mm - static_cast<long long>(mwin)) * steps};
}

bool within_cost_bounds(const EigenResult &r, const SolverConfig &cfg) {
  if (r.n_restarts <= 1)
    return true;
  CostBounds b = cost_bounds(cfg.nev, cfg.mwin, cfg.m, r.n_restarts);
  if (cfg.mode == SolveMode::invert) {
    b.lower += r.n_restarts;
    b.upper += r.n_restarts;
  }
  const auto nmv = static_cast<long long>(r.n_matvec);
  return b.lower < nmv && nmv < b.upper;
}

namespace {

constexpr double kLockedDrift = 1e-12;
constexpr int kMaxInjectAttempts = 8;

ComplexVector start_vector(std::size_t n, const SolverConfig &cfg) {
  ComplexVector v(n);
  if (cfg.start == StartVector::ones) {
    for (auto &z : v)
      z = 1.0;
  } else {
    Rng rng(cfg.seed);
    for (auto &z : v)
      z = rng.uniform_complex_square();
  }
  scale(v.span(), 1.0 / norm(v));
  return v;
}

// Replaces the missing v_{j+1} after a breakdown by a random vector
// orthonormalized against V (and W); t(j, j-1) stays zero.
void inject_random_vector(KrylovState &state, const JOperator *j_op, Rng &rng) {
  const std::size_t n = state.v.front().size();
  for (int attempt = 0;; ++attempt) {
    ComplexVector x(n);
    for (auto &z : x)
      z = rng.uniform_complex_square();
    try {
      OrthonormalizeResult r = j_op != nullptr ? mgs_orthonormalize(std::move(x), {&state.w, &state.v})
                                               : mgs_orthonormalize(std::move(x), {&state.v});
      state.v.push_back(std::move(r.vector));
      if (j_op != nullptr)
        state.w.push_back(j_op->apply_conj(state.v.back()));
      return;
    } catch (const BreakdownError &) {
      if (attempt + 1 >= kMaxInjectAttempts)
        throw;
    }
  }
}

double true_residual(const LinearOperator &op, const ComplexVector &x, double ev) {
  ComplexVector r = op.apply_uncounted(x);
  axpy(-ev, x, r);
  return norm(r);
}

EigenResult solve(const LinearOperator &op, const JOperator *j_op, const SolverConfig &cfg,
                  const RestartObserver &observer) {
  const std::size_t n = op.dim();
  const bool jsym = j_op != nullptr;
  cfg.validate(n, jsym);
  if (jsym && j_op->dim() != n)
    throw DimensionError("trlan_jsym: J dimension does not match the operator");
  const std::size_t m = cfg.m;
  const std::size_t nev = cfg.nev;
  const std::uint64_t cg_before = op.cg_iterations();
  const std::uint64_t stagnated_before = op.stagnated_solves();

  KrylovState state = KrylovState::start(start_vector(n, cfg), m, cfg.mode, j_op, cfg.resolved_cg());
  Rng breakdown_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  EigenResult result;
  std::vector<double> locked_values, locked_res;
  std::size_t k = 0;

  for (int restart = 1;; ++restart) {
    std::size_t from = k;
    while (from < m) {
      const ExtendStatus st =
          jsym ? lanczos_extend_jsym(op, *j_op, state, from, m) : lanczos_extend_plain(op, state, from, m);
      result.capped_steps += st.capped_steps;
      if (!st.breakdown)
        break;
      ++result.breakdowns;
      inject_random_vector(state, j_op, breakdown_rng);
      from = st.column;
    }

    SymmetricEigen eig = symmetric_eig_small(state.t.leading_block(m));
    sort_eigenpairs(eig.values, eig.vectors, SortKey::descending_value);
    const double beta = state.t(m, m - 1);
    const Basis head(state.v.begin(), state.v.begin() + static_cast<std::ptrdiff_t>(m));
    Basis u = combine_columns(head, eig.vectors, m);
    ComplexVector next = std::move(state.v[m]);
    std::vector<double> lambda = std::move(eig.values);
    std::vector<double> coupling(m);
    for (std::size_t i = 0; i < m; ++i)
      coupling[i] = beta * eig.vectors(m - 1, i);

    double c = 0.0;
    if (cfg.mode == SolveMode::invert) {
      c = norm(op.apply(next));
      ++state.matvecs;
    }

    std::vector<double> ev(m, 0.0), est(m, 0.0), res(m, 0.0);
    std::vector<char> has_true(m, 0), flag(m, 0);
    std::vector<char> lock_used(locked_values.size(), 0);
    for (std::size_t i = 0; i < nev; ++i) {
      if (cfg.mode == SolveMode::normal) {
        ev[i] = lambda[i];
        est[i] = std::abs(coupling[i]);
      } else {
        ev[i] = 1.0 / lambda[i];
        est[i] = invert_residual_estimate(lambda[i], coupling[i], c);
      }
      res[i] = est[i];
      if (!(est[i] < cfg.tol))
        continue;
      // A locked pair is decoupled exactly, so its vector is a bit-exact copy:
      // reuse its residual unless the Ritz value drifted.
      bool reused = false;
      if (coupling[i] == 0.0) {
        for (std::size_t l = 0; l < locked_values.size(); ++l) {
          if (!lock_used[l] && std::abs(locked_values[l] - ev[i]) <= kLockedDrift) {
            lock_used[l] = 1;
            res[i] = locked_res[l];
            reused = true;
            break;
          }
        }
      }
      if (!reused)
        res[i] = true_residual(op, u[i], ev[i]);
      has_true[i] = 1;
      flag[i] = res[i] < cfg.tol;
    }

    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::stable_partition(perm.begin(), perm.end(), [&](std::size_t i) { return flag[i] != 0; });
    apply_permutation(lambda, perm);
    apply_permutation(u, perm);
    apply_permutation(coupling, perm);
    apply_permutation(ev, perm);
    apply_permutation(est, perm);
    apply_permutation(res, perm);
    apply_permutation(has_true, perm);
    apply_permutation(flag, perm);

    const auto icnv = static_cast<std::size_t>(std::count(flag.begin(), flag.end(), char{1}));
    for (std::size_t i = 0; i < icnv; ++i)
      coupling[i] = 0.0;

    ConvergenceRecord rec;
    rec.restart = restart;
    rec.cum_matvec = state.matvecs;
    for (std::size_t i = 0; i < nev; ++i) {
      TargetRecord t;
      t.eig_estimate = ev[i];
      t.res_estimate = est[i];
      if (has_true[i])
        t.res_true = res[i];
      t.converged = flag[i] != 0;
      rec.targets.push_back(t);
    }
    result.records.push_back(std::move(rec));

    for (std::size_t i = 0; i < std::min(icnv, locked_values.size()); ++i) {
      if (std::abs(ev[i] - locked_values[i]) > kLockedDrift) {
        ++result.reorder_events;
        break;
      }
    }
    locked_values.assign(ev.begin(), ev.begin() + static_cast<std::ptrdiff_t>(icnv));
    locked_res.assign(res.begin(), res.begin() + static_cast<std::ptrdiff_t>(icnv));

    const bool done = icnv == nev;
    if (done || restart >= cfg.max_restarts) {
      result.converged = done;
      result.n_restarts = restart;
      for (std::size_t i = 0; i < nev; ++i) {
        result.eigenvalues.push_back(ev[i]);
        result.residuals.push_back(res[i]);
        result.residual_estimated.push_back(!has_true[i]);
        if (jsym)
          result.partners.push_back(reconstruct_pair(*j_op, u[i]));
        result.eigenvectors.push_back(std::move(u[i]));
      }
      break;
    }

    k = restart_window(icnv, cfg.mwin, m);
    result.thickness.push_back(k);
    state.t.clear();
    for (std::size_t i = 0; i < k; ++i) {
      state.t.set(i, i, lambda[i]);
      state.t.set(k, i, coupling[i]);
    }
    u.resize(k);
    u.push_back(std::move(next));
    state.v = std::move(u);
    if (jsym) {
      state.w.clear();
      for (const auto &x : state.v)
        state.w.push_back(j_op->apply_conj(x));
    }
    state.j = k;
    if (observer)
      observer(state, restart);
  }

  result.n_matvec = state.matvecs;
  result.cg_iterations = op.cg_iterations() - cg_before;
  result.stagnated_solves = op.stagnated_solves() - stagnated_before;
  return result;
}

} // namespace

EigenResult trlan_jsym(const LinearOperator &op, const JOperator &j_op, const SolverConfig &cfg,
                       const RestartObserver &observer) {
  return solve(op, &j_op, cfg, observer);
}

EigenResult trlan_standard(const LinearOperator &op, const SolverConfig &cfg, const RestartObserver &observer) {
  return solve(op, nullptr, cfg, observer);
}

} // namespace jlanczos
