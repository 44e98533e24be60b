#include "jlanczos/lanczos.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace jlanczos {

KrylovState KrylovState::start(ComplexVector v1, std::size_t m, SolveMode mode, const JOperator *j_op,
                               const CGConfig &cg) {
  if (m < 1)
    throw std::invalid_argument("KrylovState: m must be at least 1");
  if (std::abs(norm(v1) - 1.0) > 1e-12)
    throw std::invalid_argument("KrylovState: start vector must have unit norm");
  cg.validate();
  KrylovState s;
  s.mode = mode;
  s.cg = cg;
  s.t = ProjectedMatrix(m);
  if (j_op != nullptr) {
    if (j_op->dim() != v1.size())
      throw DimensionError("KrylovState: J dimension does not match the start vector");
    s.jsym = true;
    s.w.push_back(j_op->apply_conj(v1));
  }
  s.v.push_back(std::move(v1));
  return s;
}

namespace {

ComplexVector apply_krylov_operator(const LinearOperator &op, KrylovState &state, const ComplexVector &x) {
  ++state.matvecs;
  return state.mode == SolveMode::normal ? op.apply(x) : op.apply_inverse(x, state.cg);
}

void check_real_diagonal(Complex alpha, double op_norm, std::size_t column) {
  const double bound = 1e-12 * std::abs(alpha.real()) + 1e-13 * std::max(1.0, op_norm);
  if (!(std::abs(alpha.imag()) <= bound))
    throw NonHermitianError("Lanczos: diagonal entry " + std::to_string(column) + " has imaginary part " +
                            std::to_string(alpha.imag()) + "; the operator is not Hermitian");
}

ExtendStatus extend(const LinearOperator &op, const JOperator *j_op, KrylovState &state, std::size_t k,
                    std::size_t m) {
  const std::size_t n = op.dim();
  if (state.v.empty() || state.v.front().size() != n)
    throw DimensionError("Lanczos: state and operator dimensions differ");
  if (k >= m)
    throw std::invalid_argument("Lanczos: need k < m");
  if (m > state.t.max_columns())
    throw std::invalid_argument("Lanczos: m exceeds the projected matrix capacity");
  if (state.v.size() != k + 1 || state.j != k)
    throw std::invalid_argument("Lanczos: state does not hold a length-k decomposition");
  if (j_op != nullptr) {
    if (!state.jsym || state.w.size() != k + 1)
      throw std::invalid_argument("Lanczos: J-symmetric extension needs the dual basis W");
    if (j_op->dim() != n)
      throw DimensionError("Lanczos: J dimension does not match the operator");
    if (2 * m > n)
      throw std::invalid_argument("Lanczos: J-symmetric extension needs m <= n/2");
  } else if (m > n) {
    throw std::invalid_argument("Lanczos: need m <= n");
  }

  // Columns k.. are rebuilt from scratch: only the coupling row k is kept.
  for (std::size_t c = k; c < m; ++c)
    for (std::size_t r = c; r <= m; ++r)
      state.t.set(r, c, 0.0);

  state.v.reserve(m + 1);
  if (j_op != nullptr)
    state.w.reserve(m + 1);

  ExtendStatus status;
  for (std::size_t c = k; c < m; ++c) {
    ComplexVector x = apply_krylov_operator(op, state, state.v[c]);
    const double op_norm = norm(x);
    const Complex alpha = dot(state.v[c], x);
    check_real_diagonal(alpha, op_norm, c);
    state.t.set(c, c, alpha.real());
    axpy(-alpha.real(), state.v[c], x);

    OrthonormalizeResult r;
    try {
      if (j_op != nullptr) {
        const std::array<const Basis *, 2> bases{&state.w, &state.v};
        r = mgs_orthonormalize(std::move(x), bases, kReorthogonalizationGamma, op_norm);
      } else {
        const std::array<const Basis *, 1> bases{&state.v};
        r = mgs_orthonormalize(std::move(x), bases, kReorthogonalizationGamma, op_norm);
      }
    } catch (const BreakdownError &) {
      state.t.set(c + 1, c, 0.0);
      state.j = c + 1;
      status.breakdown = true;
      status.column = c + 1;
      return status;
    }
    if (r.capped)
      ++status.capped_steps;
    state.t.set(c + 1, c, r.b0);
    state.v.push_back(std::move(r.vector));
    if (j_op != nullptr)
      state.w.push_back(j_op->apply_conj(state.v.back()));
    state.j = c + 1;
  }
  status.column = m;
  return status;
}

} // namespace

ExtendStatus lanczos_extend_jsym(const LinearOperator &op, const JOperator &j_op, KrylovState &state, std::size_t k,
                                 std::size_t m) {
  return extend(op, &j_op, state, k, m);
}

ExtendStatus lanczos_extend_plain(const LinearOperator &op, KrylovState &state, std::size_t k, std::size_t m) {
  return extend(op, nullptr, state, k, m);
}

double orthonormality_error(const Basis &v, std::size_t count) {
  double err = 0.0;
  for (std::size_t r = 0; r < count; ++r)
    for (std::size_t c = r; c < count; ++c)
      err = std::max(err, std::abs(dot(v[r], v[c]) - (r == c ? 1.0 : 0.0)));
  return err;
}

double cross_inner_max(const Basis &a, const Basis &b, std::size_t count) {
  double err = 0.0;
  for (std::size_t r = 0; r < count; ++r)
    for (std::size_t c = 0; c < count; ++c)
      err = std::max(err, std::abs(dot(a[r], b[c])));
  return err;
}

double operator_cross_inner_max(const LinearOperator &op, const Basis &v, const Basis &w, std::size_t count) {
  double err = 0.0;
  for (std::size_t c = 0; c < count; ++c) {
    const ComplexVector aw = op.apply_uncounted(w[c]);
    for (std::size_t r = 0; r < count; ++r)
      err = std::max(err, std::abs(dot(v[r], aw)));
  }
  return err;
}

double decomposition_residual(const LinearOperator &op, const KrylovState &state) {
  const std::size_t j = state.j;
  if (state.v.size() < j + 1)
    throw std::invalid_argument("decomposition_residual: state lacks v_{j+1}");
  double err = 0.0;
  for (std::size_t c = 0; c < j; ++c) {
    ComplexVector y;
    if (state.mode == SolveMode::normal) {
      y = op.apply_uncounted(state.v[c]);
    } else {
      CGSolution sol = cg_solve(op, state.v[c], state.cg);
      if (!sol.report.converged)
        throw ConvergenceError("decomposition_residual: CG did not converge");
      y = std::move(sol.x);
    }
    for (std::size_t i = 0; i <= j; ++i) {
      const double t = state.t(i, c);
      if (t != 0.0)
        axpy(-t, state.v[i], y);
    }
    for (const Complex &z : y)
      err = std::max(err, std::abs(z));
  }
  return err;
}

} // namespace jlanczos
