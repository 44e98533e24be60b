#include "jlanczos/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "jlanczos/io.hpp"
#include "jlanczos/matrix_gen.hpp"
#include "jlanczos/tek.hpp"

namespace jlanczos {

const char *to_string(Algorithm a) { return a == Algorithm::jsym ? "jsym" : "standard"; }
const char *to_string(SolveMode m) { return m == SolveMode::normal ? "normal" : "invert"; }

Problem make_problem(const MatrixSource &source, std::uint64_t seed) {
  Problem p;
  switch (source.kind) {
  case MatrixKind::random_hjs: {
    PlantedSpectrumMatrix g = gen_random_hjs(source.n_half, seed);
    p.a = std::make_unique<DenseOperator>(std::move(g.a));
    p.j = canonical_block_J(2 * source.n_half);
    p.planted = std::move(g.planted);
    p.label = "hjs_n" + std::to_string(2 * source.n_half);
    break;
  }
  case MatrixKind::tek: {
    TekPair t = make_tek(source.colour_dim, source.kappa, seed);
    p.a = std::move(t.a);
    p.j = std::move(t.j);
    p.label = "tek_d" + std::to_string(source.colour_dim);
    break;
  }
  case MatrixKind::file: {
    DenseComplexMatrix a = read_matrix_market(source.path);
    if (a.rows() != a.cols())
      throw DimensionError("matrix file " + source.path.string() + " is not square");
    const std::size_t n = a.rows();
    if (const auto meta = read_sidecar(source.path)) {
      if (meta->j_realization == "canonical-block")
        p.j = canonical_block_J(n);
      else if (meta->j_realization == "spin-tensor")
        p.j = spin_tensor_J(n / 4);
      p.planted = meta->planted;
    }
    p.a = std::make_unique<DenseOperator>(std::move(a));
    p.label = source.path.stem().string();
    break;
  }
  }
  return p;
}

SolverConfig doubled(const SolverConfig &cfg) {
  SolverConfig out = cfg;
  out.nev = 2 * cfg.nev;
  out.mwin = 2 * cfg.mwin;
  out.m = 2 * cfg.m;
  return out;
}

SolverConfig ExperimentSpec::standard_config() const { return standard ? *standard : doubled(jsym); }

bool ComparisonReport::all_converged() const {
  return std::all_of(runs.begin(), runs.end(), [](const RunOutcome &r) { return r.converged; });
}

Aggregate aggregate(const std::vector<RunOutcome> &runs, Algorithm algorithm, bool n_mv) {
  Aggregate a;
  double sum = 0.0;
  for (const auto &r : runs) {
    if (r.algorithm != algorithm || !r.completed)
      continue;
    const double v = n_mv ? static_cast<double>(r.n_mv) : static_cast<double>(r.n_conv);
    a.min = a.count == 0 ? v : std::min(a.min, v);
    a.max = a.count == 0 ? v : std::max(a.max, v);
    sum += v;
    ++a.count;
  }
  if (a.count > 0)
    a.avg = sum / static_cast<double>(a.count);
  return a;
}

namespace {

RunOutcome run_one(const Problem &p, Algorithm algorithm, const SolverConfig &cfg, std::uint64_t seed,
                   const std::filesystem::path &out_dir, std::vector<std::string> &violations) {
  RunOutcome out;
  out.seed = seed;
  out.algorithm = algorithm;
  const std::string tag = "seed " + std::to_string(seed) + " " + to_string(algorithm);
  p.a->reset_counters();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (algorithm == Algorithm::jsym && !p.j)
      throw std::invalid_argument("no J is known for this matrix");
    const EigenResult r = algorithm == Algorithm::jsym ? trlan_jsym(*p.a, *p.j, cfg) : trlan_standard(*p.a, cfg);
    out.completed = true;
    out.converged = r.converged;
    out.n_conv = r.n_restarts;
    out.n_mv = r.n_matvec;
    out.cg_iterations = r.cg_iterations;
    out.reorder_events = r.reorder_events;
    out.eigenvalues = r.eigenvalues;
    out.residuals = r.residuals;
    out.tally = p.a->matvec_count();
    if (out.tally != out.n_mv)
      violations.push_back(tag + ": operator tally " + std::to_string(out.tally) + " differs from N_MV " +
                           std::to_string(out.n_mv));
    if (r.converged) {
      out.bounds_ok = within_cost_bounds(r, cfg);
      if (!out.bounds_ok) {
        CostBounds b = cost_bounds(cfg.nev, cfg.mwin, cfg.m, r.n_restarts);
        const long long shift = cfg.mode == SolveMode::invert ? r.n_restarts : 0;
        violations.push_back(tag + ": N_MV " + std::to_string(r.n_matvec) + " not strictly inside (" +
                             std::to_string(b.lower + shift) + ", " + std::to_string(b.upper + shift) +
                             ") at N_conv " + std::to_string(r.n_restarts));
      }
    }
    if (!out_dir.empty()) {
      out.csv = out_dir / (p.label + "_seed" + std::to_string(seed) + "_" + to_string(algorithm) + ".csv");
      emit_convergence_csv(r.records, out.csv);
    }
  } catch (const IoError &) {
    throw;
  } catch (const std::exception &e) {
    out.error = e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::string format_aggregate(const Aggregate &a) {
  if (a.count == 0)
    return "n/a";
  char buf[96];
  std::snprintf(buf, sizeof buf, "[%g, %.1f, %g]", a.min, a.avg, a.max);
  return buf;
}

} // namespace

ComparisonReport run_experiment(const ExperimentSpec &spec) {
  if (spec.seeds.empty())
    throw std::invalid_argument("run_experiment: no seeds");
  if (!spec.run_jsym && !spec.run_standard)
    throw std::invalid_argument("run_experiment: no algorithm selected");
  const SolverConfig std_cfg = spec.standard_config();
  if (!spec.out_dir.empty())
    std::filesystem::create_directories(spec.out_dir);

  ComparisonReport report;
  for (std::uint64_t seed : spec.seeds) {
    Problem p = make_problem(spec.matrix, seed);
    if (p.a->norm_estimate() > 10.0)
      std::cerr << "warning: ||A|| is about " << p.a->norm_estimate()
                << "; tol is absolute, consider rescaling the matrix\n";
    if (spec.run_jsym)
      report.runs.push_back(run_one(p, Algorithm::jsym, spec.jsym, seed, spec.out_dir, report.violations));
    if (spec.run_standard)
      report.runs.push_back(run_one(p, Algorithm::standard, std_cfg, seed, spec.out_dir, report.violations));
  }

  report.jsym_n_conv = aggregate(report.runs, Algorithm::jsym, false);
  report.jsym_n_mv = aggregate(report.runs, Algorithm::jsym, true);
  report.standard_n_conv = aggregate(report.runs, Algorithm::standard, false);
  report.standard_n_mv = aggregate(report.runs, Algorithm::standard, true);

  if (spec.run_jsym && spec.run_standard) {
    double sum_j = 0.0, sum_s = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i + 1 < report.runs.size(); i += 2) {
      const RunOutcome &j = report.runs[i];
      const RunOutcome &s = report.runs[i + 1];
      if (j.converged && s.converged) {
        sum_j += static_cast<double>(j.n_mv);
        sum_s += static_cast<double>(s.n_mv);
        ++pairs;
      }
    }
    if (pairs > 0)
      report.ratio = sum_s / sum_j;
  }

  if (!spec.out_dir.empty()) {
    const auto path = spec.out_dir / "summary.txt";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << format_summary(spec, report);
    if (!out)
      throw IoError("cannot write " + path.string());
  }
  return report;
}

std::string format_summary(const ExperimentSpec &spec, const ComparisonReport &report) {
  std::ostringstream s;
  const SolverConfig std_cfg = spec.standard_config();
  s << "mode " << to_string(spec.jsym.mode) << ", tol " << format_double(spec.jsym.tol) << "\n";
  if (spec.run_jsym)
    s << "jsym     (nev, mwin, m) = (" << spec.jsym.nev << ", " << spec.jsym.mwin << ", " << spec.jsym.m << ")\n";
  if (spec.run_standard)
    s << "standard (nev, mwin, m) = (" << std_cfg.nev << ", " << std_cfg.mwin << ", " << std_cfg.m << ")\n";
  s << "\nseed algorithm converged N_conv N_MV tally cg_iter reorders bounds seconds\n";
  for (const auto &r : report.runs) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%llu %s %s %d %llu %llu %llu %d %s %.3f", static_cast<unsigned long long>(r.seed),
                  to_string(r.algorithm), r.converged ? "yes" : "no", r.n_conv,
                  static_cast<unsigned long long>(r.n_mv), static_cast<unsigned long long>(r.tally),
                  static_cast<unsigned long long>(r.cg_iterations), r.reorder_events, r.bounds_ok ? "ok" : "VIOLATED",
                  r.seconds);
    s << buf;
    if (!r.error.empty())
      s << " error: " << r.error;
    s << "\n";
  }
  s << "\n";
  if (spec.run_jsym)
    s << "jsym     N_conv " << format_aggregate(report.jsym_n_conv) << "  N_MV " << format_aggregate(report.jsym_n_mv)
      << "\n";
  if (spec.run_standard)
    s << "standard N_conv " << format_aggregate(report.standard_n_conv) << "  N_MV "
      << format_aggregate(report.standard_n_mv) << "\n";
  if (report.ratio) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", *report.ratio);
    s << "N_MV ratio standard/jsym " << buf << "\n";
  } else {
    s << "N_MV ratio standard/jsym undefined\n";
  }
  for (const auto &v : report.violations)
    s << "violation: " << v << "\n";
  return s.str();
}

OracleVerdict verify_against_oracle(const LinearOperator &op, const EigenResult &result, const OracleOptions &opts) {
  const Which which = opts.which;
  const std::size_t count = opts.count;
  if (op.dim() > kMaxOracleDim)
    throw DimensionError("verify_against_oracle: dimension " + std::to_string(op.dim()) + " exceeds " +
                         std::to_string(kMaxOracleDim));
  OracleVerdict v;
  v.oracle = hermitian_eigenvalues(materialize(op));
  if (which == Which::largest)
    std::reverse(v.oracle.begin(), v.oracle.end());

  if (opts.paired_spectrum) {
    const auto &o = v.oracle;
    if (o.size() % 2 != 0)
      v.multiplicity_ok = false;
    for (std::size_t i = 0; i + 1 < o.size(); i += 2) {
      if (std::abs(o[i] - o[i + 1]) > 1e-10)
        v.multiplicity_ok = false;
      if (i + 2 < o.size() && std::abs(o[i + 1] - o[i + 2]) <= 1e-10)
        v.multiplicity_ok = false;
    }
  }
  if (opts.pairs_listed_once) {
    for (std::size_t i = 0; i < v.oracle.size(); i += 2)
      v.expected.push_back(v.oracle[i]);
  } else {
    v.expected = v.oracle;
  }

  std::vector<double> got = result.eigenvalues;
  if (which == Which::largest)
    std::sort(got.begin(), got.end(), std::greater<>());
  else
    std::sort(got.begin(), got.end());

  if (count > got.size() || count > v.expected.size()) {
    v.message = "fewer eigenvalues than requested";
    return v;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    v.gaps.push_back(std::abs(got[i] - v.expected[i]));
    worst = std::max(worst, v.gaps.back());
  }
  v.pass = worst <= opts.tol && v.multiplicity_ok;
  char buf[128];
  std::snprintf(buf, sizeof buf, "max gap %.3e over %zu values%s", worst, count,
                v.multiplicity_ok ? "" : "; oracle multiplicity is not two");
  v.message = buf;
  return v;
}

} // namespace jlanczos
