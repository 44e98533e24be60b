// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.
//
// Usage: acceptance --cli PATH [--data DIR] [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "jlanczos/harness.hpp"
#include "jlanczos/lanczos.hpp"
#include "jlanczos/matrix_gen.hpp"
#include "jlanczos/operators.hpp"
#include "jlanczos/rng.hpp"
#include "jlanczos/tek.hpp"
#include "jlanczos/trlan.hpp"

using namespace jlanczos;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

/// One finished solver run, kept for the cost-model check.
struct RunRecord {
  std::string tag;
  SolverConfig cfg;
  bool converged = false;
  int n_conv = 0;
  std::uint64_t n_mv = 0;
};

std::vector<RunRecord> g_runs;
std::string g_cli;

void record_run(const std::string &tag, const SolverConfig &cfg, const EigenResult &r) {
  g_runs.push_back({tag, cfg, r.converged, r.n_restarts, r.n_matvec});
}

std::string fmt(const char *f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ComplexVector random_vector(std::size_t n, Rng &rng) {
  ComplexVector v(n);
  for (auto &x : v)
    x = rng.uniform_complex_square();
  return v;
}

ComplexVector ones_unit(std::size_t n) {
  ComplexVector v(n);
  for (auto &x : v)
    x = 1.0 / std::sqrt(static_cast<double>(n));
  return v;
}

double max_abs_diff(const DenseComplexMatrix &a, const DenseComplexMatrix &b) {
  double m = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      m = std::max(m, std::abs(a(r, c) - b(r, c)));
  return m;
}

double residual_norm(const LinearOperator &op, const ComplexVector &x, double lambda) {
  ComplexVector r = op.apply_uncounted(x);
  axpy(-lambda, x, r);
  return norm(r);
}

SolverConfig params(std::size_t nev, std::size_t mwin, std::size_t m, double tol,
                    SolveMode mode = SolveMode::normal) {
  SolverConfig cfg;
  cfg.nev = nev;
  cfg.mwin = mwin;
  cfg.m = m;
  cfg.tol = tol;
  cfg.mode = mode;
  return cfg;
}

constexpr std::uint64_t kSeeds = 10;

// J-partner orthogonality on both shipped (A, J) families.
Verdict criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const PlantedSpectrumMatrix g = gen_random_hjs(100, 1);
  DenseOperator dense(g.a);
  auto jc = canonical_block_J(200);
  TekPair tek = make_tek(24, kDefaultKappa, 1);
  struct Family {
    const char *name;
    const LinearOperator *a;
    const JOperator *j;
  };
  Rng rng(2024);
  double worst_v = 0.0, worst_a = 0.0;
  for (const Family &f : {Family{"canonical", &dense, jc.get()}, Family{"spin-tensor", tek.a.get(), tek.j.get()}}) {
    const double anorm = f.a->norm_estimate();
    for (int i = 0; i < 100; ++i) {
      const ComplexVector v = random_vector(f.a->dim(), rng);
      const double vv = dot(v, v).real();
      const ComplexVector w = f.j->apply_conj(v);
      worst_v = std::max(worst_v, std::abs(dot(w, v)) / vv);
      worst_a = std::max(worst_a, std::abs(dot(w, f.a->apply_uncounted(v))) / (anorm * vv));
    }
  }
  const double secs = seconds_since(t0);
  Verdict out;
  out.pass = worst_v <= 1e-12 && worst_a <= 1e-12 && secs < 5.0;
  out.detail = "max |<Jv*,v>|/|v|^2 " + fmt("%.2e", worst_v) + ", max |<Jv*,Av>|/(|A||v|^2) " + fmt("%.2e", worst_a) +
               ", " + fmt("%.2f", secs) + " s (limit 5)";
  return out;
}

// V, W orthogonality enforced after every restart of the J-symmetric solver.
Verdict criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_vw = 0.0, worst_vaw = 0.0;
  int restarts_checked = 0;
  bool all_converged = true;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const PlantedSpectrumMatrix g = gen_random_hjs(100, seed);
    DenseOperator op(g.a);
    auto j = canonical_block_J(200);
    const double anorm = op.norm_estimate();
    const RestartObserver observer = [&](const KrylovState &s, int) {
      ++restarts_checked;
      const std::size_t cols = s.j + 1;
      for (std::size_t c = 0; c < cols; ++c) {
        const ComplexVector aw = op.apply_uncounted(s.w[c]);
        for (std::size_t r = 0; r < cols; ++r) {
          worst_vw = std::max(worst_vw, std::abs(dot(s.v[r], s.w[c])));
          worst_vaw = std::max(worst_vaw, std::abs(dot(s.v[r], aw)) / anorm);
        }
      }
    };
    const SolverConfig cfg = params(5, 10, 50, 1e-13);
    const EigenResult r = trlan_jsym(op, *j, cfg, observer);
    all_converged = all_converged && r.converged;
    record_run("c2 hjs_n200 seed " + std::to_string(seed) + " jsym", cfg, r);
  }
  const double secs = seconds_since(t0);
  Verdict out;
  out.pass = worst_vw <= 1e-10 && worst_vaw <= 1e-9 && restarts_checked > 0 && all_converged && secs < 30.0;
  out.detail = std::to_string(restarts_checked) + " restarts over " + std::to_string(kSeeds) +
               " seeds: max |V^H W| " + fmt("%.2e", worst_vw) + ", max |V^H A W|/|A| " + fmt("%.2e", worst_vaw) +
               (all_converged ? "" : ", a run did not converge") + ", " + fmt("%.2f", secs) + " s (limit 30)";
  return out;
}

// J-orthogonality that plain Lanczos produces on its own.
Verdict criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const PlantedSpectrumMatrix g = gen_random_hjs(50, seed);
    DenseOperator op(g.a);
    auto j = canonical_block_J(100);
    KrylovState s = KrylovState::start(ones_unit(100), 10, SolveMode::normal, nullptr);
    lanczos_extend_plain(op, s, 0, 10);
    for (const auto &vr : s.v)
      for (const auto &vc : s.v)
        worst = std::max(worst, std::abs(dot(vr, j->apply_conj(vc))));
  }
  const double secs = seconds_since(t0);
  Verdict out;
  out.pass = worst <= 1e-8 && secs < 5.0;
  out.detail = "5 seeds, m=10: max |V^H (J V*)| " + fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s (limit 5)";
  return out;
}

// Each pair found once, and its partner rebuilt from J x*.
Verdict criterion4() {
  double worst_match = 0.0, worst_res = 0.0, worst_overlap = 0.0, slowest = 0.0;
  bool once = true, converged = true;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const PlantedSpectrumMatrix g = gen_random_hjs(100, seed);
    DenseOperator op(g.a);
    auto j = canonical_block_J(200);
    const SolverConfig cfg = params(5, 10, 50, 1e-13);
    const EigenResult r = trlan_jsym(op, *j, cfg);
    record_run("c4 hjs_n200 seed " + std::to_string(seed) + " jsym", cfg, r);
    converged = converged && r.converged;
    std::set<std::size_t> matched;
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
      std::size_t best = 0;
      for (std::size_t p = 1; p < g.planted.size(); ++p)
        if (std::abs(g.planted[p] - r.eigenvalues[i]) < std::abs(g.planted[best] - r.eigenvalues[i]))
          best = p;
      worst_match = std::max(worst_match, std::abs(g.planted[best] - r.eigenvalues[i]));
      once = matched.insert(best).second && once;
      const ComplexVector y = reconstruct_pair(*j, r.eigenvectors[i]);
      worst_res = std::max(worst_res, residual_norm(op, y, r.eigenvalues[i]));
      worst_overlap = std::max(worst_overlap, std::abs(dot(y, r.eigenvectors[i])));
    }
    slowest = std::max(slowest, seconds_since(t0));
  }
  Verdict out;
  out.pass = converged && once && worst_match <= 1e-10 && worst_res <= 1e-12 && worst_overlap <= 1e-10 &&
             slowest < 10.0;
  out.detail = std::to_string(kSeeds) + " seeds: max |ev - planted| " + fmt("%.2e", worst_match) +
               (once ? ", each value once" : ", a planted value was returned twice") + ", max |Ay - ev y| " +
               fmt("%.2e", worst_res) + ", max |y^H x| " + fmt("%.2e", worst_overlap) + ", slowest seed " +
               fmt("%.2f", slowest) + " s (limit 10)" + (converged ? "" : ", a run did not converge");
  return out;
}

// Dense oracle pairing, and the doubled baseline finding both pair members.
Verdict criterion5() {
  bool multiplicity = true, recovered = true;
  double worst_pair = 0.0, min_between = 1.0, worst_recovery = 0.0, slowest = 0.0;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const PlantedSpectrumMatrix g = gen_random_hjs(100, seed);
    const std::vector<double> oracle = hermitian_eigenvalues(g.a); // ascending
    for (std::size_t i = 0; i + 1 < oracle.size(); i += 2) {
      worst_pair = std::max(worst_pair, oracle[i + 1] - oracle[i]);
      if (i + 2 < oracle.size())
        min_between = std::min(min_between, oracle[i + 2] - oracle[i + 1]);
    }
    multiplicity = multiplicity && worst_pair <= 1e-10 && min_between > 1e-10;

    DenseOperator op(g.a);
    const SolverConfig cfg = params(10, 20, 100, 1e-13);
    const EigenResult r = trlan_standard(op, cfg);
    record_run("c5 hjs_n200 seed " + std::to_string(seed) + " standard", cfg, r);
    recovered = recovered && r.converged && r.eigenvalues.size() == 10;
    if (r.eigenvalues.size() == 10) {
      std::vector<double> got = r.eigenvalues;
      std::sort(got.rbegin(), got.rend());
      for (std::size_t i = 0; i < 5; ++i) {
        const double top = oracle[oracle.size() - 1 - 2 * i];
        worst_recovery = std::max({worst_recovery, std::abs(got[2 * i] - top), std::abs(got[2 * i + 1] - top)});
      }
    }
    slowest = std::max(slowest, seconds_since(t0));
  }
  recovered = recovered && worst_recovery <= 1e-10;
  Verdict out;
  out.pass = multiplicity && recovered && slowest < 60.0;
  out.detail = std::to_string(kSeeds) + " seeds: max pair gap " + fmt("%.2e", worst_pair) + ", min gap between pairs " +
               fmt("%.2e", min_between) + ", doubled baseline max |ev - oracle| " + fmt("%.2e", worst_recovery) +
               ", slowest seed " + fmt("%.2f", slowest) + " s (limit 60)";
  return out;
}

// Strict cost-model bounds over every run the suite made.
Verdict criterion6() {
  int checked = 0;
  std::vector<std::string> violations;
  for (const RunRecord &run : g_runs) {
    if (!run.converged || run.n_conv <= 1)
      continue;
    ++checked;
    CostBounds b = cost_bounds(run.cfg.nev, run.cfg.mwin, run.cfg.m, run.n_conv);
    if (run.cfg.mode == SolveMode::invert) {
      b.lower += run.n_conv;
      b.upper += run.n_conv;
    }
    const auto nmv = static_cast<long long>(run.n_mv);
    if (!(b.lower < nmv && nmv < b.upper))
      violations.push_back(run.tag + ": N_conv " + std::to_string(run.n_conv) + ", N_MV " + std::to_string(nmv) +
                           " not in (" + std::to_string(b.lower) + ", " + std::to_string(b.upper) + ")");
  }
  Verdict out;
  out.pass = checked > 0 && violations.empty();
  out.detail = std::to_string(checked) + " runs with N_conv > 1 checked, " + std::to_string(violations.size()) +
               " outside the strict bounds";
  for (const auto &v : violations)
    out.detail += "\n    " + v;
  return out;
}

// Planted random study at n = 2000.
Verdict criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentSpec spec;
  spec.matrix.kind = MatrixKind::random_hjs;
  spec.matrix.n_half = 1000;
  spec.seeds.clear();
  for (std::uint64_t s = 1; s <= kSeeds; ++s)
    spec.seeds.push_back(s);
  spec.jsym = params(5, 10, 50, 1e-13);
  spec.standard = params(10, 20, 100, 1e-13);
  const ComparisonReport rep = run_experiment(spec);
  for (const RunOutcome &r : rep.runs) {
    if (!r.completed)
      continue;
    const SolverConfig &cfg = r.algorithm == Algorithm::jsym ? spec.jsym : *spec.standard;
    g_runs.push_back({"c7 hjs_n2000 seed " + std::to_string(r.seed) + " " + to_string(r.algorithm), cfg, r.converged,
                      r.n_conv, r.n_mv});
  }
  const double avg = rep.jsym_n_mv.avg;
  const double ratio = rep.ratio.value_or(0.0);
  const bool tallies = std::all_of(rep.runs.begin(), rep.runs.end(), [](const RunOutcome &r) { return r.tally == r.n_mv; });
  Verdict out;
  out.pass = rep.all_converged() && tallies && avg >= 240.0 && avg <= 700.0 && rep.ratio && ratio >= 1.4 &&
             ratio <= 2.3;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "N_MV jsym [%g, %.1f, %g], standard [%g, %.1f, %g], ratio %.3f; N_conv jsym avg %.1f, standard avg %.1f",
                rep.jsym_n_mv.min, avg, rep.jsym_n_mv.max, rep.standard_n_mv.min, rep.standard_n_mv.avg,
                rep.standard_n_mv.max, ratio, rep.jsym_n_conv.avg, rep.standard_n_conv.avg);
  out.detail = std::string(buf) + (rep.all_converged() ? "" : ", a run did not converge") +
               (tallies ? "" : ", tally mismatch") + ", " + fmt("%.0f", seconds_since(t0)) + " s";
  return out;
}

// Gamma-matrix and Wilson-Dirac identities at d = 24.
Verdict criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  const GammaAlgebra &g = gamma_algebra();
  bool anticommute = true;
  for (int mu = 0; mu < 5; ++mu)
    for (int nu = 0; nu < 5; ++nu) {
      const DenseComplexMatrix ab = g.gamma[mu] * g.gamma[nu];
      const DenseComplexMatrix ba = g.gamma[nu] * g.gamma[mu];
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
          anticommute = anticommute && ab(r, c) + ba(r, c) == Complex{mu == nu && r == c ? 2.0 : 0.0};
    }
  const std::size_t d = 24;
  const DenseComplexMatrix g5 = spin_embed(g.gamma[4], d);
  const DenseComplexMatrix cc = spin_embed(g.c, d);
  double e_g5 = 0.0, e_c = 0.0, e_j = 0.0, e_h = 0.0, min_ev = 1e300;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto dirac = build_wilson_dirac(random_links(d, seed), kDefaultKappa);
    const DenseComplexMatrix dm = dirac->materialize();
    e_g5 = std::max(e_g5, max_abs_diff(g5 * dm * g5, dm.adjoint()));
    e_c = std::max(e_c, max_abs_diff(cc * dm * cc.transpose(), dm.transpose()));
    TekPair tek = build_A_from_D(dirac);
    const DenseComplexMatrix a = materialize(*tek.a);
    const DenseComplexMatrix j = tek.j->materialize();
    e_j = std::max(e_j, max_abs_diff(j * a * j.transpose(), a.transpose()));
    e_h = std::max(e_h, max_abs_diff(a, a.adjoint()));
    min_ev = std::min(min_ev, hermitian_eigenvalues(a).front());
  }
  const double secs = seconds_since(t0);
  Verdict out;
  out.pass = anticommute && e_g5 <= 1e-12 && e_c <= 1e-12 && e_j <= 1e-12 && e_h <= 1e-12 && min_ev >= -1e-12 &&
             secs < 10.0;
  out.detail = std::string(anticommute ? "anticommutation exact" : "anticommutation FAILED") +
               "; 5 seeds: |g5 D g5 - D^H| " + fmt("%.2e", e_g5) + ", |C D C^T - D^T| " + fmt("%.2e", e_c) +
               ", |J A J^-1 - A^T| " + fmt("%.2e", e_j) + ", |A - A^H| " + fmt("%.2e", e_h) + ", min eigenvalue " +
               fmt("%.4f", min_ev) + ", " + fmt("%.2f", secs) + " s (limit 10)";
  return out;
}

// TEK operator at SU(13) sizing, invert mode.
Verdict criterion9() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t d = su_n_colour_dim(13);
  const SolverConfig js = params(4, 8, 24, 1e-13, SolveMode::invert);
  const SolverConfig st = params(8, 16, 48, 1e-13, SolveMode::invert);
  bool converged = true;
  double worst_gap = 0.0, sum_j = 0.0, sum_s = 0.0;
  std::string per_seed;
  const std::uint64_t seeds = 3;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    TekPair tek = make_tek(d, kDefaultKappa, seed);
    const EigenResult rj = trlan_jsym(*tek.a, *tek.j, js);
    const EigenResult rs = trlan_standard(*tek.a, st);
    record_run("c9 tek_d168 seed " + std::to_string(seed) + " jsym", js, rj);
    record_run("c9 tek_d168 seed " + std::to_string(seed) + " standard", st, rs);
    converged = converged && rj.converged && rs.converged;
    if (rj.eigenvalues.size() == 4 && rs.eigenvalues.size() == 8) {
      std::vector<double> a = rj.eigenvalues, b = rs.eigenvalues;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      for (std::size_t i = 0; i < 4; ++i)
        worst_gap = std::max({worst_gap, std::abs(a[i] - b[2 * i]), std::abs(a[i] - b[2 * i + 1])});
    }
    sum_j += static_cast<double>(rj.n_matvec);
    sum_s += static_cast<double>(rs.n_matvec);
    per_seed += " " + std::to_string(rj.n_matvec) + "/" + std::to_string(rs.n_matvec);
  }
  const double ratio = sum_s / sum_j;
  const double secs = seconds_since(t0);
  Verdict out;
  out.pass = converged && worst_gap <= 1e-9 && ratio >= 1.3 && secs < 300.0;
  out.detail = "dim " + std::to_string(4 * d) + ", " + std::to_string(seeds) + " seeds, N_MV jsym/standard" + per_seed +
               ", ratio " + fmt("%.3f", ratio) + ", max eigenvalue disagreement " + fmt("%.2e", worst_gap) +
               (converged ? "" : ", a run did not converge") + ", " + fmt("%.0f", secs) + " s (limit 300)";
  return out;
}

std::map<std::string, std::string> read_tree(const fs::path &dir) {
  std::map<std::string, std::string> files;
  for (const auto &e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".csv")
      continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    files[e.path().filename().string()] = ss.str();
  }
  return files;
}

// Repeated compare invocations with one manifest.
Verdict criterion10(const fs::path &data_dir) {
  Verdict out;
  if (g_cli.empty()) {
    out.detail = "no --cli given";
    return out;
  }
  const fs::path work = fs::temp_directory_path() / "jlanczos_acceptance_determinism";
  fs::remove_all(work);
  bool same = true;
  std::size_t compared = 0;
  std::string notes;
  for (const char *manifest : {"determinism_random.conf", "determinism_tek.conf"}) {
    std::vector<std::map<std::string, std::string>> trees;
    for (const char *round : {"a", "b"}) {
      const fs::path outdir = work / (std::string(manifest) + "_" + round);
      const std::string cmd = "\"" + g_cli + "\" --config \"" + (data_dir / manifest).string() + "\" --out \"" +
                              outdir.string() + "\" compare > /dev/null 2>&1";
      const int rc = std::system(cmd.c_str());
      if (rc != 0)
        notes += std::string(", ") + manifest + " exited with status " + std::to_string(rc);
      trees.push_back(fs::exists(outdir) ? read_tree(outdir) : std::map<std::string, std::string>{});
    }
    same = same && !trees[0].empty() && trees[0] == trees[1];
    compared += trees[0].size();
  }
  out.pass = same && compared > 0 && notes.empty();
  out.detail = std::to_string(compared) + " CSV files from 2 manifests compared byte for byte" +
               (same ? ", identical" : ", DIFFERENT") + notes;
  return out;
}

} // namespace

int main(int argc, char **argv) {
  fs::path data_dir = fs::path(JL_TEST_DATA_DIR);
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) {
      g_cli = argv[++i];
    } else if (arg == "--data" && i + 1 < argc) {
      data_dir = argv[++i];
    } else {
      try {
        selected.insert(std::stoi(arg));
      } catch (const std::exception &) {
        std::fprintf(stderr, "usage: acceptance --cli PATH [--data DIR] [criterion...]\n");
        return 2;
      }
    }
  }
  auto wanted = [&](int n) { return selected.empty() || selected.count(n) > 0; };

  const std::vector<std::pair<int, std::function<Verdict()>>> order = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {8, criterion8}, {9, criterion9}, {7, criterion7}, {10, [&] { return criterion10(data_dir); }},
      {6, criterion6}};
  const std::map<int, std::string> names = {
      {1, "J-partner orthogonality"},
      {2, "J-orthogonality enforced after every restart"},
      {3, "J-orthogonality emerging in plain Lanczos"},
      {4, "degeneracy and pair reconstruction"},
      {5, "oracle pairing and doubled baseline"},
      {6, "cost-model bounds"},
      {7, "planted random study at n=2000"},
      {8, "gamma and Wilson-Dirac identities at d=24"},
      {9, "TEK at SU(13) sizing, invert mode"},
      {10, "determinism of compare"}};

  std::map<int, Verdict> verdicts;
  for (const auto &[n, fn] : order) {
    if (!wanted(n))
      continue;
    std::fprintf(stderr, "running criterion %d...\n", n);
    try {
      verdicts[n] = fn();
    } catch (const std::exception &e) {
      verdicts[n] = {false, std::string("exception: ") + e.what()};
    }
  }

  int failed = 0;
  for (const auto &[n, v] : verdicts) {
    std::printf("criterion %2d %s: %s\n    %s\n", n, v.pass ? "PASS" : "FAIL", names.at(n).c_str(), v.detail.c_str());
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(verdicts.size()) - failed, verdicts.size());
  return failed == 0 ? 0 : 1;
}
