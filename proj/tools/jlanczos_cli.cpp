// Command-line front end: gen, solve, compare and verify.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "jlanczos/harness.hpp"
#include "jlanczos/io.hpp"
#include "jlanczos/matrix_gen.hpp"
#include "jlanczos/tek.hpp"

namespace fs = std::filesystem;
using namespace jlanczos;

namespace {

constexpr int kExitFailedRun = 1;
constexpr int kExitBadArguments = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

struct Options {
  std::string algo = "jsym";
  std::string mode = "normal";
  std::size_t nev = 5;
  std::size_t mwin = 10;
  std::size_t m = 50;
  double tol = 1e-13;
  std::uint64_t seed = 1;
  std::size_t seeds = 1;
  std::string matrix = "random";
  std::size_t n_half = 1000;
  std::size_t d = 24;
  std::size_t su_n = 0;
  double kappa = kDefaultKappa;
  std::string out;
  std::string start = "ones";
  int max_restarts = 10000;
};

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

MatrixSource matrix_source(const Options &o) {
  MatrixSource src;
  src.n_half = o.n_half;
  src.colour_dim = o.su_n > 0 ? su_n_colour_dim(o.su_n) : o.d;
  src.kappa = o.kappa;
  if (o.matrix == "random") {
    src.kind = MatrixKind::random_hjs;
  } else if (o.matrix == "tek") {
    src.kind = MatrixKind::tek;
  } else if (o.matrix.rfind("file:", 0) == 0 && o.matrix.size() > 5) {
    src.kind = MatrixKind::file;
    src.path = o.matrix.substr(5);
  } else {
    throw UsageError("--matrix must be random, tek or file:PATH");
  }
  return src;
}

SolverConfig solver_config(const Options &o) {
  SolverConfig cfg;
  cfg.nev = o.nev;
  cfg.mwin = o.mwin;
  cfg.m = o.m;
  cfg.tol = o.tol;
  cfg.mode = o.mode == "invert" ? SolveMode::invert : SolveMode::normal;
  cfg.max_restarts = o.max_restarts;
  cfg.start = o.start == "random" ? StartVector::seeded_random : StartVector::ones;
  cfg.seed = o.seed;
  return cfg;
}

std::vector<std::uint64_t> seed_list(const Options &o) {
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < o.seeds; ++i)
    seeds.push_back(o.seed + i);
  return seeds;
}

int run_gen(const Options &o) {
  if (o.out.empty())
    throw UsageError("gen needs --out DIR");
  const MatrixSource src = matrix_source(o);
  if (src.kind == MatrixKind::file)
    throw UsageError("gen writes random or tek matrices");
  fs::create_directories(o.out);
  for (std::uint64_t seed : seed_list(o)) {
    MatrixMeta meta;
    meta.seed = seed;
    DenseComplexMatrix a;
    std::string name;
    if (src.kind == MatrixKind::random_hjs) {
      PlantedSpectrumMatrix g = gen_random_hjs(src.n_half, seed);
      a = std::move(g.a);
      meta.source = "random-hjs";
      meta.j_realization = "canonical-block";
      meta.planted = std::move(g.planted);
      name = "hjs_n" + std::to_string(2 * src.n_half);
    } else {
      TekPair t = make_tek(src.colour_dim, src.kappa, seed);
      a = materialize(*t.a);
      meta.source = "tek";
      meta.j_realization = t.j->realization();
      meta.colour_dim = src.colour_dim;
      meta.kappa = src.kappa;
      name = "tek_d" + std::to_string(src.colour_dim);
    }
    const fs::path path = fs::path(o.out) / (name + "_seed" + std::to_string(seed) + ".mtx");
    write_matrix_market(path, a);
    write_sidecar(path, meta);
    std::cout << path.string() << "\n";
  }
  return 0;
}

void print_eigenpairs(const EigenResult &r) {
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    std::printf("%3zu  %.17g  residual %.3e%s\n", i + 1, r.eigenvalues[i], r.residuals[i],
                r.residual_estimated[i] ? " (estimate)" : "");
  }
  std::printf("converged %s  N_conv %d  N_MV %llu", r.converged ? "yes" : "no", r.n_restarts,
              static_cast<unsigned long long>(r.n_matvec));
  if (r.cg_iterations > 0)
    std::printf("  CG iterations %llu", static_cast<unsigned long long>(r.cg_iterations));
  std::printf("\n");
}

EigenResult solve_one(const Options &o, const Problem &p, const SolverConfig &cfg) {
  if (o.algo == "jsym") {
    if (!p.j)
      throw UsageError("no J is known for this matrix; use --algo standard");
    return trlan_jsym(*p.a, *p.j, cfg);
  }
  return trlan_standard(*p.a, cfg);
}

int run_solve(const Options &o) {
  const Problem p = make_problem(matrix_source(o), o.seed);
  const SolverConfig cfg = solver_config(o);
  const EigenResult r = solve_one(o, p, cfg);
  print_eigenpairs(r);
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    const fs::path csv = fs::path(o.out) / (p.label + "_seed" + std::to_string(o.seed) + "_" + o.algo + ".csv");
    emit_convergence_csv(r.records, csv);
  }
  return r.converged ? 0 : kExitFailedRun;
}

int run_compare(const Options &o) {
  ExperimentSpec spec;
  spec.matrix = matrix_source(o);
  spec.seeds = seed_list(o);
  spec.jsym = solver_config(o);
  spec.out_dir = o.out;
  const ComparisonReport report = run_experiment(spec);
  std::cout << format_summary(spec, report);
  return report.all_converged() ? 0 : kExitFailedRun;
}

int run_verify(const Options &o) {
  const Problem p = make_problem(matrix_source(o), o.seed);
  const SolverConfig cfg = solver_config(o);
  const EigenResult r = solve_one(o, p, cfg);
  print_eigenpairs(r);
  OracleOptions opts;
  opts.which = cfg.mode == SolveMode::normal ? Which::largest : Which::smallest;
  opts.count = cfg.nev;
  opts.paired_spectrum = p.j != nullptr;
  opts.pairs_listed_once = o.algo == "jsym";
  const OracleVerdict v = verify_against_oracle(*p.a, r, opts);
  for (std::size_t i = 0; i < v.gaps.size(); ++i)
    std::printf("oracle %3zu  %.17g  gap %.3e\n", i + 1, v.expected[i], v.gaps[i]);
  std::printf("verdict %s: %s\n", v.pass ? "pass" : "fail", v.message.c_str());
  return r.converged && v.pass ? 0 : kExitFailedRun;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Thick-restart Lanczos for Hermitian J-symmetric matrices"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value manifest; command-line flags override it");

  Options o;
  app.add_option("--algo", o.algo, "Algorithm for solve/verify")->check(CLI::IsMember({"jsym", "standard"}));
  app.add_option("--mode", o.mode, "normal: largest eigenvalues; invert: smallest, through CG")
      ->check(CLI::IsMember({"normal", "invert"}));
  app.add_option("--nev", o.nev, "Wanted eigenpairs (each J-pair counts once for jsym)");
  app.add_option("--mwin", o.mwin, "Restart window");
  app.add_option("--m", o.m, "Maximum Krylov dimension");
  app.add_option("--tol", o.tol, "Absolute residual tolerance");
  app.add_option("--seed", o.seed, "First matrix seed");
  app.add_option("--seeds", o.seeds, "Number of consecutive seeds")->check(CLI::PositiveNumber);
  app.add_option("--matrix", o.matrix, "random, tek or file:PATH");
  app.add_option("--n-half", o.n_half, "Half dimension of random matrices")->check(CLI::PositiveNumber);
  app.add_option("--d", o.d, "Colour dimension of the TEK operator")->check(CLI::PositiveNumber);
  app.add_option("--su-n", o.su_n, "Size the TEK operator for SU(N): d = N^2 - 1");
  app.add_option("--kappa", o.kappa, "Hopping parameter");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--start", o.start, "Start vector")->check(CLI::IsMember({"ones", "random"}));
  app.add_option("--max-restarts", o.max_restarts, "Restart cap")->check(CLI::PositiveNumber);

  auto *gen = app.add_subcommand("gen", "Write test matrices in Matrix Market format with a JSON sidecar");
  auto *solve = app.add_subcommand("solve", "Run one algorithm on one matrix");
  auto *compare = app.add_subcommand("compare", "Run both algorithms over a range of seeds");
  auto *verify = app.add_subcommand("verify", "Solve and check against a dense oracle");
  for (auto *sub : {gen, solve, compare, verify})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadArguments;
  }

  try {
    if (gen->parsed())
      return run_gen(o);
    if (solve->parsed())
      return run_solve(o);
    if (compare->parsed())
      return run_compare(o);
    return run_verify(o);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArguments;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArguments;
  } catch (const IoError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
