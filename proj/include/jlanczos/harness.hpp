#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jlanczos/operators.hpp"
#include "jlanczos/trlan.hpp"

namespace jlanczos {

enum class MatrixKind { random_hjs, tek, file };
enum class Algorithm { jsym, standard };

const char *to_string(Algorithm a);
const char *to_string(SolveMode m);

struct MatrixSource {
  MatrixKind kind = MatrixKind::random_hjs;
  std::size_t n_half = 1000;
  std::size_t colour_dim = 24; // tek; su_n sizing is resolved by the caller
  double kappa = 0.19;
  std::filesystem::path path;
};

/// A test problem: the operator, its J (when known) and, for generated
/// matrices, the planted spectrum.
struct Problem {
  std::unique_ptr<LinearOperator> a;
  std::unique_ptr<JOperator> j;
  std::vector<double> planted; // each planted value has multiplicity two
  std::string label;
};

Problem make_problem(const MatrixSource &source, std::uint64_t seed);

/// (2 nev, 2 mwin, 2 m) with every other setting copied.
SolverConfig doubled(const SolverConfig &cfg);

struct ExperimentSpec {
  MatrixSource matrix;
  std::vector<std::uint64_t> seeds{1};
  SolverConfig jsym;
  /// Baseline settings; the doubling rule applies when absent.
  std::optional<SolverConfig> standard;
  bool run_jsym = true;
  bool run_standard = true;
  /// Per-run CSVs and summary.txt are written here when non-empty.
  std::filesystem::path out_dir;

  SolverConfig standard_config() const;
};

struct RunOutcome {
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::jsym;
  bool completed = false; // solver returned (converged or not)
  bool converged = false;
  int n_conv = 0;
  std::uint64_t n_mv = 0;
  std::uint64_t tally = 0; // matvec events counted on the operator
  std::uint64_t cg_iterations = 0;
  bool bounds_ok = true;
  int reorder_events = 0;
  double seconds = 0.0;
  std::vector<double> eigenvalues;
  std::vector<double> residuals;
  std::string error;
  std::filesystem::path csv;
};

struct Aggregate {
  double min = 0.0;
  double avg = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

struct ComparisonReport {
  std::vector<RunOutcome> runs;
  Aggregate jsym_n_conv, jsym_n_mv, standard_n_conv, standard_n_mv;
  /// avg N_MV(standard) / avg N_MV(jsym) over seeds where both converged.
  std::optional<double> ratio;
  std::vector<std::string> violations;

  bool all_converged() const;
  bool ok() const { return all_converged() && violations.empty(); }
};

ComparisonReport run_experiment(const ExperimentSpec &spec);

/// Aggregate over completed runs of one algorithm.
Aggregate aggregate(const std::vector<RunOutcome> &runs, Algorithm algorithm, bool n_mv);

std::string format_summary(const ExperimentSpec &spec, const ComparisonReport &report);

enum class Which { largest, smallest };

struct OracleVerdict {
  bool pass = false;
  bool multiplicity_ok = true; // each distinct value appears exactly twice (paired inputs only)
  std::vector<double> oracle;   // all eigenvalues, ordered from the requested end
  std::vector<double> expected;
  std::vector<double> gaps;
  std::string message;
};

struct OracleOptions {
  Which which = Which::largest;
  std::size_t count = 1;
  /// The operator is Hermitian J-symmetric: require oracle multiplicity two.
  bool paired_spectrum = true;
  /// The result lists each degenerate pair once (J-symmetric solver); each
  /// result value is then matched against one distinct oracle value.
  /// Otherwise results are matched one for one, so a doubled baseline run
  /// must find every pair member.
  bool pairs_listed_once = true;
  double tol = 1e-9;
};

/// Compares the first `count` result eigenvalues, taken from the requested end,
/// with a dense Jacobi oracle on the materialized operator.
OracleVerdict verify_against_oracle(const LinearOperator &op, const EigenResult &result, const OracleOptions &opts);

inline constexpr std::size_t kMaxOracleDim = 1000;

} // namespace jlanczos
