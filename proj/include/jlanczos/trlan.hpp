#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "jlanczos/lanczos.hpp"

namespace jlanczos {

enum class StartVector { ones, seeded_random };

struct SolverConfig {
  std::size_t nev = 5;
  std::size_t mwin = 10;
  std::size_t m = 50;
  SolveMode mode = SolveMode::normal;
  double tol = 1e-13; // absolute residual target
  int max_restarts = 10000;
  /// CG settings for invert mode; when empty, tol = min(1e-14, tol / 10).
  std::optional<CGConfig> cg;
  StartVector start = StartVector::ones;
  /// Seeds the random start vector and breakdown replacement vectors.
  std::uint64_t seed = 0;

  CGConfig resolved_cg() const;
  /// Checks 1 <= nev <= mwin < m, tol > 0 and the dimension limit for n.
  void validate(std::size_t n, bool jsym) const;
};

struct TargetRecord {
  double eig_estimate = 0.0;
  double res_estimate = 0.0;
  std::optional<double> res_true;
  bool converged = false;

  friend bool operator==(const TargetRecord &, const TargetRecord &) = default;
};

/// State of the nev target slots after the converged-first sort of one restart.
struct ConvergenceRecord {
  int restart = 0;
  std::uint64_t cum_matvec = 0;
  std::vector<TargetRecord> targets;

  friend bool operator==(const ConvergenceRecord &, const ConvergenceRecord &) = default;
};

struct EigenResult {
  std::vector<double> eigenvalues; // eigenvalues of A
  Basis eigenvectors;
  Basis partners; // J x_i*, J-symmetric solver only
  std::vector<double> residuals;
  /// True when residuals[i] is the last estimate because no true residual was computed.
  std::vector<bool> residual_estimated;
  bool converged = false;
  int n_restarts = 0;          // outer cycles, N_conv
  std::uint64_t n_matvec = 0;  // N_MV
  std::uint64_t cg_iterations = 0;
  std::uint64_t stagnated_solves = 0; // inverse solves accepted at the CG rounding floor
  int breakdowns = 0;
  int reorder_events = 0; // restarts where a new converged value landed above a locked one
  int capped_steps = 0;
  std::vector<std::size_t> thickness; // k chosen at each restart
  std::vector<ConvergenceRecord> records;
};

/// Called right after each restart compression with the truncated state
/// (j = k, v_{k+1} carried over) and the 1-based restart index.
using RestartObserver = std::function<void(const KrylovState &, int)>;

/// Thick-restart Lanczos for a Hermitian J-symmetric operator: each step
/// orthogonalizes against V and W = J V*, so each degenerate pair is found once.
EigenResult trlan_jsym(const LinearOperator &op, const JOperator &j_op, const SolverConfig &cfg,
                       const RestartObserver &observer = {});

/// Standard thick-restart Lanczos (no dual basis).
EigenResult trlan_standard(const LinearOperator &op, const SolverConfig &cfg, const RestartObserver &observer = {});

/// k = min(icnv + mwin, m - 1).
std::size_t restart_window(std::size_t icnv, std::size_t mwin, std::size_t m);

/// res_est = c |t ev| with ev = 1/lambda for a Ritz value lambda of A^-1.
double invert_residual_estimate(double lambda, double coupling, double c);

/// Lower and upper N_MV bounds m + (m - mwin - nev)(N - 1) and m + (m - mwin)(N - 1).
struct CostBounds {
  long long lower = 0;
  long long upper = 0;
};
CostBounds cost_bounds(std::size_t nev, std::size_t mwin, std::size_t m, int n_conv);
/// Strict check of the bounds; invert mode shifts both by n_conv (one ||A v|| per restart).
bool within_cost_bounds(const EigenResult &r, const SolverConfig &cfg);

} // namespace jlanczos
