#pragma once

#include <functional>
#include <optional>

#include "jlanczos/linalg.hpp"

namespace jlanczos {

struct CGConfig {
  double tol = 1e-14; // relative residual target
  int maxiter = 10000;

  void validate() const;
};

struct CGReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  /// The true residual stopped decreasing above the target (rounding floor).
  bool stagnated = false;
};

/// Thrown when p^H A p <= 0, i.e. the operator is not positive definite.
class NotPositiveDefiniteError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Mapping x -> A x used by the solver. The caller decides how applications are counted.
using ApplyFn = std::function<ComplexVector(const ComplexVector &)>;

struct CGSolution {
  ComplexVector x;
  CGReport report;
};

/// Conjugate gradient for a Hermitian positive definite system A x = b.
///
/// Starts from x0 (zero when absent). Convergence is accepted only when the
/// true residual b - A x meets the target. When the recurrence reports
/// convergence but the true residual does not, the iteration restarts from the
/// true residual; if that no longer halves the true residual, the solve stops
/// with stagnated = true. Both this and reaching maxiter return the iterate
/// with the smallest true residual seen, with converged = false.
CGSolution cg_solve(const ApplyFn &apply, const ComplexVector &b, const CGConfig &cfg,
                    const std::optional<ComplexVector> &x0 = std::nullopt);

} // namespace jlanczos
