#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "jlanczos/cg.hpp"
#include "jlanczos/linalg.hpp"

namespace jlanczos {

inline constexpr double kStagnationSlack = 10.0;

/// Matrix-free Hermitian operator with application counters.
///
/// Three counters are kept: `matvec_count` tallies apply() and apply_inverse()
/// (one each; this is the cost model of the eigensolvers), `auxiliary_count`
/// tallies apply_uncounted() (residual checks, norm estimates, materialization),
/// and `cg_iterations` tallies inner CG iterations of apply_inverse(). All are
/// atomic, so concurrent applications never lose counts.
class LinearOperator {
public:
  explicit LinearOperator(std::size_t dim) : dim_(dim) {}
  virtual ~LinearOperator() = default;
  LinearOperator(const LinearOperator &) = delete;
  LinearOperator &operator=(const LinearOperator &) = delete;

  std::size_t dim() const noexcept { return dim_; }

  ComplexVector apply(const ComplexVector &v) const;
  /// Solves A x = v by CG from a zero initial guess. A solve that stagnates at
  /// the rounding floor within kStagnationSlack * cfg.tol is accepted and
  /// tallied in stagnated_solves(); any other shortfall throws ConvergenceError.
  /// Throws NotPositiveDefiniteError on breakdown.
  ComplexVector apply_inverse(const ComplexVector &v, const CGConfig &cfg) const;
  ComplexVector apply_uncounted(const ComplexVector &v) const;

  std::uint64_t matvec_count() const noexcept { return matvecs_.load(); }
  std::uint64_t auxiliary_count() const noexcept { return auxiliary_.load(); }
  std::uint64_t cg_iterations() const noexcept { return cg_iterations_.load(); }
  std::uint64_t stagnated_solves() const noexcept { return stagnated_.load(); }
  void reset_counters() noexcept;

  /// ||A|| estimated once by 20 power iterations and cached.
  double norm_estimate() const;

protected:
  virtual void apply_raw(const ComplexVector &in, ComplexVector &out) const = 0;

private:
  void check_dim(const ComplexVector &v) const;

  std::size_t dim_;
  mutable std::atomic<std::uint64_t> matvecs_{0};
  mutable std::atomic<std::uint64_t> auxiliary_{0};
  mutable std::atomic<std::uint64_t> cg_iterations_{0};
  mutable std::atomic<std::uint64_t> stagnated_{0};
  mutable std::once_flag norm_once_;
  mutable double norm_ = 0.0;
};

/// Dense matrix realization. The matrix is assumed Hermitian; see hermiticity_residual.
class DenseOperator final : public LinearOperator {
public:
  explicit DenseOperator(DenseComplexMatrix a);
  const DenseComplexMatrix &matrix() const noexcept { return a_; }

protected:
  void apply_raw(const ComplexVector &in, ComplexVector &out) const override;

private:
  DenseComplexMatrix a_;
};

class DiagonalOperator final : public LinearOperator {
public:
  explicit DiagonalOperator(std::vector<double> diagonal);
  const std::vector<double> &diagonal() const noexcept { return d_; }

protected:
  void apply_raw(const ComplexVector &in, ComplexVector &out) const override;

private:
  std::vector<double> d_;
};

std::unique_ptr<LinearOperator> identity_operator(std::size_t n);

/// Dense copy of an operator, built column by column from uncounted applications.
DenseComplexMatrix materialize(const LinearOperator &op);

/// CG on an operator. Applications are tallied on the auxiliary counter, so
/// oracle solves never disturb an eigensolver's matvec count.
CGSolution cg_solve(const LinearOperator &op, const ComplexVector &b, const CGConfig &cfg,
                    const std::optional<ComplexVector> &x0 = std::nullopt);

/// Power-method estimate of ||A|| for a Hermitian operator (uncounted applications).
double estimate_norm(const LinearOperator &op, int iterations = 20);

/// The conjugate-linear map v -> J v* for a real orthogonal skew-symmetric J.
class JOperator {
public:
  explicit JOperator(std::size_t dim) : dim_(dim) {}
  virtual ~JOperator() = default;

  std::size_t dim() const noexcept { return dim_; }
  ComplexVector apply_conj(const ComplexVector &v) const;
  /// Name recorded in file sidecars: "canonical-block" or "spin-tensor".
  virtual std::string realization() const = 0;

  /// The real matrix J itself.
  DenseComplexMatrix materialize() const;

protected:
  virtual void apply_conj_raw(const ComplexVector &in, ComplexVector &out) const = 0;

private:
  std::size_t dim_;
};

/// J = [[O, -I], [I, O]] with (n/2)-sized blocks.
class CanonicalBlockJ final : public JOperator {
public:
  explicit CanonicalBlockJ(std::size_t n);
  std::string realization() const override { return "canonical-block"; }

protected:
  void apply_conj_raw(const ComplexVector &in, ComplexVector &out) const override;
};

/// J = S (x) I_d with a real 4x4 spin matrix S; the spin index is the slow index,
/// so component (alpha, a) lives at alpha * d + a.
class SpinTensorJ final : public JOperator {
public:
  SpinTensorJ(const RealMatrix &spin, std::size_t colour_dim);
  std::string realization() const override { return "spin-tensor"; }
  std::size_t colour_dim() const noexcept { return d_; }

protected:
  void apply_conj_raw(const ComplexVector &in, ComplexVector &out) const override;

private:
  RealMatrix spin_;
  std::size_t d_;
};

std::unique_ptr<JOperator> canonical_block_J(std::size_t n);

/// y = J x*, the J-partner of an eigenvector x.
ComplexVector reconstruct_pair(const JOperator &j, const ComplexVector &x);

/// max_rc |(A - A^H)_rc|, on a materialized matrix.
double hermiticity_residual(const DenseComplexMatrix &a);
/// max_rc |(J A J^-1 - A^T)_rc| with J^-1 = J^T.
double j_symmetry_residual(const DenseComplexMatrix &a, const DenseComplexMatrix &j);

} // namespace jlanczos
