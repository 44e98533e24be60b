#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <utility>

#include "jlanczos/linalg.hpp"
#include "jlanczos/operators.hpp"

namespace jlanczos {

/// Euclidean gamma matrices in the chiral basis, with gamma5 = g4 g1 g2 g3,
/// C = g4 g2 and J = C g5.
struct GammaAlgebra {
  std::array<DenseComplexMatrix, 5> gamma; // gamma[0..3] = g1..g4, gamma[4] = g5
  DenseComplexMatrix c;
  DenseComplexMatrix j_spin;

  /// J as a real 4x4 matrix, for SpinTensorJ.
  RealMatrix j_spin_real() const;
};

const GammaAlgebra &gamma_algebra();

inline constexpr double kDefaultKappa = 0.19;

/// Colour dimension N^2 - 1 of the adjoint representation of SU(N).
std::size_t su_n_colour_dim(std::size_t n);
/// Dimension 4 (N^2 - 1) of the TEK operator for SU(N).
std::size_t su_n_operator_dim(std::size_t n);

/// Wilson-Dirac operator of the single-site (TEK) reduction:
///   D = I - kappa sum_mu [ (1 - g_mu) (x) V_mu + (1 + g_mu) (x) V_mu^T ].
/// Vectors are laid out spin-major: component (alpha, a) at alpha * d + a.
class WilsonDiracOperator {
public:
  /// Each V must be real (imaginary parts exactly zero). Non-orthogonal V are
  /// accepted with a warning on stderr; see orthogonal().
  WilsonDiracOperator(const std::array<DenseComplexMatrix, 4> &links, double kappa);

  std::size_t colour_dim() const noexcept { return d_; }
  std::size_t dim() const noexcept { return 4 * d_; }
  double kappa() const noexcept { return kappa_; }
  bool orthogonal() const noexcept { return orthogonal_; }

  ComplexVector apply(const ComplexVector &v) const;
  ComplexVector apply_adjoint(const ComplexVector &v) const;
  DenseComplexMatrix materialize() const;

private:
  ComplexVector hop(const ComplexVector &v, bool adjoint) const;

  std::size_t d_;
  double kappa_;
  bool orthogonal_ = true;
  std::array<std::vector<double>, 4> v_;  // row-major V_mu
  std::array<std::vector<double>, 4> vt_; // row-major V_mu^T
};

/// Four seeded random real orthogonal d x d link matrices.
std::array<DenseComplexMatrix, 4> random_links(std::size_t d, std::uint64_t seed);

std::shared_ptr<const WilsonDiracOperator> build_wilson_dirac(const std::array<DenseComplexMatrix, 4> &links,
                                                              double kappa);

/// A = D D^H. One A-application (two D-type applications) counts as one matvec.
class TekOperator final : public LinearOperator {
public:
  explicit TekOperator(std::shared_ptr<const WilsonDiracOperator> d);
  const WilsonDiracOperator &dirac() const noexcept { return *d_; }

protected:
  void apply_raw(const ComplexVector &in, ComplexVector &out) const override;

private:
  std::shared_ptr<const WilsonDiracOperator> d_;
};

/// J = (C g5) (x) I_d for an operator of dimension 4 d.
std::unique_ptr<JOperator> spin_tensor_J(std::size_t colour_dim);

struct TekPair {
  std::unique_ptr<LinearOperator> a;
  std::unique_ptr<JOperator> j;
};

TekPair build_A_from_D(std::shared_ptr<const WilsonDiracOperator> d);

/// Convenience: random links of colour dimension d, then A and J.
TekPair make_tek(std::size_t d, double kappa, std::uint64_t seed);

/// Dense spin (x) colour embedding S (x) I_d of a 4x4 spin matrix.
DenseComplexMatrix spin_embed(const DenseComplexMatrix &spin, std::size_t d);

} // namespace jlanczos
