#pragma once

#include <cstdint>
#include <vector>

#include "jlanczos/linalg.hpp"

namespace jlanczos {

/// Random Hermitian J-symmetric matrix A = U diag(L, L) U^H with
/// U = [[X1, -X2*], [X2, X1*]] and canonical block J.
struct PlantedSpectrumMatrix {
  DenseComplexMatrix a;
  std::vector<double> planted; // length n/2, each an eigenvalue of multiplicity two
  DenseComplexMatrix x1;
  DenseComplexMatrix x2;
  std::uint64_t seed = 0;
  int retries = 0; // random columns redrawn after Gram-Schmidt breakdown
};

inline constexpr int kMaxColumnRetries = 8;

/// Planted eigenvalues are uniform on (0, 1); entries of X1 and X2 are uniform on
/// the square (-1, 1) x (-1, 1)i before the paired Gram-Schmidt. Each column
/// u_j = [x1_j; x2_j] is orthonormalized against every earlier u_i and its
/// partner J u_i*, which enforces X1^H X1 + X2^H X2 = I and X1^T X2 = X2^T X1.
PlantedSpectrumMatrix gen_random_hjs(std::size_t n_half, std::uint64_t seed);

/// Real orthogonal dim x dim matrix: Gaussian columns orthonormalized in order.
DenseComplexMatrix gen_random_real_orthogonal(std::size_t dim, std::uint64_t seed);

/// max |(X1^H X1 + X2^H X2 - I)_rc| and max |(X1^T X2 - X2^T X1)_rc|.
struct UnitaryConstraintResiduals {
  double unitarity = 0.0;
  double symplectic = 0.0;
};
UnitaryConstraintResiduals constraint_residuals(const DenseComplexMatrix &x1, const DenseComplexMatrix &x2);

} // namespace jlanczos
