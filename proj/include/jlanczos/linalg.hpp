#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jlanczos {

using Complex = std::complex<double>;

class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when Gram-Schmidt leaves nothing of the input: v lies in the span of
/// the supplied bases.
class BreakdownError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Fixed-length complex vector.
class ComplexVector {
public:
  ComplexVector() = default;
  explicit ComplexVector(std::size_t n) : data_(n, Complex{0.0, 0.0}) {}
  ComplexVector(std::initializer_list<Complex> init) : data_(init) {}
  explicit ComplexVector(std::vector<Complex> data) : data_(std::move(data)) {}

  std::size_t size() const noexcept { return data_.size(); }
  Complex &operator[](std::size_t i) noexcept { return data_[i]; }
  const Complex &operator[](std::size_t i) const noexcept { return data_[i]; }
  Complex *data() noexcept { return data_.data(); }
  const Complex *data() const noexcept { return data_.data(); }
  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }
  std::span<Complex> span() noexcept { return data_; }
  std::span<const Complex> span() const noexcept { return data_; }

  bool all_finite() const noexcept;

  friend bool operator==(const ComplexVector &, const ComplexVector &) = default;

private:
  std::vector<Complex> data_;
};

/// Row-major dense complex matrix.
class DenseComplexMatrix {
public:
  DenseComplexMatrix() = default;
  DenseComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

  static DenseComplexMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Complex &operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const Complex &operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }
  const Complex *row(std::size_t r) const noexcept { return data_.data() + r * cols_; }
  Complex *row(std::size_t r) noexcept { return data_.data() + r * cols_; }

  ComplexVector column(std::size_t c) const;
  void set_column(std::size_t c, const ComplexVector &v);

  DenseComplexMatrix adjoint() const;
  DenseComplexMatrix transpose() const;
  DenseComplexMatrix conjugate() const;

  /// Largest entry magnitude.
  double max_abs() const noexcept;
  bool all_finite() const noexcept;

  friend bool operator==(const DenseComplexMatrix &, const DenseComplexMatrix &) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

DenseComplexMatrix operator*(const DenseComplexMatrix &a, const DenseComplexMatrix &b);
DenseComplexMatrix operator-(const DenseComplexMatrix &a, const DenseComplexMatrix &b);
ComplexVector operator*(const DenseComplexMatrix &a, const ComplexVector &x);

/// Row-major dense real matrix; used for projected matrices and their eigenvectors.
class RealMatrix {
public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static RealMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double &operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  RealMatrix transpose() const;
  double max_abs() const noexcept;

  friend bool operator==(const RealMatrix &, const RealMatrix &) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

RealMatrix operator*(const RealMatrix &a, const RealMatrix &b);

/// The (m+1) x m projected matrix of a thick-restart Lanczos decomposition.
///
/// Only the lower triangle of the leading square block is stored; reads above
/// the diagonal are mirrored, so the leading block is symmetric by construction.
/// Row m (0-based) carries the coupling to the residual vector.
class ProjectedMatrix {
public:
  ProjectedMatrix() = default;
  explicit ProjectedMatrix(std::size_t m) : m_(m), data_((m + 1) * m, 0.0) {}

  std::size_t max_columns() const noexcept { return m_; }

  /// Entry (r, c), 0-based, r <= m, c < m.
  double operator()(std::size_t r, std::size_t c) const noexcept {
    return r >= c ? data_[r * m_ + c] : data_[c * m_ + r];
  }
  void set(std::size_t r, std::size_t c, double value) noexcept {
    if (r >= c)
      data_[r * m_ + c] = value;
    else
      data_[c * m_ + r] = value;
  }

  /// Leading j x j symmetric block.
  RealMatrix leading_block(std::size_t j) const;

  void clear() noexcept;

  friend bool operator==(const ProjectedMatrix &, const ProjectedMatrix &) = default;

private:
  std::size_t m_ = 0;
  std::vector<double> data_;
};

// Vector kernels. dot(a, b) is a^H b.
Complex dot(std::span<const Complex> a, std::span<const Complex> b);
double norm(std::span<const Complex> a);
/// y += alpha * x
void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y);
void scale(std::span<Complex> x, double factor);

inline Complex dot(const ComplexVector &a, const ComplexVector &b) { return dot(a.span(), b.span()); }
inline double norm(const ComplexVector &a) { return norm(a.span()); }
inline void axpy(Complex alpha, const ComplexVector &x, ComplexVector &y) { axpy(alpha, x.span(), y.span()); }

ComplexVector conj(const ComplexVector &v);
ComplexVector operator-(const ComplexVector &a, const ComplexVector &b);
ComplexVector operator+(const ComplexVector &a, const ComplexVector &b);
ComplexVector operator*(Complex alpha, const ComplexVector &v);

/// Columns stored as separate vectors, all of one length.
using Basis = std::vector<ComplexVector>;

/// Y = X Z restricted to the first `cols` columns of Z, where X holds Z.rows() columns.
Basis combine_columns(const Basis &x, const RealMatrix &z, std::size_t cols);

struct OrthonormalizeResult {
  ComplexVector vector;
  double b0 = 0.0;     // norm of the residual before the final normalization
  int repeats = 0;     // Gram-Schmidt sweeps executed
  bool capped = false; // sweep cap hit before the repeat rule was satisfied
};

inline constexpr double kReorthogonalizationGamma = 1.4142135623730951; // sqrt(2)
inline constexpr int kMaxReorthogonalizationSweeps = 5;
inline constexpr double kBreakdownRelativeNorm = 1e-14;

/// Modified Gram-Schmidt of v against every column of `bases` with the
/// repeat-until-stable rule: sweeps continue until b1 * gamma > b0, where b0 is
/// the norm before a sweep and b1 the norm after it.
///
/// Within a sweep, columns are visited by ascending index, and for each index
/// the basis sets are visited in the order given (so {W, V} reproduces the
/// w_i-before-v_i order of the J-symmetric Lanczos step). Basis sets may have
/// different lengths.
///
/// `reference_norm` scales the breakdown test; when zero, ||v|| is used.
OrthonormalizeResult mgs_orthonormalize(ComplexVector v, std::span<const Basis *const> bases,
                                        double gamma = kReorthogonalizationGamma,
                                        double reference_norm = 0.0);

/// Convenience overload for a brace list of basis sets.
OrthonormalizeResult mgs_orthonormalize(ComplexVector v, std::initializer_list<const Basis *> bases,
                                        double gamma = kReorthogonalizationGamma,
                                        double reference_norm = 0.0);

struct SymmetricEigen {
  std::vector<double> values;
  RealMatrix vectors; // columns are eigenvectors
};

/// Cyclic Jacobi for a small real symmetric matrix. Eigenvalues are returned in
/// diagonal order (no sorting).
SymmetricEigen symmetric_eig_small(const RealMatrix &m);

/// Eigenvalues of a dense complex Hermitian matrix by complex cyclic Jacobi,
/// ascending. Used as an oracle on materialized operators.
std::vector<double> hermitian_eigenvalues(const DenseComplexMatrix &a);

enum class SortKey { descending_value, converged_first };

/// Stable sort of (values, columns of vectors). With converged_first, entries
/// flagged true move to the front; relative order is otherwise preserved.
/// Returns the permutation: new position i holds old entry perm[i].
std::vector<std::size_t> sort_eigenpairs(std::vector<double> &values, RealMatrix &vectors, SortKey key,
                                         std::span<const bool> flags = {});

/// Apply a permutation from sort_eigenpairs to a parallel array.
template <typename T>
void apply_permutation(std::vector<T> &items, std::span<const std::size_t> perm) {
  std::vector<T> out;
  out.reserve(items.size());
  for (std::size_t p : perm)
    out.push_back(items[p]);
  for (std::size_t i = perm.size(); i < items.size(); ++i)
    out.push_back(items[i]);
  items = std::move(out);
}

} // namespace jlanczos
