#include "jlanczos/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace jlanczos {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char *what) {
  if (a != b)
    throw DimensionError(std::string(what) + ": size mismatch (" + std::to_string(a) + " vs " +
                         std::to_string(b) + ")");
}

// Complex stored as interleaved (re, im) pairs; see [complex.numbers.general].
const double *as_real(const Complex *p) { return reinterpret_cast<const double *>(p); }
double *as_real(Complex *p) { return reinterpret_cast<double *>(p); }

} // namespace

bool ComplexVector::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex &z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

DenseComplexMatrix DenseComplexMatrix::identity(std::size_t n) {
  DenseComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    out(i, i) = 1.0;
  return out;
}

ComplexVector DenseComplexMatrix::column(std::size_t c) const {
  ComplexVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    out[r] = (*this)(r, c);
  return out;
}

void DenseComplexMatrix::set_column(std::size_t c, const ComplexVector &v) {
  require_same_size(v.size(), rows_, "set_column");
  for (std::size_t r = 0; r < rows_; ++r)
    (*this)(r, c) = v[r];
}

DenseComplexMatrix DenseComplexMatrix::adjoint() const {
  DenseComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      out(c, r) = std::conj((*this)(r, c));
  return out;
}

DenseComplexMatrix DenseComplexMatrix::transpose() const {
  DenseComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      out(c, r) = (*this)(r, c);
  return out;
}

DenseComplexMatrix DenseComplexMatrix::conjugate() const {
  DenseComplexMatrix out = *this;
  for (auto &z : out.data_)
    z = std::conj(z);
  return out;
}

double DenseComplexMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto &z : data_)
    m = std::max(m, std::abs(z));
  return m;
}

bool DenseComplexMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex &z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

DenseComplexMatrix operator*(const DenseComplexMatrix &a, const DenseComplexMatrix &b) {
  require_same_size(a.cols(), b.rows(), "matrix product");
  DenseComplexMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    Complex *orow = out.row(r);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(r, k);
      if (aik == Complex{})
        continue;
      const Complex *brow = b.row(k);
      for (std::size_t c = 0; c < b.cols(); ++c)
        orow[c] += aik * brow[c];
    }
  }
  return out;
}

DenseComplexMatrix operator-(const DenseComplexMatrix &a, const DenseComplexMatrix &b) {
  require_same_size(a.rows(), b.rows(), "matrix difference");
  require_same_size(a.cols(), b.cols(), "matrix difference");
  DenseComplexMatrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      out(r, c) = a(r, c) - b(r, c);
  return out;
}

ComplexVector operator*(const DenseComplexMatrix &a, const ComplexVector &x) {
  require_same_size(a.cols(), x.size(), "matrix-vector product");
  ComplexVector y(a.rows());
  const double *xr = as_real(x.data());
  const std::size_t n = a.cols();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double *ar = as_real(a.row(r));
    double re = 0.0, im = 0.0;
#pragma omp simd reduction(+ : re, im)
    for (std::size_t c = 0; c < n; ++c) {
      const double p = ar[2 * c], q = ar[2 * c + 1];
      const double u = xr[2 * c], v = xr[2 * c + 1];
      re += p * u - q * v;
      im += p * v + q * u;
    }
    y[r] = {re, im};
  }
  return y;
}

RealMatrix RealMatrix::identity(std::size_t n) {
  RealMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    out(i, i) = 1.0;
  return out;
}

RealMatrix RealMatrix::transpose() const {
  RealMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      out(c, r) = (*this)(r, c);
  return out;
}

double RealMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double x : data_)
    m = std::max(m, std::abs(x));
  return m;
}

RealMatrix operator*(const RealMatrix &a, const RealMatrix &b) {
  require_same_size(a.cols(), b.rows(), "matrix product");
  RealMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t c = 0; c < b.cols(); ++c)
        out(r, c) += a(r, k) * b(k, c);
  return out;
}

RealMatrix ProjectedMatrix::leading_block(std::size_t j) const {
  if (j > m_)
    throw DimensionError("leading_block: j exceeds the maximum column count");
  RealMatrix out(j, j);
  for (std::size_t r = 0; r < j; ++r)
    for (std::size_t c = 0; c < j; ++c)
      out(r, c) = (*this)(r, c);
  return out;
}

void ProjectedMatrix::clear() noexcept { std::fill(data_.begin(), data_.end(), 0.0); }

Complex dot(std::span<const Complex> a, std::span<const Complex> b) {
  require_same_size(a.size(), b.size(), "dot");
  const double *x = as_real(a.data());
  const double *y = as_real(b.data());
  double re = 0.0, im = 0.0;
#pragma omp simd reduction(+ : re, im)
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double p = x[2 * i], q = x[2 * i + 1];
    const double u = y[2 * i], v = y[2 * i + 1];
    re += p * u + q * v;
    im += p * v - q * u;
  }
  return {re, im};
}

double norm(std::span<const Complex> a) {
  const double *x = as_real(a.data());
  double s = 0.0;
#pragma omp simd reduction(+ : s)
  for (std::size_t i = 0; i < 2 * a.size(); ++i)
    s += x[i] * x[i];
  return std::sqrt(s);
}

void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  require_same_size(x.size(), y.size(), "axpy");
  const double ar = alpha.real(), ai = alpha.imag();
  const double *xs = as_real(x.data());
  double *ys = as_real(y.data());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = xs[2 * i], v = xs[2 * i + 1];
    ys[2 * i] += ar * u - ai * v;
    ys[2 * i + 1] += ar * v + ai * u;
  }
}

void scale(std::span<Complex> x, double factor) {
  for (auto &z : x)
    z *= factor;
}

ComplexVector conj(const ComplexVector &v) {
  ComplexVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = std::conj(v[i]);
  return out;
}

ComplexVector operator-(const ComplexVector &a, const ComplexVector &b) {
  require_same_size(a.size(), b.size(), "vector difference");
  ComplexVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = a[i] - b[i];
  return out;
}

ComplexVector operator+(const ComplexVector &a, const ComplexVector &b) {
  require_same_size(a.size(), b.size(), "vector sum");
  ComplexVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = a[i] + b[i];
  return out;
}

ComplexVector operator*(Complex alpha, const ComplexVector &v) {
  ComplexVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = alpha * v[i];
  return out;
}

Basis combine_columns(const Basis &x, const RealMatrix &z, std::size_t cols) {
  require_same_size(x.size(), z.rows(), "combine_columns");
  if (cols > z.cols())
    throw DimensionError("combine_columns: too many columns requested");
  const std::size_t n = x.empty() ? 0 : x.front().size();
  Basis out;
  out.reserve(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    ComplexVector y(n);
    for (std::size_t i = 0; i < x.size(); ++i) {
      // Exact zeros are skipped so that decoupled columns are copied bit-exactly.
      if (z(i, j) != 0.0)
        axpy(z(i, j), x[i], y);
    }
    out.push_back(std::move(y));
  }
  return out;
}

OrthonormalizeResult mgs_orthonormalize(ComplexVector v, std::span<const Basis *const> bases, double gamma,
                                        double reference_norm) {
  if (!(gamma > 1.0))
    throw std::invalid_argument("mgs_orthonormalize: gamma must exceed 1");
  std::size_t longest = 0;
  for (const Basis *b : bases) {
    for (const auto &col : *b)
      require_same_size(col.size(), v.size(), "mgs_orthonormalize");
    longest = std::max(longest, b->size());
  }

  OrthonormalizeResult result;
  double b0 = norm(v);
  const double ref = reference_norm > 0.0 ? reference_norm : b0;
  double b1 = b0;
  if (b0 == 0.0)
    throw BreakdownError("mgs_orthonormalize: zero input vector");

  while (true) {
    for (std::size_t i = 0; i < longest; ++i) {
      for (const Basis *b : bases) {
        if (i >= b->size())
          continue;
        const ComplexVector &q = (*b)[i];
        axpy(-dot(q, v), q, v);
      }
    }
    ++result.repeats;
    b1 = norm(v);
    if (b1 * gamma > b0)
      break;
    if (result.repeats >= kMaxReorthogonalizationSweeps) {
      result.capped = true;
      break;
    }
    b0 = b1;
  }

  if (!(b1 >= kBreakdownRelativeNorm * ref))
    throw BreakdownError("mgs_orthonormalize: vector lies in the span of the basis");
  scale(v.span(), 1.0 / b1);
  result.vector = std::move(v);
  result.b0 = b1;
  return result;
}

OrthonormalizeResult mgs_orthonormalize(ComplexVector v, std::initializer_list<const Basis *> bases, double gamma,
                                        double reference_norm) {
  return mgs_orthonormalize(std::move(v), std::span<const Basis *const>(bases.begin(), bases.size()), gamma,
                            reference_norm);
}

namespace {

constexpr int kMaxJacobiSweeps = 100;
constexpr double kJacobiRelativeOffNorm = 1e-14;

double rotation_tangent(double app, double aqq, double apq) {
  const double theta = (aqq - app) / (2.0 * apq);
  if (std::abs(theta) > 1e150)
    return 0.5 / theta;
  const double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  return theta < 0.0 ? -t : t;
}

} // namespace

SymmetricEigen symmetric_eig_small(const RealMatrix &m) {
  const std::size_t n = m.rows();
  require_same_size(n, m.cols(), "symmetric_eig_small");
  RealMatrix a = m;
  RealMatrix z = RealMatrix::identity(n);

  double frob = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      frob += a(r, c) * a(r, c);
  frob = std::sqrt(frob);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (r != c)
          s += a(r, c) * a(r, c);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > kJacobiRelativeOffNorm * frob) {
    if (++sweep > kMaxJacobiSweeps)
      throw ConvergenceError("symmetric_eig_small: Jacobi sweeps exhausted");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0)
          continue;
        const double t = rotation_tangent(a(p, p), a(q, q), apq);
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q)
            continue;
          const double arp = a(r, p), arq = a(r, q);
          a(r, p) = a(p, r) = c * arp - s * arq;
          a(r, q) = a(q, r) = s * arp + c * arq;
        }
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          const double zrp = z(r, p), zrq = z(r, q);
          z(r, p) = c * zrp - s * zrq;
          z(r, q) = s * zrp + c * zrq;
        }
      }
    }
  }

  SymmetricEigen out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.values[i] = a(i, i);
  out.vectors = std::move(z);
  return out;
}

std::vector<double> hermitian_eigenvalues(const DenseComplexMatrix &input) {
  const std::size_t n = input.rows();
  require_same_size(n, input.cols(), "hermitian_eigenvalues");
  DenseComplexMatrix a = input;
  double frob = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      frob += std::norm(a(r, c));
  frob = std::sqrt(frob);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (r != c)
          s += std::norm(a(r, c));
    return std::sqrt(s);
  };

  for (std::size_t i = 0; i < n; ++i)
    a(i, i) = a(i, i).real();

  int sweep = 0;
  while (off_norm() > kJacobiRelativeOffNorm * frob) {
    if (++sweep > kMaxJacobiSweeps)
      throw ConvergenceError("hermitian_eigenvalues: Jacobi sweeps exhausted");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex g = a(p, q);
        const double mag = std::abs(g);
        if (mag == 0.0)
          continue;
        // Rotate the phase of index q so that a(p, q) becomes real and positive.
        const Complex phase = g / mag;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == q)
            continue;
          a(r, q) *= std::conj(phase);
          a(q, r) = std::conj(a(r, q));
        }
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double t = rotation_tangent(app, aqq, mag);
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q)
            continue;
          const Complex arp = a(r, p), arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(r, q) = s * arp + c * arq;
          a(p, r) = std::conj(a(r, p));
          a(q, r) = std::conj(a(r, q));
        }
        a(p, p) = app - t * mag;
        a(q, q) = aqq + t * mag;
        a(p, q) = a(q, p) = 0.0;
      }
    }
  }

  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i)
    values[i] = a(i, i).real();
  std::sort(values.begin(), values.end());
  return values;
}

std::vector<std::size_t> sort_eigenpairs(std::vector<double> &values, RealMatrix &vectors, SortKey key,
                                         std::span<const bool> flags) {
  const std::size_t n = values.size();
  if (vectors.cols() != n)
    throw DimensionError("sort_eigenpairs: eigenvector columns do not match eigenvalues");
  if (flags.size() > n)
    throw DimensionError("sort_eigenpairs: more flags than eigenpairs");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  if (key == SortKey::descending_value) {
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  } else {
    auto flagged = [&](std::size_t i) { return i < flags.size() && flags[i]; };
    std::stable_partition(perm.begin(), perm.end(), flagged);
  }

  std::vector<double> sorted_values(n);
  RealMatrix sorted_vectors(vectors.rows(), n);
  for (std::size_t i = 0; i < n; ++i) {
    sorted_values[i] = values[perm[i]];
    for (std::size_t r = 0; r < vectors.rows(); ++r)
      sorted_vectors(r, i) = vectors(r, perm[i]);
  }
  values = std::move(sorted_values);
  vectors = std::move(sorted_vectors);
  return perm;
}

} // namespace jlanczos
