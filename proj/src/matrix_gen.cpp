#include "jlanczos/matrix_gen.hpp"

#include <algorithm>
#include <stdexcept>

#include "jlanczos/rng.hpp"

namespace jlanczos {

namespace {

ComplexVector j_partner(const ComplexVector &u) {
  const std::size_t h = u.size() / 2;
  ComplexVector p(u.size());
  for (std::size_t i = 0; i < h; ++i) {
    p[i] = -std::conj(u[i + h]);
    p[i + h] = std::conj(u[i]);
  }
  return p;
}

// Paired modified Gram-Schmidt of x against u_0..u_{k-1} and their partners
// p_i = J u_i*, visiting p_i before u_i for each ascending i. The partner is never
// stored: with h = n/2, conj(p_i) = [-u_i(h:); u_i(:h)], so both projections are
// formed from one read of u_i. Returns the normalized vector; throws on breakdown.
ComplexVector paired_orthonormalize(ComplexVector x, const Basis &u) {
  const std::size_t n = x.size();
  const std::size_t h = n / 2;
  double b0 = norm(x);
  const double ref = b0;
  double b1 = b0;
  for (int sweep = 1;; ++sweep) {
    for (const ComplexVector &q : u) {
      // c = p^H x = sum_k (q[k] x[k+h] - q[k+h] x[k]), unconjugated products
      const double *qt = reinterpret_cast<const double *>(q.data());
      const double *qb = qt + 2 * h;
      double *xt = reinterpret_cast<double *>(x.data());
      double *xb = xt + 2 * h;
      double cr = 0.0, ci = 0.0;
#pragma omp simd reduction(+ : cr, ci)
      for (std::size_t k = 0; k < h; ++k) {
        cr += qt[2 * k] * xb[2 * k] - qt[2 * k + 1] * xb[2 * k + 1] - qb[2 * k] * xt[2 * k] +
              qb[2 * k + 1] * xt[2 * k + 1];
        ci += qt[2 * k] * xb[2 * k + 1] + qt[2 * k + 1] * xb[2 * k] - qb[2 * k] * xt[2 * k + 1] -
              qb[2 * k + 1] * xt[2 * k];
      }
      // x -= c p with p = [-conj(q(h:)); conj(q(:h))]
      for (std::size_t k = 0; k < h; ++k) {
        // c * conj(q) = (cr qr + ci qi) + i (ci qr - cr qi)
        xt[2 * k] += cr * qb[2 * k] + ci * qb[2 * k + 1];
        xt[2 * k + 1] += ci * qb[2 * k] - cr * qb[2 * k + 1];
        xb[2 * k] -= cr * qt[2 * k] + ci * qt[2 * k + 1];
        xb[2 * k + 1] -= ci * qt[2 * k] - cr * qt[2 * k + 1];
      }
      axpy(-dot(q, x), q, x);
    }
    b1 = norm(x);
    if (b1 * kReorthogonalizationGamma > b0 || sweep >= kMaxReorthogonalizationSweeps)
      break;
    b0 = b1;
  }
  if (!(b1 >= kBreakdownRelativeNorm * ref))
    throw BreakdownError("gen_random_hjs: random column lies in the span of earlier columns");
  scale(x.span(), 1.0 / b1);
  return x;
}

// A = sum_k lambda_k c_k c_k^H over the columns c_k. The upper triangle is
// computed four rows at a time and mirrored, so A is exactly Hermitian.
DenseComplexMatrix assemble(const Basis &columns, const std::vector<double> &lambda) {
  const std::size_t n = columns.front().size();
  const std::size_t nk = columns.size();
  // Row-major split copies: u(r, k) and lambda_k * u(r, k).
  std::vector<double> ur(n * nk), ui(n * nk), lr(n * nk), li(n * nk);
  for (std::size_t k = 0; k < nk; ++k) {
    for (std::size_t r = 0; r < n; ++r) {
      const Complex z = columns[k][r];
      ur[r * nk + k] = z.real();
      ui[r * nk + k] = z.imag();
      lr[r * nk + k] = lambda[k] * z.real();
      li[r * nk + k] = lambda[k] * z.imag();
    }
  }

  DenseComplexMatrix a(n, n);
  constexpr std::size_t kRows = 4;
  for (std::size_t r0 = 0; r0 < n; r0 += kRows) {
    const std::size_t nr = std::min(kRows, n - r0);
    for (std::size_t c = r0; c < n; ++c) {
      const double *qr = ur.data() + c * nk;
      const double *qi = ui.data() + c * nk;
      double re[kRows] = {}, im[kRows] = {};
      for (std::size_t t = 0; t < nr; ++t) {
        const double *pr = lr.data() + (r0 + t) * nk;
        const double *pi = li.data() + (r0 + t) * nk;
        double sr = 0.0, si = 0.0;
#pragma omp simd reduction(+ : sr, si)
        for (std::size_t k = 0; k < nk; ++k) {
          sr += pr[k] * qr[k] + pi[k] * qi[k];
          si += pi[k] * qr[k] - pr[k] * qi[k];
        }
        re[t] = sr;
        im[t] = si;
      }
      for (std::size_t t = 0; t < nr; ++t) {
        const std::size_t r = r0 + t;
        if (c < r)
          continue;
        if (c == r) {
          a(r, r) = re[t];
        } else {
          a(r, c) = {re[t], im[t]};
          a(c, r) = {re[t], -im[t]};
        }
      }
    }
  }
  return a;
}

} // namespace

PlantedSpectrumMatrix gen_random_hjs(std::size_t n_half, std::uint64_t seed) {
  if (n_half < 1)
    throw std::invalid_argument("gen_random_hjs: n_half must be at least 1");
  const std::size_t n = 2 * n_half;
  Rng rng(seed);

  PlantedSpectrumMatrix out;
  out.seed = seed;
  out.planted.resize(n_half);
  for (auto &l : out.planted)
    l = rng.uniform01();

  Basis u;
  u.reserve(n_half);
  for (std::size_t j = 0; j < n_half; ++j) {
    for (int attempt = 0;; ++attempt) {
      ComplexVector x(n);
      for (auto &z : x)
        z = rng.uniform_complex_square();
      try {
        u.push_back(paired_orthonormalize(std::move(x), u));
        break;
      } catch (const BreakdownError &) {
        if (attempt + 1 >= kMaxColumnRetries)
          throw;
        ++out.retries;
      }
    }
  }

  out.x1 = DenseComplexMatrix(n_half, n_half);
  out.x2 = DenseComplexMatrix(n_half, n_half);
  for (std::size_t j = 0; j < n_half; ++j) {
    for (std::size_t r = 0; r < n_half; ++r) {
      out.x1(r, j) = u[j][r];
      out.x2(r, j) = u[j][r + n_half];
    }
  }

  Basis columns = u;
  for (const auto &col : u)
    columns.push_back(j_partner(col));
  std::vector<double> lambda = out.planted;
  lambda.insert(lambda.end(), out.planted.begin(), out.planted.end());
  out.a = assemble(columns, lambda);
  return out;
}

DenseComplexMatrix gen_random_real_orthogonal(std::size_t dim, std::uint64_t seed) {
  if (dim < 1)
    throw std::invalid_argument("gen_random_real_orthogonal: dim must be at least 1");
  Rng rng(seed);
  Basis q;
  q.reserve(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    for (int attempt = 0;; ++attempt) {
      ComplexVector x(dim);
      for (auto &z : x)
        z = rng.gaussian();
      try {
        q.push_back(mgs_orthonormalize(std::move(x), {&q}).vector);
        break;
      } catch (const BreakdownError &) {
        if (attempt + 1 >= kMaxColumnRetries)
          throw;
      }
    }
  }
  DenseComplexMatrix v(dim, dim);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t r = 0; r < dim; ++r)
      v(r, j) = q[j][r].real();
  return v;
}

UnitaryConstraintResiduals constraint_residuals(const DenseComplexMatrix &x1, const DenseComplexMatrix &x2) {
  const DenseComplexMatrix gram = x1.adjoint() * x1;
  const DenseComplexMatrix gram2 = x2.adjoint() * x2;
  double unitarity = 0.0;
  for (std::size_t r = 0; r < gram.rows(); ++r)
    for (std::size_t c = 0; c < gram.cols(); ++c)
      unitarity = std::max(unitarity, std::abs(gram(r, c) + gram2(r, c) - (r == c ? 1.0 : 0.0)));
  const double symplectic = (x1.transpose() * x2 - x2.transpose() * x1).max_abs();
  return {unitarity, symplectic};
}

} // namespace jlanczos
