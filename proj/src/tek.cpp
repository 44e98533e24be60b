#include "jlanczos/tek.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "jlanczos/matrix_gen.hpp"
#include "jlanczos/rng.hpp"

namespace jlanczos {

namespace {

DenseComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  DenseComplexMatrix m(rows.size(), rows.begin()->size());
  std::size_t r = 0;
  for (const auto &row : rows) {
    std::size_t c = 0;
    for (const auto &z : row)
      m(r, c++) = z;
    ++r;
  }
  return m;
}

GammaAlgebra build_gamma_algebra() {
  const Complex i{0.0, 1.0};
  GammaAlgebra g;
  g.gamma[0] = from_rows({{0, 0, 0, -i}, {0, 0, -i, 0}, {0, i, 0, 0}, {i, 0, 0, 0}});
  g.gamma[1] = from_rows({{0, 0, 0, -1}, {0, 0, 1, 0}, {0, 1, 0, 0}, {-1, 0, 0, 0}});
  g.gamma[2] = from_rows({{0, 0, -i, 0}, {0, 0, 0, i}, {i, 0, 0, 0}, {0, -i, 0, 0}});
  g.gamma[3] = from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}});
  g.gamma[4] = from_rows({{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}});
  g.c = g.gamma[3] * g.gamma[1];
  g.j_spin = g.c * g.gamma[4];
  return g;
}

} // namespace

RealMatrix GammaAlgebra::j_spin_real() const {
  RealMatrix out(4, 4);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      if (j_spin(r, c).imag() != 0.0)
        throw std::logic_error("C gamma5 must be real");
      out(r, c) = j_spin(r, c).real();
    }
  }
  return out;
}

const GammaAlgebra &gamma_algebra() {
  static const GammaAlgebra algebra = build_gamma_algebra();
  return algebra;
}

std::size_t su_n_colour_dim(std::size_t n) {
  if (n < 2)
    throw std::invalid_argument("SU(N) requires N >= 2");
  return n * n - 1;
}

std::size_t su_n_operator_dim(std::size_t n) { return 4 * su_n_colour_dim(n); }

WilsonDiracOperator::WilsonDiracOperator(const std::array<DenseComplexMatrix, 4> &links, double kappa)
    : d_(links[0].rows()), kappa_(kappa) {
  for (std::size_t mu = 0; mu < 4; ++mu) {
    const auto &l = links[mu];
    if (l.rows() != d_ || l.cols() != d_)
      throw DimensionError("WilsonDiracOperator: link matrices must all be d x d");
    v_[mu].resize(d_ * d_);
    vt_[mu].resize(d_ * d_);
    for (std::size_t r = 0; r < d_; ++r) {
      for (std::size_t c = 0; c < d_; ++c) {
        if (l(r, c).imag() != 0.0)
          throw std::invalid_argument("WilsonDiracOperator: link matrices must be real");
        v_[mu][r * d_ + c] = l(r, c).real();
        vt_[mu][c * d_ + r] = l(r, c).real();
      }
    }
    const double err = (l.transpose() * l - DenseComplexMatrix::identity(d_)).max_abs();
    if (err > 1e-12)
      orthogonal_ = false;
  }
  if (!orthogonal_)
    std::cerr << "warning: WilsonDiracOperator links are not orthogonal to 1e-12\n";
}

// Returns the hopping sum H with D = I - kappa H (adjoint = false) or
// D^H = I - kappa H (adjoint = true).
ComplexVector WilsonDiracOperator::hop(const ComplexVector &v, bool adjoint) const {
  if (v.size() != dim())
    throw DimensionError("WilsonDiracOperator: vector length does not match 4 d");
  const auto &g = gamma_algebra();
  const std::size_t d = d_;

  // xs[b * 8 + 2 beta + {0, 1}] = (re, im) of v at spin beta, colour b.
  std::vector<double> xs(8 * d);
  for (std::size_t beta = 0; beta < 4; ++beta) {
    for (std::size_t b = 0; b < d; ++b) {
      xs[b * 8 + 2 * beta] = v[beta * d + b].real();
      xs[b * 8 + 2 * beta + 1] = v[beta * d + b].imag();
    }
  }

  ComplexVector out(dim());
  for (std::size_t mu = 0; mu < 4; ++mu) {
    // D pairs (1 - g) with V and (1 + g) with V^T; D^H swaps V and V^T.
    const double *minus_link = (adjoint ? vt_[mu] : v_[mu]).data();
    const double *plus_link = (adjoint ? v_[mu] : vt_[mu]).data();
    Complex cm[4][4], cp[4][4];
    for (std::size_t alpha = 0; alpha < 4; ++alpha) {
      for (std::size_t beta = 0; beta < 4; ++beta) {
        const double delta = alpha == beta ? 1.0 : 0.0;
        cm[alpha][beta] = delta - g.gamma[mu](alpha, beta);
        cp[alpha][beta] = delta + g.gamma[mu](alpha, beta);
      }
    }
    for (std::size_t a = 0; a < d; ++a) {
      const double *mrow = minus_link + a * d;
      const double *prow = plus_link + a * d;
      double fm[8] = {}, fp[8] = {};
      for (std::size_t b = 0; b < d; ++b) {
        const double *x = xs.data() + b * 8;
        const double wm = mrow[b], wp = prow[b];
#pragma omp simd
        for (std::size_t k = 0; k < 8; ++k) {
          fm[k] += wm * x[k];
          fp[k] += wp * x[k];
        }
      }
      for (std::size_t alpha = 0; alpha < 4; ++alpha) {
        Complex acc = out[alpha * d + a];
        for (std::size_t beta = 0; beta < 4; ++beta)
          acc += cm[alpha][beta] * Complex{fm[2 * beta], fm[2 * beta + 1]} +
                 cp[alpha][beta] * Complex{fp[2 * beta], fp[2 * beta + 1]};
        out[alpha * d + a] = acc;
      }
    }
  }
  return out;
}

ComplexVector WilsonDiracOperator::apply(const ComplexVector &v) const {
  ComplexVector h = hop(v, false);
  ComplexVector out = v;
  axpy(-kappa_, h, out);
  return out;
}

ComplexVector WilsonDiracOperator::apply_adjoint(const ComplexVector &v) const {
  ComplexVector h = hop(v, true);
  ComplexVector out = v;
  axpy(-kappa_, h, out);
  return out;
}

DenseComplexMatrix WilsonDiracOperator::materialize() const {
  DenseComplexMatrix out(dim(), dim());
  ComplexVector e(dim());
  for (std::size_t c = 0; c < dim(); ++c) {
    e[c] = 1.0;
    out.set_column(c, apply(e));
    e[c] = 0.0;
  }
  return out;
}

std::array<DenseComplexMatrix, 4> random_links(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  std::array<DenseComplexMatrix, 4> links;
  for (auto &l : links)
    l = gen_random_real_orthogonal(d, rng.next_u64());
  return links;
}

std::shared_ptr<const WilsonDiracOperator> build_wilson_dirac(const std::array<DenseComplexMatrix, 4> &links,
                                                              double kappa) {
  return std::make_shared<const WilsonDiracOperator>(links, kappa);
}

TekOperator::TekOperator(std::shared_ptr<const WilsonDiracOperator> d) : LinearOperator(d->dim()), d_(std::move(d)) {}

void TekOperator::apply_raw(const ComplexVector &in, ComplexVector &out) const {
  out = d_->apply(d_->apply_adjoint(in));
}

std::unique_ptr<JOperator> spin_tensor_J(std::size_t colour_dim) {
  return std::make_unique<SpinTensorJ>(gamma_algebra().j_spin_real(), colour_dim);
}

TekPair build_A_from_D(std::shared_ptr<const WilsonDiracOperator> d) {
  const std::size_t colour = d->colour_dim();
  return {std::make_unique<TekOperator>(std::move(d)), spin_tensor_J(colour)};
}

TekPair make_tek(std::size_t d, double kappa, std::uint64_t seed) {
  return build_A_from_D(build_wilson_dirac(random_links(d, seed), kappa));
}

DenseComplexMatrix spin_embed(const DenseComplexMatrix &spin, std::size_t d) {
  const std::size_t ns = spin.rows();
  DenseComplexMatrix out(ns * d, ns * d);
  for (std::size_t alpha = 0; alpha < ns; ++alpha)
    for (std::size_t beta = 0; beta < ns; ++beta)
      if (spin(alpha, beta) != Complex{})
        for (std::size_t a = 0; a < d; ++a)
          out(alpha * d + a, beta * d + a) = spin(alpha, beta);
  return out;
}

} // namespace jlanczos
