#include "jlanczos/operators.hpp"

#include <cmath>
#include <cstdio>

#include "jlanczos/rng.hpp"

namespace jlanczos {

namespace {

std::string format_relative(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

} // namespace

void LinearOperator::check_dim(const ComplexVector &v) const {
  if (v.size() != dim_)
    throw DimensionError("operator of dimension " + std::to_string(dim_) + " applied to a vector of length " +
                         std::to_string(v.size()));
}

ComplexVector LinearOperator::apply(const ComplexVector &v) const {
  check_dim(v);
  ComplexVector out(dim_);
  apply_raw(v, out);
  matvecs_.fetch_add(1);
  return out;
}

ComplexVector LinearOperator::apply_uncounted(const ComplexVector &v) const {
  check_dim(v);
  ComplexVector out(dim_);
  apply_raw(v, out);
  auxiliary_.fetch_add(1);
  return out;
}

ComplexVector LinearOperator::apply_inverse(const ComplexVector &v, const CGConfig &cfg) const {
  check_dim(v);
  const ApplyFn fn = [this](const ComplexVector &x) {
    ComplexVector out(dim_);
    apply_raw(x, out);
    return out;
  };
  CGSolution sol = cg_solve(fn, v, cfg);
  cg_iterations_.fetch_add(static_cast<std::uint64_t>(sol.report.iterations));
  matvecs_.fetch_add(1);
  if (!sol.report.converged && sol.report.stagnated && sol.report.relative_residual <= kStagnationSlack * cfg.tol) {
    stagnated_.fetch_add(1);
    return std::move(sol.x);
  }
  if (!sol.report.converged)
    throw ConvergenceError("apply_inverse: CG stopped at relative residual " +
                           format_relative(sol.report.relative_residual) + " after " +
                           std::to_string(sol.report.iterations) + " iterations");
  return std::move(sol.x);
}

CGSolution cg_solve(const LinearOperator &op, const ComplexVector &b, const CGConfig &cfg,
                    const std::optional<ComplexVector> &x0) {
  return cg_solve([&op](const ComplexVector &x) { return op.apply_uncounted(x); }, b, cfg, x0);
}

void LinearOperator::reset_counters() noexcept {
  matvecs_.store(0);
  auxiliary_.store(0);
  cg_iterations_.store(0);
  stagnated_.store(0);
}

double LinearOperator::norm_estimate() const {
  std::call_once(norm_once_, [this] { norm_ = estimate_norm(*this); });
  return norm_;
}

DenseOperator::DenseOperator(DenseComplexMatrix a) : LinearOperator(a.rows()), a_(std::move(a)) {
  if (a_.rows() != a_.cols())
    throw DimensionError("DenseOperator: matrix must be square");
  if (!a_.all_finite())
    throw std::invalid_argument("DenseOperator: matrix has non-finite entries");
}

void DenseOperator::apply_raw(const ComplexVector &in, ComplexVector &out) const { out = a_ * in; }

DiagonalOperator::DiagonalOperator(std::vector<double> diagonal)
    : LinearOperator(diagonal.size()), d_(std::move(diagonal)) {}

void DiagonalOperator::apply_raw(const ComplexVector &in, ComplexVector &out) const {
  for (std::size_t i = 0; i < d_.size(); ++i)
    out[i] = d_[i] * in[i];
}

std::unique_ptr<LinearOperator> identity_operator(std::size_t n) {
  return std::make_unique<DiagonalOperator>(std::vector<double>(n, 1.0));
}

DenseComplexMatrix materialize(const LinearOperator &op) {
  const std::size_t n = op.dim();
  DenseComplexMatrix out(n, n);
  ComplexVector e(n);
  for (std::size_t c = 0; c < n; ++c) {
    e[c] = 1.0;
    out.set_column(c, op.apply_uncounted(e));
    e[c] = 0.0;
  }
  return out;
}

double estimate_norm(const LinearOperator &op, int iterations) {
  Rng rng(0x6a09e667f3bcc908ULL);
  ComplexVector v(op.dim());
  for (auto &z : v)
    z = rng.uniform_complex_square();
  scale(v.span(), 1.0 / norm(v));
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    ComplexVector w = op.apply_uncounted(v);
    estimate = norm(w);
    if (estimate == 0.0)
      return 0.0;
    scale(w.span(), 1.0 / estimate);
    v = std::move(w);
  }
  return estimate;
}

ComplexVector JOperator::apply_conj(const ComplexVector &v) const {
  if (v.size() != dim_)
    throw DimensionError("J of dimension " + std::to_string(dim_) + " applied to a vector of length " +
                         std::to_string(v.size()));
  ComplexVector out(dim_);
  apply_conj_raw(v, out);
  return out;
}

DenseComplexMatrix JOperator::materialize() const {
  DenseComplexMatrix out(dim_, dim_);
  ComplexVector e(dim_);
  for (std::size_t c = 0; c < dim_; ++c) {
    e[c] = 1.0;
    out.set_column(c, apply_conj(e));
    e[c] = 0.0;
  }
  return out;
}

CanonicalBlockJ::CanonicalBlockJ(std::size_t n) : JOperator(n) {
  if (n == 0 || n % 2 != 0)
    throw std::invalid_argument("CanonicalBlockJ: dimension must be even and positive");
}

void CanonicalBlockJ::apply_conj_raw(const ComplexVector &in, ComplexVector &out) const {
  const std::size_t h = dim() / 2;
  for (std::size_t i = 0; i < h; ++i) {
    out[i] = -std::conj(in[i + h]);
    out[i + h] = std::conj(in[i]);
  }
}

SpinTensorJ::SpinTensorJ(const RealMatrix &spin, std::size_t colour_dim)
    : JOperator(spin.rows() * colour_dim), spin_(spin), d_(colour_dim) {
  if (spin.rows() != spin.cols())
    throw DimensionError("SpinTensorJ: spin matrix must be square");
}

void SpinTensorJ::apply_conj_raw(const ComplexVector &in, ComplexVector &out) const {
  const std::size_t ns = spin_.rows();
  for (std::size_t alpha = 0; alpha < ns; ++alpha) {
    Complex *o = out.data() + alpha * d_;
    for (std::size_t beta = 0; beta < ns; ++beta) {
      const double s = spin_(alpha, beta);
      if (s == 0.0)
        continue;
      const Complex *x = in.data() + beta * d_;
      for (std::size_t a = 0; a < d_; ++a)
        o[a] += s * std::conj(x[a]);
    }
  }
}

std::unique_ptr<JOperator> canonical_block_J(std::size_t n) { return std::make_unique<CanonicalBlockJ>(n); }

ComplexVector reconstruct_pair(const JOperator &j, const ComplexVector &x) { return j.apply_conj(x); }

double hermiticity_residual(const DenseComplexMatrix &a) { return (a - a.adjoint()).max_abs(); }

double j_symmetry_residual(const DenseComplexMatrix &a, const DenseComplexMatrix &j) {
  return (j * a * j.transpose() - a.transpose()).max_abs();
}

} // namespace jlanczos
