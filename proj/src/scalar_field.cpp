#include "bishopdisc/scalar_field.hpp"

namespace bishopdisc {

namespace {
std::span<const double> as_span(const RVec& x) { return {x.data(), static_cast<size_t>(x.size())}; }
}  // namespace

ScalarField::ScalarField(int dim, Value value, Gradient gradient, Hessian hessian)
    : dim_(dim), value_(std::move(value)), gradient_(std::move(gradient)), hessian_(std::move(hessian)) {
  if (dim < 1 || dim > kMaxRealDim) throw Error("scalar field dimension out of range");
  if (!value_) throw Error("scalar field needs a value callback");
}

ScalarField ScalarField::polynomial(const Polynomial<double>& p) {
  const int d = p.num_vars();
  std::vector<Polynomial<double>> grad;
  std::vector<std::vector<Polynomial<double>>> hess(d);
  for (int a = 0; a < d; ++a) {
    grad.push_back(p.partial(a));
    for (int b = 0; b < d; ++b) hess[a].push_back(grad[a].partial(b));
  }
  return ScalarField(
      d, [p](const RVec& x) { return p(as_span(x)); },
      [grad](const RVec& x) {
        RVec g(static_cast<Eigen::Index>(grad.size()));
        for (size_t a = 0; a < grad.size(); ++a) g[a] = grad[a](as_span(x));
        return g;
      },
      [hess](const RVec& x) {
        const auto d = static_cast<Eigen::Index>(hess.size());
        RMat h(d, d);
        for (Eigen::Index a = 0; a < d; ++a)
          for (Eigen::Index b = 0; b < d; ++b) h(a, b) = hess[a][b](as_span(x));
        return h;
      });
}

ScalarField ScalarField::squared_norm(int dim) {
  return ScalarField(
      dim, [](const RVec& x) { return x.squaredNorm(); }, [](const RVec& x) -> RVec { return 2.0 * x; },
      [dim](const RVec&) -> RMat { return 2.0 * RMat::Identity(dim, dim); });
}

RVec ScalarField::gradient(const RVec& x) const {
  if (gradient_) return gradient_(x);
  RVec g(dim_);
  RVec xp = x, xm = x;
  for (int k = 0; k < dim_; ++k) {
    xp[k] = x[k] + kGradientStep;
    xm[k] = x[k] - kGradientStep;
    g[k] = (value_(xp) - value_(xm)) / (2.0 * kGradientStep);
    xp[k] = xm[k] = x[k];
  }
  return g;
}

RMat ScalarField::hessian(const RVec& x) const {
  if (hessian_) return hessian_(x);
  RMat h(dim_, dim_);
  if (gradient_) {
    RVec xp = x, xm = x;
    for (int k = 0; k < dim_; ++k) {
      xp[k] = x[k] + kGradientStep;
      xm[k] = x[k] - kGradientStep;
      h.col(k) = (gradient_(xp) - gradient_(xm)) / (2.0 * kGradientStep);
      xp[k] = xm[k] = x[k];
    }
    return 0.5 * (h + h.transpose());
  }
  const double s = kHessianStep;
  const double f0 = value_(x);
  for (int a = 0; a < dim_; ++a) {
    RVec xp = x, xm = x;
    xp[a] += s;
    xm[a] -= s;
    h(a, a) = (value_(xp) - 2.0 * f0 + value_(xm)) / (s * s);
    for (int b = a + 1; b < dim_; ++b) {
      RVec pp = x, pm = x, mp = x, mm = x;
      pp[a] += s; pp[b] += s;
      pm[a] += s; pm[b] -= s;
      mp[a] -= s; mp[b] += s;
      mm[a] -= s; mm[b] -= s;
      h(a, b) = h(b, a) = (value_(pp) - value_(pm) - value_(mp) + value_(mm)) / (4.0 * s * s);
    }
  }
  return h;
}

ScalarField ScalarField::operator+(const ScalarField& o) const {
  if (o.dim_ != dim_) throw Error("adding scalar fields of different dimension");
  const ScalarField a = *this, b = o;
  return ScalarField(
      dim_, [a, b](const RVec& x) { return a(x) + b(x); },
      [a, b](const RVec& x) -> RVec { return a.gradient(x) + b.gradient(x); },
      [a, b](const RVec& x) -> RMat { return a.hessian(x) + b.hessian(x); });
}

ScalarField ScalarField::scaled(double s) const {
  const ScalarField a = *this;
  return ScalarField(
      dim_, [a, s](const RVec& x) { return s * a(x); },
      [a, s](const RVec& x) -> RVec { return s * a.gradient(x); },
      [a, s](const RVec& x) -> RMat { return s * a.hessian(x); });
}

ScalarField ScalarField::shifted(double c) const {
  const ScalarField a = *this;
  return ScalarField(
      dim_, [a, c](const RVec& x) { return a(x) + c; },
      [a](const RVec& x) -> RVec { return a.gradient(x); },
      [a](const RVec& x) -> RMat { return a.hessian(x); });
}

ScalarField ScalarField::plus_square(double c) const {
  const ScalarField a = *this;
  return ScalarField(
      dim_,
      [a, c](const RVec& x) {
        const double v = a(x);
        return v + c * v * v;
      },
      [a, c](const RVec& x) -> RVec { return (1.0 + 2.0 * c * a(x)) * a.gradient(x); },
      [a, c](const RVec& x) -> RMat {
        const RVec g = a.gradient(x);
        return (1.0 + 2.0 * c * a(x)) * a.hessian(x) + 2.0 * c * g * g.transpose();
      });
}

}  // namespace bishopdisc
