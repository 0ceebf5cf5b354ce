#pragma once

#include <functional>

#include "bishopdisc/polynomial.hpp"
#include "bishopdisc/types.hpp"

namespace bishopdisc {

/// Real function on ℝᵈ with first and second derivatives. Missing derivative
/// callbacks fall back to central differences.
class ScalarField {
 public:
  using Value = std::function<double(const RVec&)>;
  using Gradient = std::function<RVec(const RVec&)>;
  using Hessian = std::function<RMat(const RVec&)>;

  ScalarField() = default;
  ScalarField(int dim, Value value, Gradient gradient = {}, Hessian hessian = {});

  static ScalarField polynomial(const Polynomial<double>& p);
  /// |Z|² on ℝᵈ.
  static ScalarField squared_norm(int dim);

  int dim() const { return dim_; }
  double operator()(const RVec& x) const { return value_(x); }
  RVec gradient(const RVec& x) const;
  RMat hessian(const RVec& x) const;

  ScalarField operator+(const ScalarField& o) const;
  ScalarField scaled(double a) const;
  ScalarField shifted(double c) const;
  /// r + C·r², derivatives by the chain rule.
  ScalarField plus_square(double c) const;

  static constexpr double kGradientStep = 1e-5;
  static constexpr double kHessianStep = 1e-4;

 private:
  int dim_ = 0;
  Value value_;
  Gradient gradient_;
  Hessian hessian_;
};

}  // namespace bishopdisc
