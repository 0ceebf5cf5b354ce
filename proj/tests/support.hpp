#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "bishopdisc/disc_function.hpp"
#include "bishopdisc/polynomial.hpp"
#include "bishopdisc/scalar_field.hpp"
#include "bishopdisc/structure.hpp"
#include "bishopdisc/types.hpp"

namespace testing {

using namespace bishopdisc;

inline std::vector<int> unit_exponent(int vars, int k) {
  std::vector<int> e(vars, 0);
  if (k >= 0) e[k] = 1;
  return e;
}

/// J_st + Σ x_k A_k, optionally retracted onto J² = -Id.
inline AlmostComplexStructure linear_structure(int n, const std::vector<std::pair<int, RMat>>& slopes,
                                               bool retract = false, const RMat* constant = nullptr) {
  Polynomial<RMat> p(2 * n, RMat::Zero(2 * n, 2 * n));
  if (constant) p.add_term(unit_exponent(2 * n, -1), *constant);
  for (const auto& [k, a] : slopes) p.add_term(unit_exponent(2 * n, k), a);
  return polynomial_structure(n, p, true, retract, "test");
}

/// Anti-linear real matrix with a single complex entry, nilpotent when row != col.
inline RMat antilinear_entry(int n, int row, int col, cplx a) {
  CMat l = CMat::Zero(n, n);
  l(row, col) = a;
  return realify_antilinear(l);
}

inline RMat random_antilinear(int n, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMat l(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) l(p, q) = cplx(u(rng), u(rng));
  RMat a = realify_antilinear(l);
  return a * (scale / max_abs(a));
}

/// retract(J_st + s·(A₀ + Σ x_k A_k)) with s tuned so the max-entry deviation
/// from J_st over the ball of radius `radius` is `level`.
inline AlmostComplexStructure random_structure(int n, std::mt19937_64& rng, double level,
                                               double radius = 0.5) {
  const RMat a0 = random_antilinear(n, rng, 0.5);
  std::vector<RMat> ak;
  for (int k = 0; k < 2 * n; ++k) ak.push_back(random_antilinear(n, rng, 1.0));
  const RMat jst = standard_structure_matrix(n);
  auto field = [=](double s) {
    return [=](const RVec& x) {
      RMat l = a0;
      for (int k = 0; k < 2 * n; ++k) l += x[k] * ak[k];
      return retract_structure(jst + s * l);
    };
  };
  const auto grid = unit_ball_grid(n, 3, radius);
  auto dev = [&](double s) {
    double d = 0.0;
    auto f = field(s);
    for (const RVec& x : grid) d = std::max(d, max_abs(f(x) - jst));
    return d;
  };
  double s = 0.01 * level / dev(0.01);
  for (int it = 0; it < 4; ++it) s *= level / dev(s);
  return AlmostComplexStructure(n, field(s), {}, std::numeric_limits<double>::infinity(), "random");
}

/// Components Σ_{j≤3} a_j ζ^j with |a_j| ≤ scale/4 each.
inline Disc random_disc(GridPtr grid, int n, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<DiscFunction> comps;
  for (int k = 0; k < n; ++k) {
    std::array<cplx, 4> a;
    for (auto& c : a) c = cplx(u(rng), u(rng)) * (scale / (4.0 * std::sqrt(2.0)));
    comps.push_back(DiscFunction::from_function(grid, [a](cplx z) { return a[0] + z * (a[1] + z * (a[2] + z * a[3])); }));
  }
  return Disc(std::move(comps));
}

inline ScalarField scalar(int dim, std::function<double(const RVec&)> f) { return ScalarField(dim, std::move(f)); }

/// Laplacian of u along the affine map ζ ↦ p + x·a + y·b at ζ = 0, five-point stencil.
inline double laplacian_along(const ScalarField& u, const RVec& p, const RVec& a, const RVec& b,
                              double h = 1e-4) {
  const double c = u(p);
  const RVec pa = p + h * a, ma = p - h * a, pb = p + h * b, mb = p - h * b;
  return (u(pa) + u(ma) + u(pb) + u(mb) - 4.0 * c) / (h * h);
}

inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace testing
