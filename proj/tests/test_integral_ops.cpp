#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>
#include <random>

#include "bishopdisc/grid.hpp"
#include "bishopdisc/integral_ops.hpp"

using namespace bishopdisc;

namespace {

constexpr double kPi = std::numbers::pi;

// -(1/π)∬ g(τ)/(τ-ζ) dA with τ = ζ + ρe^{iφ}; ρ runs to the unit circle.
cplx brute_cauchy_green(const std::function<cplx(cplx)>& g, cplx zeta, int n_rho = 60, int n_phi = 256) {
  auto [x, w] = gauss_legendre(n_rho, 0.0, 1.0);
  cplx sum = 0.0;
  for (int k = 0; k < n_phi; ++k) {
    const double phi = 2.0 * kPi * k / n_phi;
    const cplx e = std::polar(1.0, phi);
    // |ζ + ρe|² = 1 ⇒ ρ² + 2ρ Re(ζ ē) + |ζ|² - 1 = 0.
    const double b = std::real(zeta * std::conj(e));
    const double rmax = -b + std::sqrt(b * b + 1.0 - std::norm(zeta));
    cplx inner = 0.0;
    for (int i = 0; i < n_rho; ++i) inner += w[i] * rmax * g(zeta + rmax * x[i] * e);
    sum += inner / e;
  }
  return -sum * (2.0 * kPi / n_phi) / kPi;
}

// (1/2π)∫ (e^{iτ}+ζ)/(e^{iτ}-ζ) h(τ) dτ by the trapezoid rule.
cplx schwarz_kernel(const std::function<double(double)>& h, cplx zeta, int n = 512) {
  cplx sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * kPi * k / n;
    const cplx e = std::polar(1.0, t);
    sum += (e + zeta) / (e - zeta) * h(t);
  }
  return sum / static_cast<double>(n);
}

std::vector<cplx> interior_targets(int count, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> out;
  for (int i = 0; i < count; ++i) out.push_back(std::polar(radius * std::sqrt(u(rng)), 2.0 * kPi * u(rng)));
  return out;
}

double max_diff(const DiscFunction& a, const std::function<cplx(cplx)>& f) {
  double e = 0.0;
  const auto& g = *a.grid();
  for (int r = 0; r < g.n_rings(); ++r)
    for (int j = 0; j < g.n_theta(); ++j) e = std::max(e, std::abs(a(r, j) - f(g.node(r, j))));
  return e;
}

}  // namespace

TEST_CASE("gauss_legendre and grid quadrature") {
  auto [x, w] = gauss_legendre(8, 0.0, 1.0);
  for (int k = 0; k <= 15; ++k) {
    double s = 0.0;
    for (int i = 0; i < 8; ++i) s += w[i] * std::pow(x[i], k);
    CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
  }
  auto grid = DiscGrid::get(64, 24);
  double area = 0.0, moment = 0.0;
  for (int r = 0; r < grid->n_rings(); ++r) {
    area += grid->n_theta() * grid->area_weight(r);
    moment += grid->n_theta() * grid->area_weight(r) * grid->radius(r) * grid->radius(r);
  }
  CHECK(area == doctest::Approx(kPi).epsilon(1e-13));
  CHECK(moment == doctest::Approx(kPi / 2.0).epsilon(1e-13));
  CHECK(grid->radius(grid->boundary_ring()) == 1.0);
  CHECK(grid->area_weight(grid->boundary_ring()) == 0.0);
}

TEST_CASE("cauchy_green constants") {
  auto grid = DiscGrid::get(64, 24);
  CHECK(cauchy_green(DiscFunction::constant(grid, 0.0)).sup() == 0.0);
  auto t1 = cauchy_green(DiscFunction::constant(grid, 1.0));
  CHECK(max_diff(t1, [](cplx z) { return std::conj(z); }) < 1e-12);
  for (cplx z : interior_targets(20, 0.95, 1)) {
    const cplx oracle = brute_cauchy_green([](cplx) { return cplx(1.0); }, z);
    CHECK(std::abs(oracle - std::conj(z)) < 1e-9);
    CHECK(std::abs(t1.eval(z) - oracle) < 1e-9);
  }
}

TEST_CASE("cauchy_green against brute-force quadrature") {
  auto grid = DiscGrid::get(64, 24);
  const std::vector<std::function<cplx(cplx)>> gs = {
      [](cplx z) { return std::conj(z); },
      [](cplx z) { return z * z * std::conj(z) + cplx(0.5, -1.0); },
      [](cplx z) { return std::norm(z) * std::conj(z) * std::conj(z); },
  };
  for (const auto& g : gs) {
    auto tg = cauchy_green(DiscFunction::from_function(grid, g));
    CHECK(max_diff(dbar_numeric(tg), g) < 1e-6);
    for (cplx z : interior_targets(10, 0.9, 2)) CHECK(std::abs(tg.eval(z) - brute_cauchy_green(g, z)) < 1e-8);
    for (cplx z : interior_targets(5, 0.9, 3))
      CHECK(std::abs(cauchy_green_at(g, z) - brute_cauchy_green(g, z)) < 1e-8);
  }
}

TEST_CASE("cauchy_green is linear") {
  auto grid = DiscGrid::get(32, 16);
  auto f = DiscFunction::from_function(grid, [](cplx z) { return z * std::conj(z) + std::conj(z); });
  auto g = DiscFunction::from_function(grid, [](cplx z) { return std::exp(z) * std::conj(z); });
  const cplx a(0.3, -2.0);
  auto lhs = cauchy_green(f * a + g);
  auto rhs = cauchy_green(f) * a + cauchy_green(g);
  CHECK((lhs - rhs).sup() < 1e-13);
}

TEST_CASE("dbar_numeric examples") {
  auto grid = DiscGrid::get(64, 24);
  CHECK(dbar_numeric(DiscFunction::from_function(grid, [](cplx z) { return z * z * z; })).sup() < 1e-10);
  CHECK(max_diff(dbar_numeric(DiscFunction::from_function(grid, [](cplx z) { return std::conj(z); })),
                 [](cplx) { return cplx(1.0); }) < 1e-10);
  CHECK(max_diff(dbar_numeric(DiscFunction::from_function(grid, [](cplx z) { return std::norm(z); })),
                 [](cplx z) { return z; }) < 1e-10);
  CHECK(max_diff(dzeta_numeric(DiscFunction::from_function(grid, [](cplx z) { return z * z * std::conj(z); })),
                 [](cplx z) { return 2.0 * z * std::conj(z); }) < 1e-10);
}

TEST_CASE("schwarz examples") {
  const int n = 64;
  auto one = schwarz(BoundarySignal::from_function(n, [](double) { return cplx(1.0); }));
  CHECK(std::abs(one.eval(cplx(0.3, 0.2)) - 1.0) < 1e-14);

  auto cos1 = schwarz(BoundarySignal::from_function(n, [](double t) { return cplx(std::cos(t)); }));
  auto cos2 = schwarz(BoundarySignal::from_function(n, [](double t) { return cplx(std::cos(2 * t) + 3.0); }));
  CHECK(cos1.center().imag() == 0.0);
  CHECK(cos2.center().imag() == 0.0);
  for (cplx z : interior_targets(10, 0.8, 4)) {
    CHECK(std::abs(cos1.eval(z) - z) < 1e-13);
    CHECK(std::abs(cos2.eval(z) - (z * z + 3.0)) < 1e-13);
    CHECK(std::abs(cos1.eval(z) - schwarz_kernel([](double t) { return std::cos(t); }, z)) < 1e-10);
    CHECK(std::abs(cos2.eval(z) - schwarz_kernel([](double t) { return std::cos(2 * t) + 3.0; }, z)) < 1e-10);
  }
  // A complex signal is rejected.
  CHECK_THROWS_AS(schwarz(BoundarySignal::from_function(n, [](double t) { return std::polar(1.0, t); })), Error);
}

TEST_CASE("boundary_to_holomorphic") {
  const int n = 64;
  auto zeta = boundary_to_holomorphic(BoundarySignal::from_function(n, [](double t) { return std::polar(1.0, t); }));
  CHECK(std::abs(zeta.eval(cplx(0.2, 0.5)) - cplx(0.2, 0.5)) < 1e-14);
  CHECK_THROWS_AS(
      boundary_to_holomorphic(BoundarySignal::from_function(n, [](double t) { return std::polar(1.0, -t); })),
      Error);
  auto cubic = boundary_to_holomorphic(
      BoundarySignal::from_function(n, [](double t) { return 2.0 + std::polar(1.0, 3 * t); }));
  for (cplx z : interior_targets(5, 1.0, 5)) CHECK(std::abs(cubic.eval(z) - (2.0 + z * z * z)) < 1e-13);
}

TEST_CASE("boundary signal diagnostics") {
  const int n = 32;
  auto b = BoundarySignal::from_function(n, [](double t) { return std::polar(1.0, 2 * t) + 0.5 * std::polar(1.0, -t); });
  CHECK(negative_mode_energy(b) == doctest::Approx(0.25 / 1.25).epsilon(1e-13));
  CHECK(fourier_decay_seminorm(b, 1.0) == doctest::Approx(2.0 + 0.5).epsilon(1e-13));
  CHECK(negative_mode_energy(BoundarySignal(Eigen::VectorXcd::Zero(n))) == 0.0);
  CHECK(std::abs(b.coefficient(2) - 1.0) < 1e-14);
  CHECK(std::abs(b.coefficient(-1) - 0.5) < 1e-14);
}
