// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when all pass.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bishopdisc/bishop.hpp"
#include "bishopdisc/dbar_solver.hpp"
#include "bishopdisc/families.hpp"
#include "bishopdisc/grid.hpp"
#include "bishopdisc/integral_ops.hpp"
#include "bishopdisc/io.hpp"
#include "bishopdisc/levi.hpp"
#include "bishopdisc/scenarios.hpp"
#include "support.hpp"

using namespace bishopdisc;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

const fs::path kScenarios = BISHOPDISC_SCENARIO_DIR;

// Pinned tolerances.
constexpr double kDbarTol = 1e-6;
constexpr double kRefineFactor = 4.0;
constexpr double kRoundoffFloor = 1e-10;
constexpr double kDbarSeconds = 10.0;
constexpr double kSchwarzTol = 1e-10;
constexpr double kPhiTol = 1e-8;
constexpr double kPhiDeviation = 0.1;
constexpr double kBishopTol = 1e-8;
constexpr double kGapMin = 1e6;
constexpr double kLeviRelTol = 1e-3;
constexpr double kLeviC1 = 0.1;
constexpr double kLeviFlatTol = 1e-6;
constexpr double kContainmentTol = 1e-4;
constexpr double kLeviFlatSeconds = 120.0;
constexpr double kSweepResidual = 1e-6;
constexpr double kSweepSlope = 0.5;
constexpr double kSweepSeconds = 300.0;

int failures = 0;

void verdict(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s %d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double max_diff(const DiscFunction& a, const std::function<cplx(cplx)>& f) {
  double e = 0.0;
  const auto& g = *a.grid();
  for (int r = 0; r < g.n_rings(); ++r)
    for (int j = 0; j < g.n_theta(); ++j) e = std::max(e, std::abs(a(r, j) - f(g.node(r, j))));
  return e;
}

using Poly = std::vector<std::tuple<int, int, cplx>>;  // ζ^a ζ̄^b coefficients

std::function<cplx(cplx)> as_function(const Poly& p) {
  return [p](cplx z) {
    cplx s = 0.0;
    for (const auto& [a, b, c] : p) s += c * std::pow(z, a) * std::pow(std::conj(z), b);
    return s;
  };
}

double dbar_inversion_error(const std::function<cplx(cplx)>& g, GridPtr grid) {
  return max_diff(dbar_numeric(cauchy_green(DiscFunction::from_function(grid, g))), g);
}

void criterion_dbar() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Poly> battery;
  for (int i = 0; i < 20; ++i) {
    Poly p;
    const int deg = 1 + i % 6;
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b)
        if (a + b == deg || u(rng) > 0.3) p.emplace_back(a, b, cplx(u(rng), u(rng)));
    battery.push_back(p);
  }
  auto grid = DiscGrid::get(128, 48);
  double worst = 0.0;
  for (const auto& p : battery) worst = std::max(worst, dbar_inversion_error(as_function(p), grid));
  const double secs = seconds_since(t0);

  // Refinement in N_r: the battery plus two non-polynomial integrands.
  std::vector<std::function<cplx(cplx)>> probes;
  for (const auto& p : battery) probes.push_back(as_function(p));
  probes.push_back([](cplx z) { return 1.0 / (2.0 - std::conj(z)); });
  probes.push_back([](cplx z) { return std::exp(std::conj(z)) * z; });
  bool refine_ok = true;
  double worst_drop = 1e300;
  int resolved_pairs = 0;
  for (const auto& g : probes) {
    double prev = dbar_inversion_error(g, DiscGrid::get(128, 4));
    for (int nr : {8, 16, 32}) {
      const double e = dbar_inversion_error(g, DiscGrid::get(128, nr));
      const bool floor = prev <= kRoundoffFloor && e <= kRoundoffFloor;
      if (!floor) {
        ++resolved_pairs;
        worst_drop = std::min(worst_drop, prev / e);
        refine_ok = refine_ok && prev / e >= kRefineFactor;
      }
      prev = e;
    }
  }

  verdict(1, "dbar_inversion",
          worst <= kDbarTol && refine_ok && secs <= kDbarSeconds,
          "max error " + fmt("%.3e", worst) + " (tol 1e-6) on 20 polynomials at 128x48; refinement " +
              "min drop per N_r doubling " + fmt("%.1f", worst_drop) + " over " + std::to_string(resolved_pairs) +
              " pairs above the roundoff floor (>= 4); " + fmt("%.2f", secs) + " s");
}

void criterion_schwarz() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 128;
  double worst = 0.0;
  bool center_ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    const int deg = 1 + (trial * 31) % 32;
    std::vector<double> a(deg + 1), b(deg + 1);
    for (int k = 0; k <= deg; ++k) a[k] = u(rng), b[k] = u(rng);
    a[deg] = 1.0;
    auto h = [&](double t) {
      double s = a[0];
      for (int k = 1; k <= deg; ++k) s += a[k] * std::cos(k * t) + b[k] * std::sin(k * t);
      return s;
    };
    auto sig = BoundarySignal::from_function(n, [&](double t) { return cplx(h(t)); });
    const auto f = schwarz(sig);
    center_ok = center_ok && f.center().imag() == 0.0;
    const auto bd = f.boundary(n);
    for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(bd.samples()[k].real() - h(2.0 * std::numbers::pi * k / n)));
  }
  verdict(2, "schwarz_identity", worst <= kSchwarzTol && center_ok,
          "max |Re F - h| " + fmt("%.3e", worst) + " (tol 1e-10) on 20 trig polynomials of degree <= 32; Im F(0) " +
              (center_ok ? "exactly 0" : "nonzero"));
}

void criterion_phi() {
  auto grid = DiscGrid::get(64, 24);
  std::mt19937_64 rng(303);
  double worst = 0.0, dev_min = 1e300, dev_max = 0.0;
  for (int n : {2, 3})
    for (int trial = 0; trial < 10; ++trial) {
      auto j = testing::random_structure(n, rng, kPhiDeviation);
      const Disc f = testing::random_disc(grid, n, rng, 0.3);
      const auto res = phi_inverse(phi_forward(f, j), j);
      worst = std::max(worst, res.f.distance(f));
      double dev = 0.0;
      for (const RVec& x : unit_ball_grid(n, 3, 0.5)) dev = std::max(dev, max_abs(j(x) - standard_structure_matrix(n)));
      dev_min = std::min(dev_min, dev);
      dev_max = std::max(dev_max, dev);
    }
  const bool dev_ok = std::abs(dev_min - kPhiDeviation) < 1e-3 && std::abs(dev_max - kPhiDeviation) < 1e-3;
  verdict(3, "phi_round_trip", worst <= kPhiTol && dev_ok,
          "max distance " + fmt("%.3e", worst) + " (tol 1e-8) over 10+10 discs in C^2, C^3; |J - J_st| in [" +
              fmt("%.4f", dev_min) + ", " + fmt("%.4f", dev_max) + "]");
}

void criterion_bishop() {
  auto grid = DiscGrid::get(64, 16);
  const std::vector<double> ts{0.02, 0.05, 0.1, 0.15, 0.2}, ls{0.0, 0.25, 0.5, 0.75, 1.0};
  const std::vector<cplx> cs{cplx(-0.1, 0.05), cplx(-0.05, -0.1), cplx(0.0), cplx(0.05, 0.1), cplx(0.1, -0.05)};
  double worst = 0.0, worst_limit = 0.0;
  int solved = 0;
  for (int n : {2, 3}) {
    const auto jst = AlmostComplexStructure::standard(n);
    const auto e = boggess_pitts_quadric(n);
    RVec y(n - 1);
    for (int k = 0; k < n - 1; ++k) y[k] = 0.03 * (k + 1);
    for (double t : ts)
      for (double l : ls)
        for (cplx c : cs) {
          // Closed form of z_{n-1}, written out.
          const double q = t / (1.0 + l);
          auto z_last = [&](cplx zeta) {
            return 0.5 * (std::norm(c) + q * q * (l * l + 1.0)) + q * l * std::conj(c) + cplx(0.0, y[n - 2]) +
                   (q * std::conj(c) + q * q * l) * zeta;
          };
          BishopParams p;
          Eigen::VectorXcd w(2);
          w << c + q * l, q;
          p.w = {HolomorphicDisc(w)};
          p.c = y;
          p.c[n - 2] = z_last(0.0).imag();
          const auto sol = solve_bishop(jst, e, p, grid);
          ++solved;
          worst = std::max(worst, max_diff(sol.f[n - 2], z_last));
          if (l == 1.0) {
            const CVec at = sol.f.eval(-1.0);
            CVec expect(n);
            for (int k = 0; k < n - 2; ++k) expect[k] = cplx(0.0, y[k]);
            expect[n - 2] = 0.5 * c * std::conj(c) + cplx(0.0, y[n - 2]);
            expect[n - 1] = c;
            worst_limit = std::max(worst_limit, (at - expect).cwiseAbs().maxCoeff());
          }
        }
  }
  verdict(4, "quadric_family_reproduction", worst <= kBishopTol && worst_limit <= kBishopTol,
          std::to_string(solved) + " solves on 5x5x5 (t, lambda, c) grids for n = 2, 3; max z_{n-1} error " +
              fmt("%.3e", worst) + ", attachment limit error " + fmt("%.3e", worst_limit) + " (tol 1e-8)");
}

void criterion_ranks() {
  bool ok = true;
  std::string detail;
  for (int n : {2, 3}) {
    const auto jac = bp_attach_jacobian(0.1, n);
    const auto map = bp_attachment_map_rank(0.1, n);
    ok = ok && jac.rank.rank == n + 2 && map.rank == n + 1 && jac.rank.gap >= kGapMin && map.gap >= kGapMin;
    detail += "n=" + std::to_string(n) + ": ranks (" + std::to_string(jac.rank.rank) + ", " +
              std::to_string(map.rank) + "), gaps (" + fmt("%.2e", jac.rank.gap) + ", " + fmt("%.2e", map.gap) + "); ";
  }
  verdict(5, "attachment_ranks", ok, detail + "required (n+2, n+1), gaps >= 1e6");
}

void criterion_levi() {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0, c1_max = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 2;
    auto j = testing::random_structure(n, rng, 0.02, 0.3);
    c1_max = std::max(c1_max, structure_distance(j, AlmostComplexStructure::standard(n), unit_ball_grid(n, 3, 0.3), 1));
    // |Z|² plus a random cubic and a random linear term.
    std::vector<double> lin(2 * n), cub(2 * n);
    for (int k = 0; k < 2 * n; ++k) lin[k] = u(rng), cub[k] = 0.3 * u(rng);
    auto uf = testing::scalar(2 * n, [=](const RVec& x) {
      double s = x.squaredNorm();
      for (int k = 0; k < 2 * n; ++k) s += lin[k] * x[k] + cub[k] * x[k] * x[k] * x[(k + 1) % (2 * n)];
      return s;
    });
    RVec p(2 * n), v(2 * n);
    for (int k = 0; k < 2 * n; ++k) p[k] = 0.1 * u(rng), v[k] = u(rng);
    v.normalize();
    const double d = levi_form(uf, j, p, v, LeviMethod::direct);
    const double c = levi_form(uf, j, p, v, LeviMethod::disc);
    worst = std::max(worst, std::abs(d - c) / std::abs(d));
  }

  // Cautionary pair: Γ = {Re z + |w|² = 0}, J the pushforward of J_st by (z, w) ↦ (z - |w|², w).
  const auto j = structure_from_json(read_json_file(kScenarios / "descriptors/pushforward_c2.json"));
  const auto st = AlmostComplexStructure::standard(2);
  auto r = testing::scalar(4, [](const RVec& x) { return x[0] + x[2] * x[2] + x[3] * x[3]; });
  int pattern = 0;
  double flat_max = 0.0, strict_min = 1e300;
  for (int k = 0; k < 20; ++k) {
    const double yz = 0.2 * u(rng), a = 0.2 * u(rng), b = 0.2 * u(rng);
    RVec p(4);
    p << -(a * a + b * b), yz, a, b;
    double lj = 0.0, ls = 1e300;
    for (const RVec& t : levi_null_tangent(r, j, p)) lj = std::max(lj, std::abs(levi_form_direct(r, j, p, t)));
    for (const RVec& t : levi_null_tangent(r, st, p)) ls = std::min(ls, levi_form_direct(r, st, p, t));
    flat_max = std::max(flat_max, lj);
    strict_min = std::min(strict_min, ls);
    if (lj <= kLeviFlatTol && ls > kLeviFlatTol) ++pattern;
  }
  verdict(6, "levi_cross_check", worst <= kLeviRelTol && c1_max <= kLeviC1 && pattern == 20,
          "max relative direct/disc difference " + fmt("%.3e", worst) + " (tol 1e-3) on 50 cases with C1 distance <= " +
              fmt("%.3f", c1_max) + "; sign pattern " + std::to_string(pattern) + "/20 (|L^J| <= " +
              fmt("%.1e", flat_max) + ", L^Jst >= " + fmt("%.3f", strict_min) + ")");
}

ScenarioReport run_file(const std::string& name, int jobs, double* secs = nullptr) {
  auto cfg = ScenarioConfig::load(kScenarios / name);
  cfg.jobs = jobs;
  const auto t0 = Clock::now();
  auto rep = run_scenario(cfg);
  if (secs) *secs = seconds_since(t0);
  return rep;
}

const Verdict* find(const ScenarioReport& r, const std::string& name) {
  for (const auto& v : r.verdicts)
    if (v.name == name) return &v;
  return nullptr;
}

std::vector<std::pair<std::string, std::string>> reports;  // scenario file → dumped report

void criterion_levi_flat() {
  double secs = 0.0, secs_neg = 0.0;
  const auto pos = run_file("levi_flat.json", 4, &secs);
  const auto neg = run_file("levi_flat_negative_control.json", 4, &secs_neg);
  reports.emplace_back("levi_flat.json", dump_report(pos.to_json()));
  reports.emplace_back("levi_flat_negative_control.json", dump_report(neg.to_json()));
  const auto shape = pos.aggregates.at("shape");
  const double cmax = pos.aggregates.at("containment_max").get<double>();
  const double nmax = neg.aggregates.at("containment_max").get<double>();
  const bool ok = pos.passed() && cmax <= kContainmentTol && shape == json({4, 4, 4}) && nmax > kContainmentTol &&
                  secs + secs_neg <= kLeviFlatSeconds;
  verdict(7, "levi_flat_containment", ok,
          "max interior |r o f| " + fmt("%.3e", cmax) + " (tol 1e-4) on a 4x4x4 chart; negative control excursion " +
              fmt("%.3e", nmax) + " fails containment; " + fmt("%.2f", secs + secs_neg) + " s");
}

void criterion_convergence() {
  const auto rep = run_file("convergence.json", 2);
  reports.emplace_back("convergence.json", dump_report(rep.to_json()));
  const double iso = rep.aggregates.at("isotropic_fit").at("slope").get<double>();
  const double an = rep.aggregates.at("anisotropic_fit").at("slope").get<double>();
  const auto* nc = find(rep, "anisotropic_to_standard_at_smallest_delta");
  const bool ok = std::abs(iso - 1.0) <= 0.15 && std::abs(an - 0.5) <= 0.15 && nc && nc->pass &&
                  rep.aggregates.at("cr_dimension").get<int>() > 1;
  verdict(8, "dilation_rates", ok,
          "isotropic slope " + fmt("%.4f", iso) + " (1 +- 0.15); slowest anisotropic block slope " + fmt("%.4f", an) +
              " (0.5 +- 0.15); distance to J_st at smallest delta " + fmt("%.3e", nc ? nc->measured : -1.0) +
              " vs limit gap threshold " + fmt("%.3e", nc ? nc->threshold : -1.0));
}

void criterion_sweep() {
  double secs = 0.0;
  const auto rep = run_file("sweep.json", 4, &secs);
  reports.emplace_back("sweep.json", dump_report(rep.to_json()));
  const auto& a = rep.aggregates;
  const int n = a.at("n").get<int>();
  const int full = a.at("attachment_jacobian").at("rank").get<int>();
  const int map = a.at("attachment_map").at("rank").get<int>();
  const double bres = a.at("boundary_residual_max").get<double>();
  const double ires = a.at("interior_residual_max").get<double>();
  const double slope = a.at("convergence_fit").at("slope").get<double>();
  const bool ok = rep.passed() && n == 3 && a.at("m").get<int>() == 2 && full == n + 2 && map == n + 1 &&
                  bres <= kSweepResidual && ires <= kSweepResidual && slope >= kSweepSlope && secs <= kSweepSeconds;
  verdict(9, "sweep_family", ok,
          "C^3, m = 2, delta = " + fmt("%.3g", a.at("delta").get<double>()) + ": residuals (" + fmt("%.2e", bres) +
              ", " + fmt("%.2e", ires) + ") <= 1e-6; ranks (" + std::to_string(full) + ", " + std::to_string(map) +
              "); convergence slope " + fmt("%.4f", slope) + " >= 0.5; " + fmt("%.2f", secs) + " s");
}

void criterion_determinism() {
  reports.emplace_back("chart.json", dump_report(run_file("chart.json", 1).to_json()));
  bool ok = true;
  std::string detail;
  for (const auto& [name, first] : reports) {
    const std::string again = dump_report(run_file(name, 3).to_json());
    const bool same = again == first;
    ok = ok && same;
    detail += name + (same ? " identical; " : " DIFFERS; ");
  }
  verdict(10, "determinism", ok && reports.size() == 5, detail + "second runs use a different job count");
}

template <class F>
void guarded(int id, const std::string& name, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    verdict(id, name, false, std::string("threw: ") + e.what());
  }
}

}  // namespace

int main() {
  guarded(1, "dbar_inversion", criterion_dbar);
  guarded(2, "schwarz_identity", criterion_schwarz);
  guarded(3, "phi_round_trip", criterion_phi);
  guarded(4, "quadric_family_reproduction", criterion_bishop);
  guarded(5, "attachment_ranks", criterion_ranks);
  guarded(6, "levi_cross_check", criterion_levi);
  guarded(7, "levi_flat_containment", criterion_levi_flat);
  guarded(8, "dilation_rates", criterion_convergence);
  guarded(9, "sweep_family", criterion_sweep);
  guarded(10, "determinism", criterion_determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
