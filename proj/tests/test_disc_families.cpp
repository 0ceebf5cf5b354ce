#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/LU>

#include "bishopdisc/bishop.hpp"
#include "bishopdisc/dbar_solver.hpp"
#include "bishopdisc/families.hpp"
#include "bishopdisc/grid.hpp"
#include "bishopdisc/integral_ops.hpp"
#include "support.hpp"

using namespace bishopdisc;
using testing::antilinear_entry;

namespace {

FamilyParams bp(double t, double l, RVec y, cplx c) {
  FamilyParams p;
  p.t = t;
  p.lambda = l;
  p.y = std::move(y);
  p.c = CVec::Constant(1, c);
  return p;
}

// The family written out as displayed: z_j = iy_j, z_{n-1}, w.
CVec bp_oracle(double t, double l, const RVec& y, cplx c, int n, cplx zeta) {
  const cplx cb = std::conj(c);
  CVec z(n);
  for (int j = 0; j < n - 2; ++j) z[j] = cplx(0.0, y[j]);
  z[n - 2] = 0.5 * (c * cb + t * t / ((1 + l) * (1 + l)) * (l * l + 1)) + t * l / (1 + l) * cb +
             cplx(0.0, y[n - 2]) + (t * cb / (1 + l) + t * t * l / ((1 + l) * (1 + l))) * zeta;
  z[n - 1] = c + t * (l + zeta) / (1 + l);
  return z;
}

// ℂ³, m = 1: J₀ = J_st + (A + C)·Re w₁ + B·Re w₂ with A, B in the z-row × w₁-column
// block and C in the z-row × w₂-column block.
struct Model {
  RMat a, b, c;
  AlmostComplexStructure j;
  LinearPart l0;
  AlmostComplexStructure j0;
  QuadricModel q;
};

Model model(double scale) {
  RMat a = antilinear_entry(3, 0, 1, cplx(0.3, 0.1) * scale);
  RMat b = antilinear_entry(3, 0, 1, cplx(-0.1, 0.2) * scale);
  RMat c = antilinear_entry(3, 0, 2, cplx(0.0, 0.4) * scale);
  auto j = testing::linear_structure(3, {{2, a + c}, {4, b}});
  auto [lp, j0] = linear_part_and_limit(j, 1);
  QuadricModel q;
  q.n = 3;
  q.m = 1;
  CMat h(2, 2);
  h << cplx(0.5, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(-1.0, 0.0);
  q.hermitian = {h};
  return {a, b, c, j, lp, j0, q};
}

FamilyParams j0_params(double t, double l, double y, cplx c1, cplx c2) {
  FamilyParams p;
  p.t = t;
  p.lambda = l;
  p.y = RVec::Constant(1, y);
  p.c = CVec(2);
  p.c << c1, c2;
  return p;
}

double boundary_defect_oracle(const Disc& d, const QuadricModel& q) {
  const auto& g = *d.grid();
  double e = 0.0;
  for (int k = 0; k < g.n_theta(); ++k) {
    CVec w(2);
    w << d[1](g.boundary_ring(), k), d[2](g.boundary_ring(), k);
    e = std::max(e, std::abs(2.0 * d[0](g.boundary_ring(), k).real() + q.form(0, w)));
  }
  return e;
}

}  // namespace

TEST_CASE("flat_disc") {
  auto grid = DiscGrid::get(32, 8);
  auto zero = flat_disc(grid, CVec::Zero(1), CVec::Zero(1), RVec::Zero(1));
  CHECK(zero.sup() == 0.0);
  CVec e1 = CVec::Zero(2);
  e1[0] = 1.0;
  auto line = flat_disc(grid, CVec::Zero(2), e1, RVec::Zero(1));
  CHECK(std::abs(line.eval(cplx(0.3, 0.4))[1] - cplx(0.3, 0.4)) < 1e-14);
  auto f = flat_disc(grid, CVec::Constant(1, cplx(0.1, 0.2)), CVec::Constant(1, cplx(0.3, -0.1)), RVec::Constant(1, 0.7));
  for (int k = 0; k < grid->n_theta(); ++k) CHECK(f[0](grid->boundary_ring(), k).real() == 0.0);
  CHECK(boundary_defect_sup(f, GenericSubmanifold::flat(2, 1)) == 0.0);
}

TEST_CASE("closed-form quadric family") {
  RVec y(2);
  y << 0.05, -0.1;
  for (double l : {0.0, 0.3, 1.0})
    for (cplx zeta : {cplx(0.0), cplx(0.3, -0.6), cplx(-1.0, 0.0)}) {
      const CVec a = boggess_pitts_point(bp(0.2, l, y, cplx(0.1, 0.2)), 3, zeta);
      CHECK((a - bp_oracle(0.2, l, y, cplx(0.1, 0.2), 3, zeta)).norm() < 1e-15);
    }

  auto grid = DiscGrid::get(128, 8);
  auto d = boggess_pitts(grid, bp(0.1, 0.5, RVec::Zero(1), cplx(0.2, 0.1)), 2);
  CHECK(boundary_defect_sup(d, boggess_pitts_quadric(2)) <= 1e-12);

  // Attachment limit at λ = 1, ζ = -1.
  const cplx c(0.15, -0.05);
  const CVec lim = boggess_pitts_point(bp(0.3, 1.0, y, c), 3, -1.0);
  CHECK(std::abs(lim[0] - cplx(0.0, y[0])) < 1e-15);
  CHECK(std::abs(lim[1] - (0.5 * c * std::conj(c) + cplx(0.0, y[1]))) < 1e-15);
  CHECK(std::abs(lim[2] - c) < 1e-15);

  // t → 0: the disc shrinks onto the attachment point.
  const CVec p0 = boggess_pitts_point(bp(1e-9, 0.5, y, c), 3, 0.0);
  const CVec p1 = boggess_pitts_point(bp(1e-9, 0.5, y, c), 3, cplx(0.0, 1.0));
  CHECK((p0 - p1).norm() < 1e-8);

  auto w = boggess_pitts_w(bp(0.2, 0.5, y, c));
  auto z = boggess_pitts_z(bp(0.2, 0.5, y, c), 3);
  const cplx zeta(0.2, 0.3);
  const CVec full = boggess_pitts_point(bp(0.2, 0.5, y, c), 3, zeta);
  CHECK(std::abs(w[0].eval(zeta) - full[2]) < 1e-15);
  CHECK(std::abs(z[1].eval(zeta) - full[1]) < 1e-15);

  CHECK_THROWS_AS(bp(0.0, 0.5, y, c).validate(), Error);
  CHECK_THROWS_AS(bp(0.1, 1.5, y, c).validate(), Error);
}

TEST_CASE("numerical_rank") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 3);
  a(0, 0) = 1.0;
  a(1, 1) = 0.5;
  auto r = numerical_rank(a);
  CHECK(r.rank == 2);
  CHECK(r.gap > 1e6);
  a(2, 2) = 1e-3;
  r = numerical_rank(a);
  CHECK(r.rank == 3);
  CHECK(r.gap == 0.0);
  a(2, 2) = 2e-6;  // ratio 4e-6 sits in the ambiguous band
  CHECK_THROWS_AS(numerical_rank(a), Error);
}

TEST_CASE("attachment ranks") {
  for (int n : {2, 3}) {
    auto jac = bp_attach_jacobian(0.1, n);
    CHECK(jac.rank.rank == n + 2);
    CHECK(jac.rank.gap >= 1e6);
    CHECK(jac.nu_alignment >= 1.0 - 1e-6);
    auto map = bp_attachment_map_rank(0.1, n);
    CHECK(map.rank == n + 1);
    CHECK(map.gap >= 1e6);
  }
}

TEST_CASE("limit block pattern") {
  auto m = model(1.0);
  CHECK_NOTHROW(check_limit_pattern(m.l0));
  // A w-row entry is not part of the limit pattern.
  LinearPart bad = m.l0;
  bad.limit_slopes[2] = antilinear_entry(3, 1, 1, cplx(0.2, 0.0));
  CHECK_THROWS_AS(check_limit_pattern(bad), Error);
}

TEST_CASE("j0_disc") {
  auto grid = DiscGrid::get(64, 16);
  auto m = model(1.0);
  SUBCASE("c_1 = 0 gives the J_st disc") {
    auto p = j0_params(0.2, 0.4, 0.03, 0.0, cplx(0.1, -0.05));
    auto d = j0_disc(grid, m.l0, m.q, p);
    CHECK(d.a.norm() == 0.0);
    for (cplx zeta : {cplx(0.0), cplx(0.5, 0.5), cplx(0.0, -1.0)}) {
      const CVec bpz = bp_oracle(0.2, 0.4, RVec::Constant(1, 0.03), cplx(0.1, -0.05), 2, zeta);
      const CVec z = j0_disc_point(m.l0, m.q, p, zeta);
      CHECK(std::abs(z[0] - bpz[0]) < 1e-14);
      CHECK(std::abs(z[1]) == 0.0);
      CHECK(std::abs(z[2] - bpz[1]) < 1e-14);
    }
  }
  SUBCASE("zero linear part") {
    auto [lp, j0] = linear_part_and_limit(AlmostComplexStructure::standard(3), 1);
    auto d = j0_disc(grid, lp, m.q, j0_params(0.2, 0.4, 0.0, cplx(0.1, 0.1), 0.05));
    CHECK(d.a.norm() == 0.0);
    CHECK(d.holomorphy_residual < 1e-10);
  }
  SUBCASE("generic parameters") {
    for (auto c1 : {cplx(0.1, 0.05), cplx(-0.2, 0.1)}) {
      auto p = j0_params(0.15, 0.6, -0.02, c1, cplx(0.05, 0.02));
      auto d = j0_disc(grid, m.l0, m.q, p);
      CHECK(d.a.norm() > 0.0);
      // J₀ assembled directly from A, B and C.
      auto j0 = testing::linear_structure(3, {{2, m.a + m.c}, {4, m.b}});
      CHECK(jholo_residual_sup(d.disc, j0) <= 1e-10);
      CHECK(boundary_defect_oracle(d.disc, m.q) <= 1e-10);
    }
  }
}

TEST_CASE("psi") {
  auto grid = DiscGrid::get(64, 16);
  std::vector<DiscFunction> w{DiscFunction::from_function(grid, [](cplx z) { return 0.1 + z; }),
                              DiscFunction::constant(grid, 0.3)};
  auto zero = psi(w, AlmostComplexStructure::standard(3), 1);
  CHECK(zero[0].sup() == 0.0);

  // w₂ constant and w₁ = ζ: the integrand -Q_{z,w₁}(w₂) is constant.
  const RMat b = antilinear_entry(3, 0, 1, cplx(0.2, -0.1));
  auto j0 = testing::linear_structure(3, {{4, b}});
  std::vector<DiscFunction> w2{DiscFunction::from_function(grid, [](cplx z) { return z; }),
                               DiscFunction::constant(grid, 0.3)};
  auto ps = psi(w2, j0, 1);
  const RMat jst = standard_structure_matrix(3);
  RVec x = RVec::Zero(6);
  x[4] = 0.3;
  const RMat jx = j0(x);
  const Eigen::MatrixXd a = -(Eigen::MatrixXd(jst + jx)).inverse() * Eigen::MatrixXd(jst - jx);
  const cplx expected = -complexify_antilinear(RMat(a))(0, 1);
  CHECK(std::abs(expected) > 0.0);
  CHECK((dbar_numeric(ps[0]) - DiscFunction::constant(grid, expected)).sup() < 1e-6);
}

TEST_CASE("transfer between the J0 and J_st pictures") {
  auto grid = DiscGrid::get(64, 16);
  auto m = model(1.0);
  auto e0 = quadric_submanifold(m.q);
  auto p = j0_params(0.15, 0.6, -0.02, cplx(0.1, 0.05), cplx(0.05, 0.02));
  auto d = j0_disc(grid, m.l0, m.q, p);

  auto tr = lemma45_transfer(d.disc, m.j0, e0, 1);
  CHECK(tr.input_holomorphy <= 1e-10);
  CHECK(tr.output_holomorphy <= 1e-8);
  CHECK(tr.output_boundary <= 1e-8);
  // The J_st disc over the same w: z = -½ I_S(H(w)|b𝔻) + i Im z(0).
  const auto& g = *grid;
  Eigen::VectorXd hb(g.n_theta());
  for (int k = 0; k < g.n_theta(); ++k) {
    CVec w(2);
    w << d.disc[1](g.boundary_ring(), k), d.disc[2](g.boundary_ring(), k);
    hb[k] = -0.5 * m.q.form(0, w);
  }
  const DiscFunction closed = schwarz(BoundarySignal::from_real(hb)).on_grid(grid) +
                              DiscFunction::constant(grid, cplx(0.0, tr.disc[0].center().imag()));
  CHECK((tr.disc[0] - closed).sup() <= 1e-8);

  // With J₀ = J_st the transfer is the identity.
  auto same = lemma45_transfer(d.disc, AlmostComplexStructure::standard(3), e0, 1);
  CHECK(same.disc.distance(d.disc) < 1e-15);

  // Boundary residuals of a non-disc are preserved.
  Disc off = d.disc;
  off[0] = off[0] + DiscFunction::from_function(grid, [](cplx z) { return 0.01 * std::norm(z) + 0.02 * z; });
  auto t2 = lemma45_transfer(off, m.j0, e0, 1);
  CHECK(t2.input_boundary > 1e-3);
  CHECK(std::abs(t2.output_boundary - t2.input_boundary) <= 1e-8);
}
