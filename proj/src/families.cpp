#include "bishopdisc/families.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bishopdisc/dbar_solver.hpp"
#include "bishopdisc/integral_ops.hpp"

namespace bishopdisc {

Disc flat_disc(GridPtr grid, const CVec& p, const CVec& v, const RVec& c) {
  if (p.size() != v.size()) throw Error("flat disc: p and v must have the same size");
  std::vector<DiscFunction> comps;
  for (Eigen::Index j = 0; j < c.size(); ++j) comps.push_back(DiscFunction::constant(grid, cplx(0.0, c[j])));
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    const cplx pk = p[k], vk = v[k];
    comps.push_back(DiscFunction::from_function(grid, [pk, vk](cplx z) { return pk + vk * z; }));
  }
  return Disc(std::move(comps));
}

void FamilyParams::validate() const {
  if (!(t > 0)) throw Error("family parameter t must be positive");
  if (lambda < 0.0 || lambda > 1.0) throw Error("family parameter lambda must lie in [0, 1]");
}

CVec boggess_pitts_point(const FamilyParams& p, int n, cplx zeta) {
  p.validate();
  if (n < 2) throw Error("quadric family needs n >= 2");
  if (p.y.size() != n - 1 || p.c.size() != 1) throw Error("quadric family needs y in R^{n-1} and c in C");
  const double s = p.t / (1.0 + p.lambda), l = p.lambda;
  const cplx c = p.c[0], cb = std::conj(c);
  CVec z(n);
  for (int j = 0; j < n - 2; ++j) z[j] = cplx(0.0, p.y[j]);
  z[n - 2] = 0.5 * (std::norm(c) + s * s * (l * l + 1.0)) + s * l * cb + cplx(0.0, p.y[n - 2]) +
             (s * cb + s * s * l) * zeta;
  z[n - 1] = c + s * (l + zeta);
  return z;
}

Disc boggess_pitts(GridPtr grid, const FamilyParams& p, int n) {
  Disc d = Disc::zeros(grid, n);
  for (int i = 0; i < grid->n_rings(); ++i)
    for (int k = 0; k < grid->n_theta(); ++k) {
      const CVec z = boggess_pitts_point(p, n, grid->node(i, k));
      for (int c = 0; c < n; ++c) d[c].values()(i, k) = z[c];
    }
  return d;
}

std::vector<HolomorphicDisc> boggess_pitts_w(const FamilyParams& p) {
  const double s = p.t / (1.0 + p.lambda);
  Eigen::VectorXcd w(2);
  w << p.c[0] + s * p.lambda, s;
  return {HolomorphicDisc(w)};
}

std::vector<HolomorphicDisc> boggess_pitts_z(const FamilyParams& p, int n) {
  std::vector<HolomorphicDisc> out;
  const CVec z0 = boggess_pitts_point(p, n, 0.0);
  const CVec z1 = boggess_pitts_point(p, n, 1.0);
  for (int j = 0; j < n - 1; ++j) {
    Eigen::VectorXcd t(2);
    t << z0[j], z1[j] - z0[j];
    out.emplace_back(t);
  }
  return out;
}

GenericSubmanifold boggess_pitts_quadric(int n) {
  const int m = n - 1;
  return GenericSubmanifold(
      n, m,
      [m](const RVec& xi) -> RVec {
        RVec h = RVec::Zero(m);
        h[m - 1] = 0.5 * (xi[m] * xi[m] + xi[m + 1] * xi[m + 1]);
        return h;
      },
      [m](const RVec& xi) -> RMat {
        RMat jac = RMat::Zero(m, m + 2);
        jac(m - 1, m) = xi[m];
        jac(m - 1, m + 1) = xi[m + 1];
        return jac;
      },
      "E0'");
}

RankInfo numerical_rank(const Eigen::MatrixXd& a, double threshold, double ambiguity) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  RankInfo info;
  const Eigen::VectorXd s = svd.singularValues();
  // a map from ℝ^cols has cols singular values; the missing ones are exact zeros
  std::vector<double> sv(s.data(), s.data() + s.size());
  sv.resize(a.cols(), 0.0);
  info.singular_values = sv;
  if (sv.empty() || sv[0] == 0.0) return info;
  const double floor = std::numeric_limits<double>::epsilon() * sv[0];
  auto floored = [floor](double x) { return std::max(x, floor); };
  int rank = static_cast<int>(sv.size());
  for (size_t k = 0; k + 1 < sv.size(); ++k) {
    const double ratio = floored(sv[k + 1]) / floored(sv[k]);
    info.min_ratio = std::min(info.min_ratio, ratio);
    if (ratio <= threshold && rank == static_cast<int>(sv.size())) rank = static_cast<int>(k + 1);
  }
  if (rank == static_cast<int>(sv.size()) && info.min_ratio > threshold && info.min_ratio < ambiguity) {
    std::ostringstream os;
    os << "ambiguous numerical rank: smallest singular-value ratio " << info.min_ratio
       << " has no clear threshold crossing; singular values:";
    for (double x : sv) os << ' ' << x;
    throw Error(os.str());
  }
  info.rank = rank;
  info.gap = rank < static_cast<int>(sv.size()) ? floored(sv[rank - 1]) / floored(sv[rank]) : 0.0;
  return info;
}

namespace {

RVec bp_real(double t, double lambda, const RVec& y, cplx c, int n, cplx zeta) {
  FamilyParams p;
  p.t = t;
  p.lambda = lambda;
  p.y = y;
  p.c = CVec::Constant(1, c);
  return to_real(boggess_pitts_point(p, n, zeta));
}

}  // namespace

AttachJacobian bp_attach_jacobian(double t, int n, double step) {
  const int d = 2 * n;
  const RVec y0 = RVec::Zero(n - 1);
  auto f = [&](double tt, double l, const RVec& y, cplx c) { return bp_real(tt, l, y, c, n, -l); };
  Eigen::MatrixXd jac(d, n + 2);
  jac.col(0) = (3.0 * f(t, 1.0, y0, 0.0) - 4.0 * f(t, 1.0 - step, y0, 0.0) +
                f(t, 1.0 - 2.0 * step, y0, 0.0)) / (2.0 * step);
  for (int k = 0; k < n - 1; ++k) {
    RVec yp = y0, ym = y0;
    yp[k] = step;
    ym[k] = -step;
    jac.col(1 + k) = (f(t, 1.0, yp, 0.0) - f(t, 1.0, ym, 0.0)) / (2.0 * step);
  }
  jac.col(n) = (f(t, 1.0, y0, step) - f(t, 1.0, y0, -step)) / (2.0 * step);
  jac.col(n + 1) = (f(t, 1.0, y0, cplx(0, step)) - f(t, 1.0, y0, cplx(0, -step))) / (2.0 * step);

  Eigen::MatrixXd ext(d, n + 3);
  ext.leftCols(n + 2) = jac;
  ext.col(n + 2) = (f(t + step, 1.0, y0, 0.0) - f(t - step, 1.0, y0, 0.0)) / (2.0 * step);

  AttachJacobian out;
  out.jacobian = jac;
  out.rank = numerical_rank(ext);
  out.lambda_direction = jac.col(0);
  // normal space of T₀(E₀′)
  const RMat dr = boggess_pitts_quadric(n).defining_jacobian(RVec::Zero(d));
  const Eigen::MatrixXd q = Eigen::MatrixXd(dr.transpose()).householderQr().householderQ() *
                            Eigen::MatrixXd::Identity(d, dr.rows());
  const Eigen::VectorXd normal = q * (q.transpose() * out.lambda_direction);
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(d);
  nu[2 * (n - 2)] = 1.0;
  out.nu_alignment = normal.norm() > 0 ? std::abs(normal.dot(nu)) / normal.norm() : 0.0;
  return out;
}

RankInfo bp_attachment_map_rank(double t, int n, double step) {
  const int d = 2 * n;
  const RVec y0 = RVec::Zero(n - 1);
  auto f = [&](double tt, const RVec& y, cplx c) { return bp_real(tt, 1.0, y, c, n, -1.0); };
  Eigen::MatrixXd ext(d, n + 2);
  for (int k = 0; k < n - 1; ++k) {
    RVec yp = y0, ym = y0;
    yp[k] = step;
    ym[k] = -step;
    ext.col(k) = (f(t, yp, 0.0) - f(t, ym, 0.0)) / (2.0 * step);
  }
  ext.col(n - 1) = (f(t, y0, step) - f(t, y0, -step)) / (2.0 * step);
  ext.col(n) = (f(t, y0, cplx(0, step)) - f(t, y0, cplx(0, -step))) / (2.0 * step);
  ext.col(n + 1) = (f(t + step, y0, 0.0) - f(t - step, y0, 0.0)) / (2.0 * step);
  return numerical_rank(ext);
}

void check_limit_pattern(const LinearPart& lp, double tol) {
  const int n = lp.n, m = lp.m;
  for (int k = 0; k < 2 * n; ++k) {
    const RMat& s = lp.limit_slopes.at(k);
    for (int a = 0; a < 2 * n; ++a)
      for (int b = 0; b < 2 * n; ++b) {
        if (std::abs(s(a, b)) <= tol) continue;
        const bool allowed = k >= 2 * m && a < 2 * m && b >= 2 * m && !(k >= 2 * n - 2 && b >= 2 * n - 2);
        if (!allowed) {
          std::ostringstream os;
          os << "limit structure violates the block pattern: d/dx_" << k << " of entry (" << a << ", "
             << b << ") is " << s(a, b);
          throw Error(os.str());
        }
      }
  }
}

namespace {

AlmostComplexStructure limit_structure(const LinearPart& lp) {
  const RMat jst = standard_structure_matrix(lp.n);
  return AlmostComplexStructure(
      lp.n, [jst, lp](const RVec& x) -> RMat { return jst + lp.limit(x); },
      [lp](const RVec&) { return lp.limit_slopes; }, std::numeric_limits<double>::infinity(), "J0");
}

struct J0Coefficients {
  CVec constant, linear, a;  // z_j = constant_j + linear_j ζ + a_j ζ̄ - ā_j ζ
};

J0Coefficients j0_coefficients(const LinearPart& l0, const QuadricModel& q, const FamilyParams& p) {
  p.validate();
  const int n = l0.n, m = l0.m, nw = n - m, last = nw - 1;
  if (q.n != n || q.m != m) throw Error("quadric model and limit structure dimensions differ");
  if (p.y.size() != m || p.c.size() != nw) throw Error("j0 family needs y in R^m and c in C^{n-m}");
  const double s = p.t / (1.0 + p.lambda), l = p.lambda;
  CVec w0 = p.c;
  w0[last] += s * l;
  CVec z0 = CVec::Zero(n);
  z0.tail(nw) = w0;
  const CMat qm = q_matrix(limit_structure(l0), to_real(z0));
  J0Coefficients out;
  out.constant = CVec::Zero(m);
  out.linear = CVec::Zero(m);
  out.a = CVec::Zero(m);
  for (int j = 0; j < m; ++j) out.a[j] = -qm(j, m + last) * s;
  for (int j = 0; j + 1 < m; ++j) {
    const CMat& h = q.hermitian[j];
    const double big_a = (w0.adjoint() * h * w0)(0, 0).real();
    cplx b = 0.0;
    for (int k = 0; k < nw; ++k) b += std::conj(w0[k]) * h(k, last);
    b *= s;
    out.constant[j] = cplx(-0.5 * (big_a + s * s * h(last, last).real()), p.y[j]);
    out.linear[j] = -b;
  }
  const cplx c = p.c[last], cb = std::conj(c);
  CVec wp = p.c;
  wp[last] = 0.0;
  const double hm = (wp.adjoint() * q.hermitian[m - 1] * wp)(0, 0).real();
  out.constant[m - 1] = 0.5 * (std::norm(c) + s * s * (l * l + 1.0)) + s * l * cb +
                        cplx(0.0, p.y[m - 1]) - 0.5 * hm;
  out.linear[m - 1] = s * cb + s * s * l;
  return out;
}

}  // namespace

CVec j0_disc_point(const LinearPart& l0, const QuadricModel& q, const FamilyParams& p, cplx zeta) {
  const auto co = j0_coefficients(l0, q, p);
  const int n = l0.n, m = l0.m, nw = n - m;
  const double s = p.t / (1.0 + p.lambda);
  CVec z(n);
  for (int j = 0; j < m; ++j)
    z[j] = co.constant[j] + co.linear[j] * zeta + co.a[j] * std::conj(zeta) - std::conj(co.a[j]) * zeta;
  for (int k = 0; k < nw; ++k) z[m + k] = p.c[k];
  z[n - 1] += s * (p.lambda + zeta);
  return z;
}

J0Disc j0_disc(GridPtr grid, const LinearPart& l0, const QuadricModel& q, const FamilyParams& p,
               double tol) {
  check_limit_pattern(l0);
  q.require_normalized();
  const auto co = j0_coefficients(l0, q, p);
  const int n = l0.n;
  J0Disc out;
  out.a = co.a;
  out.disc = Disc::zeros(grid, n);
  for (int i = 0; i < grid->n_rings(); ++i)
    for (int k = 0; k < grid->n_theta(); ++k) {
      const CVec z = j0_disc_point(l0, q, p, grid->node(i, k));
      for (int c = 0; c < n; ++c) out.disc[c].values()(i, k) = z[c];
    }
  out.holomorphy_residual = jholo_residual_sup(out.disc, limit_structure(l0));
  out.boundary_residual = boundary_defect_sup(out.disc, quadric_submanifold(q));
  if (out.holomorphy_residual > tol || out.boundary_residual > tol) {
    std::ostringstream os;
    os << "j0 disc failed verification: holomorphy residual " << out.holomorphy_residual
       << ", boundary residual " << out.boundary_residual;
    throw Error(os.str());
  }
  return out;
}

std::vector<DiscFunction> psi(const std::vector<DiscFunction>& w, const AlmostComplexStructure& j0,
                              int m) {
  const int n = j0.dim_complex(), nw = n - m;
  if (static_cast<int>(w.size()) != nw) throw Error("psi needs n - m w-components");
  const auto& grid = w.at(0).grid();
  std::vector<DiscFunction> wz;
  for (const auto& c : w) wz.push_back(dzeta_numeric(c));
  std::vector<DiscFunction> integrand(m, DiscFunction(grid));
  CVec z = CVec::Zero(n);
  for (int i = 0; i < grid->n_rings(); ++i)
    for (int k = 0; k < grid->n_theta(); ++k) {
      for (int q = 0; q < nw; ++q) z[m + q] = w[q](i, k);
      const CMat qm = q_matrix(j0, to_real(z));
      for (int j = 0; j < m; ++j) {
        cplx acc = 0.0;
        for (int q = 0; q < nw; ++q) acc += qm(j, m + q) * std::conj(wz[q](i, k));
        integrand[j].values()(i, k) = -acc;
      }
    }
  std::vector<DiscFunction> out;
  for (const auto& g : integrand) out.push_back(cauchy_green(g));
  return out;
}

TransferResult lemma45_transfer(const Disc& zw, const AlmostComplexStructure& j0,
                                const GenericSubmanifold& e0, int m) {
  const int n = zw.dim();
  std::vector<DiscFunction> w(zw.components.begin() + m, zw.components.end());
  const auto ps = psi(w, j0, m);
  const auto& grid = zw.grid();
  TransferResult res;
  res.disc = zw;
  for (int j = 0; j < m; ++j) {
    const Eigen::VectorXd re = ps[j].boundary().samples().real();
    const DiscFunction lift = schwarz(BoundarySignal::from_real(re)).on_grid(grid);
    res.disc[j] = zw[j] - ps[j] + lift;
  }
  res.input_holomorphy = jholo_residual_sup(zw, j0);
  res.input_boundary = boundary_defect_sup(zw, e0);
  res.output_holomorphy = jholo_residual_sup(res.disc, AlmostComplexStructure::standard(n));
  res.output_boundary = boundary_defect_sup(res.disc, e0);
  return res;
}

}  // namespace bishopdisc
