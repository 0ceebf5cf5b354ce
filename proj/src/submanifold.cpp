#include "bishopdisc/submanifold.hpp"

#include <cmath>

namespace bishopdisc {

namespace {
std::span<const double> as_span(const RVec& x) { return {x.data(), static_cast<size_t>(x.size())}; }
}  // namespace

GenericSubmanifold::GenericSubmanifold(int n, int m, Graph h, GraphJacobian dh, std::string name)
    : n_(n), m_(m), h_(std::move(h)), dh_(std::move(dh)), name_(std::move(name)) {
  if (n < 1 || n > kMaxComplexDim) throw Error("ambient dimension out of range");
  if (m < 1 || m > n) throw Error("codimension must satisfy 1 <= m <= n");
  if (!h_) throw Error("submanifold needs a graph function");
}

GenericSubmanifold GenericSubmanifold::from_polynomial(int n, int m, const Polynomial<RVec>& h,
                                                       std::string name) {
  if (h.num_vars() != 2 * n - m) throw Error("graph polynomial must have 2n - m variables");
  if (h.zero().size() != m) throw Error("graph polynomial must be R^m valued");
  std::vector<Polynomial<RVec>> partials;
  for (int k = 0; k < 2 * n - m; ++k) partials.push_back(h.partial(k));
  return GenericSubmanifold(
      n, m, [h](const RVec& xi) { return h(as_span(xi)); },
      [partials, m](const RVec& xi) {
        RMat jac(m, static_cast<Eigen::Index>(partials.size()));
        for (size_t k = 0; k < partials.size(); ++k) jac.col(k) = partials[k](as_span(xi));
        return jac;
      },
      std::move(name));
}

GenericSubmanifold GenericSubmanifold::flat(int n, int m) {
  return GenericSubmanifold(
      n, m, [m](const RVec&) -> RVec { return RVec::Zero(m); },
      [n, m](const RVec&) -> RMat { return RMat::Zero(m, 2 * n - m); }, "flat");
}

RMat GenericSubmanifold::h_jacobian(const RVec& xi) const {
  if (dh_) return dh_(xi);
  const double s = ScalarField::kGradientStep;
  RMat jac(m_, graph_dim());
  RVec xp = xi, xm = xi;
  for (int k = 0; k < graph_dim(); ++k) {
    xp[k] = xi[k] + s;
    xm[k] = xi[k] - s;
    jac.col(k) = (h_(xp) - h_(xm)) / (2.0 * s);
    xp[k] = xm[k] = xi[k];
  }
  return jac;
}

RVec GenericSubmanifold::graph_coordinates(const RVec& z) const {
  RVec xi(graph_dim());
  for (int j = 0; j < m_; ++j) xi[j] = z[2 * j + 1];
  for (int k = 2 * m_; k < 2 * n_; ++k) xi[k - m_] = z[k];
  return xi;
}

RVec GenericSubmanifold::graph_point(const RVec& xi) const {
  RVec z(2 * n_);
  const RVec hv = h_(xi);
  for (int j = 0; j < m_; ++j) {
    z[2 * j] = hv[j];
    z[2 * j + 1] = xi[j];
  }
  for (int k = 2 * m_; k < 2 * n_; ++k) z[k] = xi[k - m_];
  return z;
}

RVec GenericSubmanifold::defining(const RVec& z) const {
  const RVec hv = h_(graph_coordinates(z));
  RVec r(m_);
  for (int j = 0; j < m_; ++j) r[j] = z[2 * j] - hv[j];
  return r;
}

RMat GenericSubmanifold::defining_jacobian(const RVec& z) const {
  const RMat dh = h_jacobian(graph_coordinates(z));
  RMat jac = RMat::Zero(m_, 2 * n_);
  for (int j = 0; j < m_; ++j) {
    jac(j, 2 * j) = 1.0;
    for (int k = 0; k < m_; ++k) jac(j, 2 * k + 1) = -dh(j, k);
    for (int k = 2 * m_; k < 2 * n_; ++k) jac(j, k) = -dh(j, k - m_);
  }
  return jac;
}

ScalarField GenericSubmanifold::component(int j) const {
  if (j < 0 || j >= m_) throw Error("defining function index out of range");
  const GenericSubmanifold self = *this;
  return ScalarField(
      2 * n_, [self, j](const RVec& z) { return self.defining(z)[j]; },
      [self, j](const RVec& z) -> RVec { return self.defining_jacobian(z).row(j).transpose(); });
}

void GenericSubmanifold::check_normalized(double tol) const {
  const RVec xi = RVec::Zero(graph_dim());
  const double h0 = h_(xi).cwiseAbs().maxCoeff();
  const double g0 = max_abs(h_jacobian(xi));
  if (h0 > tol || g0 > tol)
    throw Error("submanifold is not normalized at 0: |h(0)| = " + std::to_string(h0) +
                ", |grad h(0)| = " + std::to_string(g0));
}

GenericSubmanifold GenericSubmanifold::dilate_isotropic(double delta) const {
  if (!(delta > 0)) throw Error("dilation parameter must be positive");
  if (delta == 1.0) return *this;
  const GenericSubmanifold e = *this;
  GraphJacobian dh;
  if (dh_) dh = [e, delta](const RVec& xi) { return e.h_jacobian(delta * xi); };
  return GenericSubmanifold(
      n_, m_, [e, delta](const RVec& xi) -> RVec { return e.h(delta * xi) / delta; }, dh,
      name_ + "/iso");
}

GenericSubmanifold GenericSubmanifold::dilate_anisotropic(double delta) const {
  if (!(delta > 0)) throw Error("dilation parameter must be positive");
  if (delta == 1.0) return *this;
  const GenericSubmanifold e = *this;
  const int m = m_;
  const double sq = std::sqrt(delta);
  auto pre = [m, delta, sq](const RVec& xi) {
    RVec out = xi;
    for (Eigen::Index k = 0; k < xi.size(); ++k) out[k] *= k < m ? delta : sq;
    return out;
  };
  GraphJacobian dh;
  if (dh_)
    dh = [e, pre, m, sq](const RVec& xi) {
      RMat jac = e.h_jacobian(pre(xi));
      for (Eigen::Index k = m; k < jac.cols(); ++k) jac.col(k) /= sq;
      return jac;
    };
  return GenericSubmanifold(
      n_, m_, [e, pre, delta](const RVec& xi) -> RVec { return e.h(pre(xi)) / delta; }, dh,
      name_ + "/aniso");
}

std::vector<RVec> null_space(const RMat& a, double rel_tol) {
  const Eigen::MatrixXd ad = a;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(ad, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s[k] > rel_tol * std::max(smax, 1e-300)) ++rank;
  std::vector<RVec> out;
  for (Eigen::Index k = rank; k < ad.cols(); ++k) out.push_back(svd.matrixV().col(k));
  return out;
}

TangentFrame holomorphic_tangent(const GenericSubmanifold& e, const AlmostComplexStructure& j,
                                 const RVec& p, double on_manifold_tol) {
  const int n = e.ambient_dim(), m = e.codim();
  if (j.dim_complex() != n) throw Error("structure and submanifold dimensions differ");
  const double off = e.defining(p).cwiseAbs().maxCoeff();
  if (off > on_manifold_tol)
    throw Error("point is off the manifold: |r(p)| = " + std::to_string(off));
  const RMat dr = e.defining_jacobian(p);
  const RMat jp = j(p);
  RMat a(2 * m, 2 * n);
  a.topRows(m) = dr;
  a.bottomRows(m) = dr * jp;
  const auto ker = null_space(a);
  if (static_cast<int>(ker.size()) != 2 * (n - m))
    throw Error("holomorphic tangent space has real dimension " + std::to_string(ker.size()) +
                ", expected " + std::to_string(2 * (n - m)) + " (non-generating point)");
  TangentFrame frame;
  frame.base = p;
  frame.holomorphic_real = ker;
  // complex basis: Gram–Schmidt over J(p)-pairs {v, Jv}
  std::vector<RVec> span;
  auto project_out = [&span](RVec v) {
    for (const auto& b : span) v -= b.dot(v) * b;
    return v;
  };
  for (const auto& cand : ker) {
    if (static_cast<int>(frame.holomorphic.size()) == n - m) break;
    RVec v = project_out(cand);
    if (v.norm() < 1e-8) continue;
    v.normalize();
    frame.holomorphic.push_back(to_complex(v));
    span.push_back(v);
    RVec jv = project_out(RVec(jp * v));
    if (jv.norm() > 1e-8) span.push_back(jv.normalized());
  }
  frame.tangent = null_space(dr);
  return frame;
}

ScalarField foliation_leaf(const ScalarField& r, double eps, double n_param) {
  if (!(n_param > 0)) throw Error("foliation parameter N must be positive");
  if (eps == 0.0) return r;
  return (r + ScalarField::squared_norm(r.dim()).scaled(eps)).shifted(-eps / n_param);
}

double leaf_parameter(const ScalarField& r, const RVec& z, const FoliationConfig& cfg) {
  const double radius = cfg.radius_factor / std::sqrt(cfg.n_param);
  const double z2 = z.squaredNorm();
  if (std::sqrt(z2) >= radius || z2 >= 1.0 / cfg.n_param)
    throw Error("leaf parameter undefined: |Z| = " + std::to_string(std::sqrt(z2)) +
                " outside the ball of radius " + std::to_string(radius));
  return r(z) / (1.0 / cfg.n_param - z2);
}

double QuadricModel::form(int j, const CVec& w) const {
  return (w.adjoint() * hermitian.at(j) * w)(0, 0).real();
}

bool QuadricModel::normalized(double tol) const {
  const int nw = n - m;
  if (nw < 1 || static_cast<int>(hermitian.size()) != m) return false;
  const int last = nw - 1;
  for (int j = 0; j + 1 < m; ++j)
    if (std::abs(hermitian[j](last, last)) > tol) return false;
  const CMat& hm = hermitian[m - 1];
  if (std::abs(hm(last, last) + 1.0) > tol) return false;
  for (int s = 0; s < last; ++s)
    if (std::abs(hm(last, s)) > tol || std::abs(hm(s, last)) > tol) return false;
  return true;
}

void QuadricModel::require_normalized(double tol) const {
  if (!normalized(tol))
    throw Error("quadric normalization flags unset: need H_j[N,N] = 0 (j < m), H_m[N,N] = -1, "
                "H_m[N,s] = 0 for s != N");
}

QuadricModel quadric_from_submanifold(const GenericSubmanifold& e, double tol) {
  const int n = e.ambient_dim(), m = e.codim(), nw = n - m;
  if (nw < 1) throw Error("quadric model needs CR dimension >= 1");
  const RVec xi0 = RVec::Zero(e.graph_dim());
  const double s = 1e-3;
  // w-Hessian of each h_j by Richardson-extrapolated differences of the Jacobian
  auto diff = [&](int a, double step) {
    RVec xp = xi0, xm = xi0;
    xp[m + a] = step;
    xm[m + a] = -step;
    return RMat((e.h_jacobian(xp) - e.h_jacobian(xm)) / (2.0 * step));
  };
  std::vector<RMat> hess(m, RMat::Zero(2 * nw, 2 * nw));
  for (int a = 0; a < 2 * nw; ++a) {
    const RMat d = (4.0 * diff(a, 0.5 * s) - diff(a, s)) / 3.0;
    for (int j = 0; j < m; ++j)
      for (int b = 0; b < 2 * nw; ++b) hess[j](b, a) = d(j, m + b);
  }
  const RMat jw = standard_structure_matrix(nw);
  QuadricModel q;
  q.n = n;
  q.m = m;
  for (int j = 0; j < m; ++j) {
    const RMat hs = 0.5 * (hess[j] + hess[j].transpose());
    const RMat herm = 0.5 * (hs + jw.transpose() * hs * jw);
    const double bad = max_abs(hs - herm);
    if (bad > tol * std::max(1.0, max_abs(hs)))
      throw Error("h has a complex quadratic part in w (size " + std::to_string(bad) +
                  "); remove it by a holomorphic change of z first");
    CMat g(nw, nw);
    for (int p = 0; p < nw; ++p)
      for (int r = 0; r < nw; ++r) g(p, r) = 0.5 * cplx(herm(2 * p, 2 * r), herm(2 * p + 1, 2 * r));
    q.hermitian.push_back(-2.0 * g);
  }
  return q;
}

std::pair<QuadricModel, Eigen::MatrixXd> normalize_quadric(const QuadricModel& q) {
  const int m = q.m, last = q.n - q.m - 1;
  if (last < 0) throw Error("quadric model needs CR dimension >= 1");
  int pivot = -1;
  double best = 0.0;
  for (int j = 0; j < m; ++j) {
    const double d = std::abs(q.hermitian[j](last, last).real());
    if (d > best) {
      best = d;
      pivot = j;
    }
  }
  if (pivot < 0 || best < 1e-12)
    throw Error("no Hermitian form is nonzero on the line (0,...,0,zeta)");
  const double dk = q.hermitian[pivot](last, last).real();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  int row = 0;
  for (int j = 0; j < m; ++j) {
    if (j == pivot) continue;
    a(row, j) = 1.0;
    a(row, pivot) = -q.hermitian[j](last, last).real() / dk;
    ++row;
  }
  a(m - 1, pivot) = -1.0 / dk;
  QuadricModel out;
  out.n = q.n;
  out.m = m;
  for (int j = 0; j < m; ++j) {
    CMat h = CMat::Zero(q.n - m, q.n - m);
    for (int k = 0; k < m; ++k) h += a(j, k) * q.hermitian[k];
    out.hermitian.push_back(h);
  }
  return {out, a};
}

GenericSubmanifold quadric_submanifold(const QuadricModel& q) {
  const int n = q.n, m = q.m, nw = n - m;
  std::vector<RMat> real_forms;
  for (const auto& h : q.hermitian) real_forms.push_back(realify_linear(h));
  return GenericSubmanifold(
      n, m,
      [real_forms, m, nw](const RVec& xi) -> RVec {
        const RVec x = xi.tail(2 * nw);
        RVec out(m);
        for (int j = 0; j < m; ++j) out[j] = -0.5 * x.dot(real_forms[j] * x);
        return out;
      },
      [real_forms, m, nw](const RVec& xi) -> RMat {
        const RVec x = xi.tail(2 * nw);
        RMat jac = RMat::Zero(m, m + 2 * nw);
        for (int j = 0; j < m; ++j) {
          const RMat sym = 0.5 * (real_forms[j] + real_forms[j].transpose());
          jac.block(j, m, 1, 2 * nw) = -(sym * x).transpose();
        }
        return jac;
      },
      "quadric");
}

}  // namespace bishopdisc
