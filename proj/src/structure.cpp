#include "bishopdisc/structure.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace bishopdisc {

namespace {

std::span<const double> as_span(const RVec& x) { return {x.data(), static_cast<size_t>(x.size())}; }

std::vector<RMat> central_difference_jacobian(const AlmostComplexStructure::Field& f, const RVec& x,
                                              double h) {
  std::vector<RMat> out;
  out.reserve(x.size());
  RVec xp = x, xm = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    xp[k] = x[k] + h;
    xm[k] = x[k] - h;
    out.push_back((f(xp) - f(xm)) / (2.0 * h));
    xp[k] = x[k];
    xm[k] = x[k];
  }
  return out;
}

std::string format_point(const RVec& x) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index k = 0; k < x.size(); ++k) os << (k ? ", " : "") << x[k];
  os << ")";
  return os.str();
}

}  // namespace

AlmostComplexStructure::AlmostComplexStructure(int n, Field field, JacobianField jacobian,
                                               double domain_radius, std::string name)
    : n_(n),
      field_(std::move(field)),
      jacobian_(std::move(jacobian)),
      domain_radius_(domain_radius),
      name_(std::move(name)) {
  if (n < 1 || n > kMaxComplexDim)
    throw Error("complex dimension must lie in [1, " + std::to_string(kMaxComplexDim) + "]");
  if (!field_) throw Error("almost complex structure needs an evaluation callback");
}

AlmostComplexStructure AlmostComplexStructure::standard(int n) {
  const RMat jst = standard_structure_matrix(n);
  AlmostComplexStructure j(
      n, [jst](const RVec&) { return jst; },
      [n](const RVec&) { return std::vector<RMat>(2 * n, RMat::Zero(2 * n, 2 * n)); },
      std::numeric_limits<double>::infinity(), "standard");
  j.standard_ = true;
  return j;
}

AlmostComplexStructure AlmostComplexStructure::with_regularity_order(double k) const {
  if (!(k > 0) || std::floor(k) == k) throw Error("regularity order must be a positive non-integer");
  AlmostComplexStructure copy = *this;
  copy.regularity_order_ = k;
  return copy;
}

RMat AlmostComplexStructure::operator()(const RVec& x) const {
  if (x.size() != 2 * n_)
    throw Error("structure evaluated at a point of dimension " + std::to_string(x.size()) +
                ", expected " + std::to_string(2 * n_));
  return field_(x);
}

std::vector<RMat> AlmostComplexStructure::jacobian(const RVec& x) const {
  if (jacobian_) return jacobian_(x);
  return central_difference_jacobian(field_, x, kDerivativeStep);
}

RMat retract_structure(const RMat& j) {
  const Eigen::Index d = j.rows();
  const RMat id = RMat::Identity(d, d);
  const RMat m = -(j * j);
  const RMat defect = m - id;
  const double dev = defect.norm();
  if (dev == 0.0) return j;
  if (dev < 0.9) {
    // Coupled Newton–Schulz: y → M^{1/2}, z → M^{-1/2}.
    RMat y = m, z = id;
    for (int it = 0; it < 60; ++it) {
      const RMat t = 0.5 * (3.0 * id - z * y);
      y = y * t;
      z = t * z;
      if ((t - id).norm() < 1e-15) break;
    }
    return j * z;
  }
  const Eigen::MatrixXd md = m;
  const Eigen::MatrixXd root = md.sqrt();
  if (!root.allFinite()) throw Error("structure retraction failed: -J^2 has no principal square root");
  const RMat inv_root = root.inverse();
  return j * inv_root;
}

AlmostComplexStructure perturbed_structure(int n, std::function<RMat(const RVec&)> perturbation,
                                           std::string name) {
  const RMat jst = standard_structure_matrix(n);
  return AlmostComplexStructure(
      n, [jst, perturbation](const RVec& x) { return retract_structure(jst + perturbation(x)); }, {},
      std::numeric_limits<double>::infinity(), std::move(name));
}

AlmostComplexStructure polynomial_structure(int n, Polynomial<RMat> field, bool add_standard,
                                            bool retract, std::string name) {
  if (field.num_vars() != 2 * n) throw Error("structure polynomial must have 2n variables");
  const RMat base = add_standard ? standard_structure_matrix(n) : RMat::Zero(2 * n, 2 * n);
  auto eval = [base, field](const RVec& x) -> RMat { return base + field(as_span(x)); };
  if (retract) {
    return AlmostComplexStructure(
        n, [eval](const RVec& x) { return retract_structure(eval(x)); }, {},
        std::numeric_limits<double>::infinity(), std::move(name));
  }
  std::vector<Polynomial<RMat>> partials;
  for (int k = 0; k < 2 * n; ++k) partials.push_back(field.partial(k));
  return AlmostComplexStructure(
      n, eval,
      [partials](const RVec& x) {
        std::vector<RMat> out;
        out.reserve(partials.size());
        for (const auto& p : partials) out.push_back(p(as_span(x)));
        return out;
      },
      std::numeric_limits<double>::infinity(), std::move(name));
}

AlmostComplexStructure conjugated_structure(int n, std::function<RMat(const RVec&)> p,
                                            std::string name) {
  const RMat jst = standard_structure_matrix(n);
  return AlmostComplexStructure(
      n,
      [jst, p](const RVec& x) -> RMat {
        const RMat pm = p(x);
        return pm * jst * pm.inverse();
      },
      {}, std::numeric_limits<double>::infinity(), std::move(name));
}

StructureValidation validate_structure(const AlmostComplexStructure& j,
                                       const std::vector<RVec>& sample_points, double tolerance) {
  StructureValidation report;
  report.tolerance = tolerance;
  const int d = j.dim_real();
  const RMat id = RMat::Identity(d, d);
  for (const auto& x : sample_points) {
    RMat jx;
    try {
      jx = j(x);
    } catch (const std::exception& e) {
      report.ok = false;
      report.failure = "evaluation failed at " + format_point(x) + ": " + e.what();
      report.worst_point = x;
      return report;
    }
    if (!jx.allFinite()) {
      report.ok = false;
      report.failure = "non-finite structure value at " + format_point(x);
      report.worst_point = x;
      return report;
    }
    const double dev = max_abs(jx * jx + id);
    if (dev > report.max_deviation || !report.worst_point) {
      report.max_deviation = std::max(report.max_deviation, dev);
      if (dev >= report.max_deviation) report.worst_point = x;
    }
  }
  report.ok = report.max_deviation <= tolerance;
  return report;
}

std::vector<RVec> unit_ball_grid(int n, int per_axis, double radius) {
  const int d = 2 * n;
  std::vector<RVec> pts;
  std::vector<int> idx(d, 0);
  const double step = per_axis > 1 ? 2.0 * radius / (per_axis - 1) : 0.0;
  while (true) {
    RVec x(d);
    for (int k = 0; k < d; ++k) x[k] = per_axis > 1 ? -radius + step * idx[k] : 0.0;
    if (x.norm() <= radius * (1.0 + 1e-12)) pts.push_back(x);
    int k = 0;
    while (k < d && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == d) break;
  }
  for (int k = 0; k < d; ++k)
    for (double s : {-radius, radius}) {
      RVec x = RVec::Zero(d);
      x[k] = s;
      pts.push_back(x);
    }
  return pts;
}

double structure_distance(const AlmostComplexStructure& a, const AlmostComplexStructure& b,
                          const std::vector<RVec>& grid, int derivative_order) {
  if (a.dim_complex() != b.dim_complex()) throw Error("structures of different dimension");
  double d0 = 0.0, d1 = 0.0;
  for (const auto& x : grid) {
    d0 = std::max(d0, max_abs(a(x) - b(x)));
    if (derivative_order >= 1) {
      const auto ja = a.jacobian(x);
      const auto jb = b.jacobian(x);
      for (size_t k = 0; k < ja.size(); ++k) d1 = std::max(d1, max_abs(ja[k] - jb[k]));
    }
  }
  return d0 + d1;
}

std::array<double, 4> structure_block_distance(const AlmostComplexStructure& a,
                                               const AlmostComplexStructure& b,
                                               const std::vector<RVec>& grid, int m) {
  const int d = a.dim_real();
  const int zr = 2 * m, wr = d - 2 * m;
  std::array<double, 4> out{0, 0, 0, 0};
  for (const auto& x : grid) {
    const RMat diff = a(x) - b(x);
    out[0] = std::max(out[0], max_abs(diff.block(0, 0, zr, zr)));
    if (wr > 0) {
      out[1] = std::max(out[1], max_abs(diff.block(0, zr, zr, wr)));
      out[2] = std::max(out[2], max_abs(diff.block(zr, 0, wr, zr)));
      out[3] = std::max(out[3], max_abs(diff.block(zr, zr, wr, wr)));
    }
  }
  return out;
}

AlmostComplexStructure dilate_structure_isotropic(const AlmostComplexStructure& j, double delta) {
  if (!(delta > 0)) throw Error("dilation parameter must be positive");
  if (delta == 1.0) return j;
  AlmostComplexStructure::JacobianField jac;
  if (j.has_analytic_jacobian())
    jac = [j, delta](const RVec& x) {
      auto d = j.jacobian(delta * x);
      for (auto& m : d) m *= delta;
      return d;
    };
  AlmostComplexStructure out(
      j.dim_complex(), [j, delta](const RVec& x) { return j(delta * x); }, jac,
      j.domain_radius() / delta, j.name() + "/iso");
  return j.is_standard() ? AlmostComplexStructure::standard(j.dim_complex()) : out;
}

AlmostComplexStructure dilate_structure_anisotropic(const AlmostComplexStructure& j, double delta,
                                                    int m) {
  if (!(delta > 0)) throw Error("dilation parameter must be positive");
  const int n = j.dim_complex();
  if (m < 1 || m > n) throw Error("anisotropic dilation needs a coordinate split 1 <= m <= n");
  if (delta == 1.0 || j.is_standard()) return j;
  RVec s(2 * n);  // Λ_δ scale factors per real coordinate
  for (int k = 0; k < 2 * n; ++k) s[k] = k < 2 * m ? 1.0 / delta : 1.0 / std::sqrt(delta);
  auto field = [j, s](const RVec& x) -> RMat {
    const RVec pre = x.cwiseQuotient(s);
    RMat v = j(pre);
    for (Eigen::Index a = 0; a < v.rows(); ++a)
      for (Eigen::Index b = 0; b < v.cols(); ++b) v(a, b) *= s[a] / s[b];
    return v;
  };
  AlmostComplexStructure::JacobianField jac;
  if (j.has_analytic_jacobian())
    jac = [j, s](const RVec& x) {
      const RVec pre = x.cwiseQuotient(s);
      auto d = j.jacobian(pre);
      for (size_t k = 0; k < d.size(); ++k) {
        for (Eigen::Index a = 0; a < d[k].rows(); ++a)
          for (Eigen::Index b = 0; b < d[k].cols(); ++b) d[k](a, b) *= s[a] / s[b];
        d[k] /= s[static_cast<Eigen::Index>(k)];
      }
      return d;
    };
  const double shrink = std::min(1.0 / delta, 1.0 / std::sqrt(delta));
  return AlmostComplexStructure(n, field, jac, j.domain_radius() * shrink, j.name() + "/aniso");
}

RMat LinearPart::linear(const RVec& x) const {
  RMat out = RMat::Zero(2 * n, 2 * n);
  for (int k = 0; k < 2 * n; ++k) out += x[k] * slopes[k];
  return out;
}

RMat LinearPart::limit(const RVec& x) const {
  RMat out = RMat::Zero(2 * n, 2 * n);
  for (int k = 0; k < 2 * n; ++k) out += x[k] * limit_slopes[k];
  return out;
}

std::pair<LinearPart, AlmostComplexStructure> linear_part_and_limit(const AlmostComplexStructure& j,
                                                                    int m) {
  const int n = j.dim_complex();
  if (m < 1 || m > n) throw Error("coordinate split must satisfy 1 <= m <= n");
  const RMat jst = standard_structure_matrix(n);
  const RVec origin = RVec::Zero(2 * n);
  const double dev0 = max_abs(j(origin) - jst);
  if (dev0 > 1e-9)
    throw Error("linear part requires J(0) = J_st (deviation " + std::to_string(dev0) + ")");

  LinearPart lp;
  lp.n = n;
  lp.m = m;
  const auto raw = j.jacobian(origin);
  const int zr = 2 * m;
  const int last_w = 2 * n - 2;  // real index of Re w_{n-m}
  for (int k = 0; k < 2 * n; ++k) {
    const RMat slope = antilinear_part(raw[k]);
    lp.slopes.push_back(slope);
    RMat kept = RMat::Zero(2 * n, 2 * n);
    if (k >= zr && m < n) {
      // z-rows × w-columns, evaluated at (0, w)
      kept.block(0, zr, zr, 2 * n - zr) = slope.block(0, zr, zr, 2 * n - zr);
      // the column of w_{n-m} may not depend on w_{n-m}
      if (k >= last_w) kept.block(0, last_w, zr, 2).setZero();
    }
    lp.limit_slopes.push_back(kept);
  }

  const LinearPart frozen = lp;
  AlmostComplexStructure j0(
      n, [jst, frozen](const RVec& x) -> RMat { return jst + frozen.limit(x); },
      [frozen](const RVec&) { return frozen.limit_slopes; },
      std::numeric_limits<double>::infinity(), "limit");
  return {lp, j0};
}

}  // namespace bishopdisc
