#include "bishopdisc/dbar_solver.hpp"

#include <cmath>
#include <sstream>

#include "bishopdisc/integral_ops.hpp"

namespace bishopdisc {

CMat q_matrix(const RMat& j, double tol) {
  const int d = static_cast<int>(j.rows());
  const RMat jst = standard_structure_matrix(d / 2);
  const RMat sum = jst + j;
  Eigen::PartialPivLU<RMat> lu(sum);
  const double det = std::abs(lu.determinant());
  if (!(det > 1e-12)) throw Error("J_st + J is singular; structure too far from J_st");
  const RMat a = -lu.solve(RMat(jst - j));
  const double anti = max_abs(a * jst + jst * a);
  if (anti > tol * (1.0 + max_abs(a)))
    throw Error("Q endomorphism is not anti-linear (defect " + std::to_string(anti) +
                "); J is not a valid almost complex structure");
  return complexify_antilinear(a);
}

CMat q_matrix(const AlmostComplexStructure& j, const RVec& z, double tol) {
  return q_matrix(j(z), tol);
}

Disc q_conj_product(const Disc& f, const Disc& f_zeta, const AlmostComplexStructure& j,
                    QSample* stats) {
  const int n = f.dim();
  if (n != j.dim_complex()) throw Error("disc and structure dimensions differ");
  const auto& grid = f.grid();
  Disc out = Disc::zeros(grid, n);
  const RMat jst = standard_structure_matrix(n);
  const double radius = j.domain_radius();
  QSample local;
  CVec conj_fz(n);
  for (int i = 0; i < grid->n_rings(); ++i)
    for (int k = 0; k < grid->n_theta(); ++k) {
      const CVec p = f.point(i, k);
      if (p.norm() > radius) {
        std::ostringstream os;
        os << "disc leaves the domain of J (|f| = " << p.norm() << " > " << radius << ")";
        throw Error(os.str());
      }
      if (j.is_standard()) continue;
      const RMat jz = j(to_real(p));
      local.structure_dev = std::max(local.structure_dev, max_abs(jz - jst));
      const CMat q = q_matrix(jz);
      local.q_sup = std::max(local.q_sup, q.norm());
      for (int c = 0; c < n; ++c) conj_fz[c] = std::conj(f_zeta[c](i, k));
      const CVec v = q * conj_fz;
      for (int c = 0; c < n; ++c) out[c].values()(i, k) = v[c];
    }
  if (stats) *stats = local;
  return out;
}

namespace {
Disc apply(const Disc& f, DiscFunction (*op)(const DiscFunction&)) {
  std::vector<DiscFunction> c;
  for (const auto& comp : f.components) c.push_back(op(comp));
  return Disc(std::move(c));
}
}  // namespace

Disc jholo_residual(const Disc& f, const AlmostComplexStructure& j) {
  return apply(f, dbar_numeric) + q_conj_product(f, apply(f, dzeta_numeric), j);
}

double jholo_residual_sup(const Disc& f, const AlmostComplexStructure& j) {
  return jholo_residual(f, j).sup();
}

Disc phi_forward(const Disc& f, const AlmostComplexStructure& j) {
  if (j.is_standard()) return f;
  return f + apply(q_conj_product(f, apply(f, dzeta_numeric), j), cauchy_green);
}

PhiInverseResult phi_inverse(const Disc& g, const AlmostComplexStructure& j,
                             const PhiInverseConfig& cfg, const Disc* warm) {
  PhiInverseResult res;
  res.f = warm ? *warm : g;
  if (j.is_standard()) {
    res.f = g;
    res.iterations = 1;
    res.steps.push_back(warm ? warm->distance(g) : 0.0);
    res.residual = cfg.compute_residual ? jholo_residual_sup(g, j) : -1.0;
    return res;
  }
  int increases = 0;
  for (int it = 0; it < cfg.max_iter; ++it) {
    QSample stats;
    const Disc h = q_conj_product(res.f, apply(res.f, dzeta_numeric), j, &stats);
    res.q_sup = std::max(res.q_sup, stats.q_sup);
    res.structure_dev = std::max(res.structure_dev, stats.structure_dev);
    if (stats.structure_dev > cfg.structure_threshold) {
      std::ostringstream os;
      os << "|J - J_st| = " << stats.structure_dev << " along the disc exceeds the threshold "
         << cfg.structure_threshold << "; use a smaller dilation parameter delta";
      throw ConvergenceError(os.str(), stats.structure_dev, it);
    }
    Disc next = g - apply(h, cauchy_green);
    const double step = next.distance(res.f);
    if (!std::isfinite(step)) throw ConvergenceError("Picard iteration produced non-finite values", step, it);
    if (!res.steps.empty() && res.steps.back() > 0.0) {
      const double ratio = step / res.steps.back();
      res.contraction = std::max(res.contraction, ratio);
      increases = ratio > 1.0 ? increases + 1 : 0;
      if (increases >= 3) {
        std::ostringstream os;
        os << "Picard iteration for Phi^{-1} is not contracting (step " << step
           << "); use a smaller dilation parameter delta";
        throw ConvergenceError(os.str(), step, it + 1);
      }
    }
    res.steps.push_back(step);
    res.f = std::move(next);
    res.iterations = it + 1;
    if (step <= cfg.tol) {
      res.residual = cfg.compute_residual ? jholo_residual_sup(res.f, j) : -1.0;
      return res;
    }
  }
  throw ConvergenceError("Picard iteration for Phi^{-1} exceeded max_iter = " +
                             std::to_string(cfg.max_iter),
                         res.steps.empty() ? 0.0 : res.steps.back(), cfg.max_iter);
}

}  // namespace bishopdisc
