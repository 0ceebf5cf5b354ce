#include "bishopdisc/levi.hpp"

#include <cmath>
#include <random>

#include "bishopdisc/submanifold.hpp"

namespace bishopdisc {

namespace {

// D_ab = ∂_a θ_b - ∂_b θ_a with θ = J*du, θ_b = Σ_c ∂_c u J_cb.
RMat dtheta(const ScalarField& u, const AlmostComplexStructure& j, const RVec& p) {
  const RVec g = u.gradient(p);
  const RMat h = u.hessian(p);
  const RMat jp = j(p);
  RMat dth = h * jp;  // (a, b) = Σ_c H_ac J_cb
  if (!j.is_standard()) {
    const auto dj = j.jacobian(p);
    for (int a = 0; a < static_cast<int>(dj.size()); ++a) dth.row(a) += (g.transpose() * dj[a]);
  }
  return dth - dth.transpose();
}

}  // namespace

double levi_form_direct(const ScalarField& u, const AlmostComplexStructure& j, const RVec& p,
                        const RVec& v) {
  const RMat d = dtheta(u, j, p);
  const RVec jv = j(p) * v;
  return -v.dot(d * jv);
}

RMat levi_matrix(const ScalarField& u, const AlmostComplexStructure& j, const RVec& p) {
  const RMat dj = -dtheta(u, j, p) * j(p);
  return 0.5 * (dj + dj.transpose());
}

LeviDiscResult levi_form_disc(const ScalarField& u, const AlmostComplexStructure& j, const RVec& p,
                              const RVec& v, const LeviDiscConfig& cfg) {
  const int n = j.dim_complex();
  const auto grid = DiscGrid::get(cfg.n_theta, cfg.n_r);
  const CVec pc = to_complex(p);
  const CVec vc = to_complex(RVec(cfg.scale * v));
  CVec a = pc, b = vc;
  LeviDiscResult res;
  Disc f;
  for (int it = 0; it < cfg.max_iter; ++it) {
    std::vector<DiscFunction> comps;
    for (int k = 0; k < n; ++k) {
      const cplx ak = a[k], bk = b[k];
      comps.push_back(DiscFunction::from_function(grid, [ak, bk](cplx z) { return ak + bk * z; }));
    }
    const Disc g(std::move(comps));
    f = phi_inverse(g, j, cfg.phi, it ? &f : nullptr).f;
    CVec c0(n), fx(n);
    for (int k = 0; k < n; ++k) {
      c0[k] = f[k].center();
      const auto [dz, dzb] = f[k].center_derivatives();
      fx[k] = dz + dzb;
    }
    res.center_error = (c0 - pc).cwiseAbs().maxCoeff();
    res.direction_error = (fx - vc).cwiseAbs().maxCoeff();
    res.iterations = it + 1;
    if (res.center_error <= cfg.tol && res.direction_error <= cfg.tol) break;
    a += pc - c0;
    b += vc - fx;
  }
  if (res.center_error > 1e3 * cfg.tol || res.direction_error > 1e3 * cfg.tol)
    throw ConvergenceError("could not fit a J-holomorphic disc through p in direction v",
                           std::max(res.center_error, res.direction_error), res.iterations);
  DiscFunction uf(grid);
  for (int i = 0; i < grid->n_rings(); ++i)
    for (int k = 0; k < grid->n_theta(); ++k) uf.values()(i, k) = u(to_real(f.point(i, k)));
  res.value = uf.center_laplacian().real() / (cfg.scale * cfg.scale);
  res.disc = std::move(f);
  return res;
}

double levi_form(const ScalarField& u, const AlmostComplexStructure& j, const RVec& p, const RVec& v,
                 LeviMethod method, const LeviDiscConfig& cfg) {
  return method == LeviMethod::direct ? levi_form_direct(u, j, p, v)
                                      : levi_form_disc(u, j, p, v, cfg).value;
}

std::vector<RVec> levi_null_tangent(const ScalarField& r, const AlmostComplexStructure& j,
                                    const RVec& p) {
  const RVec g = r.gradient(p);
  RMat a(2, g.size());
  a.row(0) = g.transpose();
  a.row(1) = g.transpose() * j(p);
  return null_space(a);
}

std::vector<RVec> sample_directions(int dim, int count, std::uint64_t seed,
                                    const std::vector<RVec>& basis) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<RVec> out;
  const int k = basis.empty() ? dim : static_cast<int>(basis.size());
  while (static_cast<int>(out.size()) < count) {
    RVec coeff(k);
    for (int i = 0; i < k; ++i) coeff[i] = normal(rng);
    RVec v = RVec::Zero(dim);
    if (basis.empty())
      v = coeff;
    else
      for (int i = 0; i < k; ++i) v += coeff[i] * basis[i];
    if (v.norm() < 1e-12) continue;
    out.push_back(v.normalized());
  }
  return out;
}

StrictifyResult strictify_defining(const ScalarField& r, const AlmostComplexStructure& j,
                                   const RVec& p, const StrictifyConfig& cfg) {
  const int n = j.dim_complex();
  const int count = 64 * (2 * n - 1);
  const auto h = levi_null_tangent(r, j, p);
  if (h.empty()) throw Error("holomorphic tangent space at p is trivial");
  StrictifyResult res;
  const RMat s0 = levi_matrix(r, j, p);
  res.tangent_min = std::numeric_limits<double>::infinity();
  for (const auto& v : sample_directions(2 * n, count, cfg.seed, h))
    res.tangent_min = std::min(res.tangent_min, v.dot(s0 * v));
  if (!(res.tangent_min > cfg.margin))
    throw Error("not strictly pseudoconvex: Levi form on H_p has sampled minimum " +
                std::to_string(res.tangent_min));
  const auto dirs = sample_directions(2 * n, count, cfg.seed + 1);
  for (double c = 1.0; c <= cfg.cap; c *= 2.0) {
    ++res.candidates;
    const ScalarField rc = r.plus_square(c);
    const RMat s = levi_matrix(rc, j, p);
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& v : dirs) worst = std::min(worst, v.dot(s * v));
    if (worst >= cfg.margin) {
      res.c = c;
      res.field = rc;
      res.margin = worst;
      return res;
    }
  }
  throw Error("not strictly pseudoconvex: no C <= cap makes r + C r^2 plurisubharmonic");
}

}  // namespace bishopdisc
