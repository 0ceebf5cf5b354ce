#include "bishopdisc/bishop.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bishopdisc/integral_ops.hpp"
#include "bishopdisc/parallel.hpp"

namespace bishopdisc {

Dilation parse_dilation(const std::string& s) {
  if (s == "none") return Dilation::none;
  if (s == "isotropic") return Dilation::isotropic;
  if (s == "anisotropic") return Dilation::anisotropic;
  throw Error("unknown dilation kind '" + s + "'");
}

std::string to_string(Dilation d) {
  switch (d) {
    case Dilation::none: return "none";
    case Dilation::isotropic: return "isotropic";
    case Dilation::anisotropic: return "anisotropic";
  }
  return "none";
}

std::pair<AlmostComplexStructure, GenericSubmanifold> dilate_pair(const AlmostComplexStructure& j,
                                                                  const GenericSubmanifold& e,
                                                                  double delta, Dilation kind) {
  switch (kind) {
    case Dilation::none:
      return {j, e};
    case Dilation::isotropic:
      return {dilate_structure_isotropic(j, delta), e.dilate_isotropic(delta)};
    case Dilation::anisotropic:
      return {dilate_structure_anisotropic(j, delta, e.codim()), e.dilate_anisotropic(delta)};
  }
  return {j, e};
}

std::vector<Eigen::VectorXd> boundary_defect(const Disc& f, const GenericSubmanifold& e) {
  const auto& grid = f.grid();
  const int m = e.codim();
  std::vector<Eigen::VectorXd> d(m, Eigen::VectorXd(grid->n_theta()));
  for (int k = 0; k < grid->n_theta(); ++k) {
    const RVec r = e.defining(to_real(f.point(grid->boundary_ring(), k)));
    for (int j = 0; j < m; ++j) d[j][k] = r[j];
  }
  return d;
}

double boundary_defect_sup(const Disc& f, const GenericSubmanifold& e) {
  double s = 0.0;
  for (const auto& d : boundary_defect(f, e)) s = std::max(s, d.cwiseAbs().maxCoeff());
  return s;
}

std::vector<BoundarySignal> bishop_residual(const Disc& g, const AlmostComplexStructure& j,
                                            const GenericSubmanifold& e, double delta,
                                            Dilation kind, const PhiInverseConfig& cfg) {
  const auto [jd, ed] = dilate_pair(j, e, delta, kind);
  PhiInverseConfig c = cfg;
  c.compute_residual = false;
  const Disc f = phi_inverse(g, jd, c).f;
  std::vector<BoundarySignal> out;
  for (const auto& d : boundary_defect(f, ed)) out.push_back(BoundarySignal::from_real(d));
  return out;
}

namespace {

Eigen::VectorXcd padded(const Eigen::VectorXcd& t, int len) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(len);
  const int k = std::min<int>(len, static_cast<int>(t.size()));
  out.head(k) = t.head(k);
  return out;
}

Disc assemble(const std::vector<Eigen::VectorXcd>& z, const std::vector<DiscFunction>& w,
              const GridPtr& grid) {
  std::vector<DiscFunction> comps;
  for (const auto& t : z) comps.push_back(HolomorphicDisc(t).on_grid(grid));
  for (const auto& c : w) comps.push_back(c);
  return Disc(std::move(comps));
}

}  // namespace

BishopSolution solve_bishop(const AlmostComplexStructure& j, const GenericSubmanifold& e,
                            const BishopParams& params, GridPtr grid) {
  const int n = j.dim_complex(), m = e.codim();
  if (e.ambient_dim() != n) throw Error("structure and submanifold dimensions differ");
  if (static_cast<int>(params.w.size()) != n - m)
    throw Error("Bishop parameters need " + std::to_string(n - m) + " w-components");
  if (params.c.size() != m) throw Error("Bishop parameters need " + std::to_string(m) + " c-values");
  const auto [jd, ed] = dilate_pair(j, e, params.delta, params.dilation);
  const BishopConfig& cfg = params.cfg;
  const int len = grid->n_theta() / 2;

  std::vector<Eigen::VectorXcd> z(m);
  for (int k = 0; k < m; ++k) {
    z[k] = params.z_seed ? padded(params.z_seed->at(k).taylor(), len) : Eigen::VectorXcd::Zero(len);
    z[k][0] = cplx(z[k][0].real(), params.c[k]);
  }
  std::vector<DiscFunction> w;
  for (const auto& wk : params.w) w.push_back(wk.on_grid(grid));

  BishopSolution sol;
  double damping = cfg.damping;
  double best_sup = std::numeric_limits<double>::infinity();
  std::vector<Eigen::VectorXcd> best_z = z;
  std::vector<Eigen::VectorXd> best_d;
  Disc best_f;
  Disc f;
  bool have_f = false;
  double last = 1.0;

  for (int outer = 0; outer < cfg.max_outer; ++outer) {
    const Disc g = assemble(z, w, grid);
    PhiInverseConfig inner = cfg.inner;
    inner.compute_residual = false;
    inner.tol = std::max(cfg.inner.tol, std::min(1e-6, 1e-3 * last));
    const auto pi = phi_inverse(g, jd, inner, have_f ? &f : nullptr);
    f = pi.f;
    have_f = true;
    sol.inner_iterations += pi.iterations;
    sol.contraction = std::max(sol.contraction, pi.contraction);
    const auto d = boundary_defect(f, ed);
    double dsup = 0.0;
    for (const auto& dj : d) dsup = std::max(dsup, dj.cwiseAbs().maxCoeff());
    sol.defect_history.push_back(dsup);
    sol.outer_iterations = outer + 1;
    if (!std::isfinite(dsup)) throw ConvergenceError("Bishop iteration produced non-finite values", dsup, outer);
    if (dsup <= cfg.tol) {
      if (inner.tol <= cfg.inner.tol || jd.is_standard()) {
        sol.f = f;
        sol.g = g;
        sol.boundary_residual = dsup;
        break;
      }
      last = dsup;  // re-solve the same g with the full inner tolerance
      continue;
    }
    last = dsup;
    if (dsup > best_sup) {
      damping *= 0.5;
      if (damping < cfg.min_damping) {
        std::ostringstream os;
        os << "Bishop outer iteration diverges (defect " << dsup
           << "); use a smaller dilation parameter delta";
        throw ConvergenceError(os.str(), dsup, outer + 1);
      }
      f = best_f;
      z = best_z;
      for (int k = 0; k < m; ++k)
        z[k] -= damping * padded(schwarz(BoundarySignal::from_real(best_d[k])).taylor(), len);
      continue;
    }
    best_sup = dsup;
    best_z = z;
    best_d = d;
    best_f = f;
    for (int k = 0; k < m; ++k)
      z[k] -= damping * padded(schwarz(BoundarySignal::from_real(d[k])).taylor(), len);
  }
  if (sol.f.components.empty()) {
    std::ostringstream os;
    os << "Bishop outer iteration did not reach tol " << cfg.tol << " in " << cfg.max_outer
       << " steps (defect " << sol.defect_history.back() << "); use a smaller dilation parameter delta";
    throw ConvergenceError(os.str(), sol.defect_history.back(), cfg.max_outer);
  }
  for (const auto& t : z) sol.z.emplace_back(t);
  sol.interior_residual = jholo_residual_sup(sol.f, jd);
  if (cfg.enforce_interior && sol.interior_residual > cfg.tol_interior) {
    std::ostringstream os;
    os << "Bishop disc J-holomorphy residual " << sol.interior_residual << " exceeds "
       << cfg.tol_interior;
    throw ConvergenceError(os.str(), sol.interior_residual, sol.outer_iterations);
  }
  return sol;
}

Disc pull_back(const Disc& f, double delta, Dilation kind, int m) {
  if (kind == Dilation::none) return f;
  Disc out = f;
  for (int k = 0; k < f.dim(); ++k) {
    const double s = kind == Dilation::isotropic || k < m ? delta : std::sqrt(delta);
    out[k] = f[k] * s;
  }
  return out;
}

ChartResult disc_chart(const AlmostComplexStructure& j, const GenericSubmanifold& e,
                       const std::vector<BishopParams>& members,
                       const std::vector<RVec>& coordinates, const std::vector<int>& shape,
                       GridPtr grid, int jobs) {
  const int count = static_cast<int>(members.size());
  if (static_cast<int>(coordinates.size()) != count)
    throw Error("chart needs one coordinate vector per member");
  int expected = 1;
  for (int s : shape) expected *= s;
  if (!shape.empty() && expected != count) throw Error("chart shape does not match member count");

  ChartResult res;
  res.members.resize(count);
  std::vector<std::string> errors(count);
  parallel_for(count, jobs, [&](int i) {
    try {
      res.members[i] = solve_bishop(j, e, members[i], grid);
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  });
  for (int i = 0; i < count; ++i) {
    if (!errors[i].empty()) res.failures.push_back({i, errors[i]});
    if (!res.members[i]) continue;
    res.max_boundary_residual = std::max(res.max_boundary_residual, res.members[i]->boundary_residual);
    res.max_interior_residual = std::max(res.max_interior_residual, res.members[i]->interior_residual);
  }

  // second differences along each axis (last axis fastest)
  std::vector<int> stride(shape.size(), 1);
  for (int a = static_cast<int>(shape.size()) - 2; a >= 0; --a) stride[a] = stride[a + 1] * shape[a + 1];
  for (size_t a = 0; a < shape.size(); ++a) {
    if (shape[a] < 3) continue;
    for (int i = 0; i < count; ++i) {
      const int pos = (i / stride[a]) % shape[a];
      if (pos == 0 || pos == shape[a] - 1) continue;
      const int lo = i - stride[a], hi = i + stride[a];
      if (!res.members[lo] || !res.members[i] || !res.members[hi]) continue;
      const double h = (coordinates[hi] - coordinates[i]).norm();
      if (h == 0.0) continue;
      const Disc dd = res.members[lo]->f + res.members[hi]->f - res.members[i]->f - res.members[i]->f;
      res.max_second_difference = std::max(res.max_second_difference, dd.sup() / (h * h));
    }
  }
  double ratio = std::numeric_limits<double>::infinity();
  for (int a = 0; a < count; ++a)
    for (int b = a + 1; b < count; ++b) {
      if (!res.members[a] || !res.members[b]) continue;
      const double dp = (coordinates[a] - coordinates[b]).norm();
      if (dp == 0.0) continue;
      ratio = std::min(ratio, res.members[a]->f.distance(res.members[b]->f) / dp);
    }
  res.min_separation_ratio = std::isfinite(ratio) ? ratio : 0.0;
  return res;
}

}  // namespace bishopdisc
