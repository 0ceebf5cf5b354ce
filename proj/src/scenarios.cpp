#include "bishopdisc/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "bishopdisc/bishop.hpp"
#include "bishopdisc/families.hpp"
#include "bishopdisc/levi.hpp"
#include "bishopdisc/log.hpp"
#include "bishopdisc/parallel.hpp"

namespace bishopdisc {

ScenarioConfig ScenarioConfig::from_json(const json& j, const std::filesystem::path& base_dir) {
  ScenarioConfig c;
  c.raw = j;
  c.base_dir = base_dir;
  try {
    c.id = j.at("scenario").get<std::string>();
    c.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("grid")) {
      c.n_theta = j.at("grid").at(0).get<int>();
      c.n_r = j.at("grid").at(1).get<int>();
    }
    c.jobs = j.value("jobs", 1);
    if (j.contains("tol_boundary")) c.tol_boundary = j.at("tol_boundary").get<double>();
    if (j.contains("tol_interior")) c.tol_interior = j.at("tol_interior").get<double>();
  } catch (const json::exception& e) {
    throw Error(std::string("malformed scenario: ") + e.what());
  }
  return c;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
  return from_json(read_json_file(path), path.parent_path());
}

json ScenarioConfig::descriptor(const std::string& key) const {
  if (!raw.contains(key)) throw Error("scenario is missing '" + key + "'");
  const json& d = raw.at(key);
  if (d.is_string()) return read_json_file(base_dir / d.get<std::string>());
  return d;
}

double ScenarioConfig::number(const std::string& key, double fallback) const {
  return raw.contains(key) ? raw.at(key).get<double>() : fallback;
}

json ScenarioConfig::echo() const {
  json e = raw;
  e.erase("jobs");
  e["seed"] = seed;
  e["grid"] = {n_theta, n_r};
  if (tol_boundary) e["tol_boundary"] = *tol_boundary;
  if (tol_interior) e["tol_interior"] = *tol_interior;
  return e;
}

namespace {

using Clock = std::chrono::steady_clock;

std::vector<double> doubles(const json& raw, const std::string& key, std::vector<double> fallback) {
  return raw.contains(key) ? raw.at(key).get<std::vector<double>>() : fallback;
}

std::vector<double> linspace(double a, double b, int k) {
  std::vector<double> v;
  for (int i = 0; i < k; ++i) v.push_back(k > 1 ? a + (b - a) * i / (k - 1) : a);
  return v;
}

json complex_json(const CVec& z) {
  json out = json::array();
  for (Eigen::Index k = 0; k < z.size(); ++k) out.push_back({z[k].real(), z[k].imag()});
  return out;
}

BishopConfig bishop_config(const ScenarioConfig& cfg) {
  BishopConfig b;
  b.tol = cfg.tol_boundary.value_or(1e-10);
  b.tol_interior = cfg.tol_interior.value_or(1e-6);
  b.max_outer = cfg.raw.value("max_outer", b.max_outer);
  return b;
}

double interior_excursion(const Disc& f, const GenericSubmanifold& e) {
  const auto& g = f.grid();
  double s = 0.0;
  for (int i = 0; i < g->n_r(); ++i)
    for (int k = 0; k < g->n_theta(); ++k)
      s = std::max(s, e.defining(to_real(f.point(i, k))).cwiseAbs().maxCoeff());
  return s;
}

/// max |L| and min L over the J-complex tangent directions at p, per component.
std::pair<double, double> levi_extremes(const GenericSubmanifold& e, const AlmostComplexStructure& j,
                                        const RVec& p, std::uint64_t seed) {
  const auto frame = holomorphic_tangent(e, j, p);
  auto dirs = frame.holomorphic_real;
  for (const auto& v : sample_directions(p.size(), 8, seed, frame.holomorphic_real)) dirs.push_back(v);
  double amax = 0.0, vmin = std::numeric_limits<double>::infinity();
  for (int c = 0; c < e.codim(); ++c) {
    const ScalarField r = e.component(c);
    for (const auto& v : dirs) {
      const double l = levi_form_direct(r, j, p, v.normalized());
      amax = std::max(amax, std::abs(l));
      vmin = std::min(vmin, l);
    }
  }
  return {amax, vmin};
}

QuadricModel limit_quadric(const GenericSubmanifold& e) {
  QuadricModel q = quadric_from_submanifold(e);
  if (!q.normalized(1e-9))
    throw Error("the quadric part of the manifold is not in normal form (H_j[N,N] = 0 for j < m, "
                "H_m[N,N] = -1, H_m[N,s] = 0); apply normalize_quadric to the defining functions first");
  // remove difference-quotient noise below the check above
  const int m = q.m, last = q.n - q.m - 1;
  for (int j = 0; j + 1 < m; ++j) q.hermitian[j](last, last) = 0.0;
  for (int s = 0; s <= last; ++s) {
    q.hermitian[m - 1](last, s) = s == last ? cplx(-1.0) : cplx(0.0);
    q.hermitian[m - 1](s, last) = std::conj(q.hermitian[m - 1](last, s));
  }
  return q;
}

}  // namespace

ScenarioReport run_levi_flat(const ScenarioConfig& cfg, Artifacts*) {
  const auto t0 = Clock::now();
  const auto j = structure_from_json(cfg.descriptor("structure"));
  const auto e = manifold_from_json(cfg.descriptor("manifold"));
  const int n = j.dim_complex(), m = e.codim();
  if (e.ambient_dim() != n) throw Error("structure and manifold dimensions differ");
  const auto& raw = cfg.raw;
  const std::string expect = raw.value("expect", std::string("contained"));
  if (expect != "contained" && expect != "excursion")
    throw Error("levi_flat expect must be 'contained' or 'excursion'");
  const double delta = cfg.number("delta", 0.25);
  const double tol = cfg.number("containment_tol", 1e-4);
  const double flat_tol = cfg.number("levi_flat_tol", 1e-6);

  ScenarioReport rep;
  rep.scenario = "levi_flat";
  rep.seed = cfg.seed;
  rep.config = cfg.echo();

  // Levi form on H^J at sampled points of Γ
  const int samples = raw.value("levi_samples", 20);
  const double lrad = cfg.number("levi_radius", 0.2);
  const bool compare = raw.value("compare_standard", false);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uni(-lrad, lrad);
  double flat_max = 0.0, std_min = std::numeric_limits<double>::infinity();
  int pattern = 0;
  json levi_points = json::array();
  for (int s = 0; s < samples; ++s) {
    RVec xi(e.graph_dim());
    for (Eigen::Index k = 0; k < xi.size(); ++k) xi[k] = uni(rng);
    const RVec p = e.graph_point(xi);
    const auto [amax, jmin] = levi_extremes(e, j, p, cfg.seed + 17 * s);
    flat_max = std::max(flat_max, amax);
    json rec = {{"point", std::vector<double>(p.data(), p.data() + p.size())}, {"levi_abs_max", amax}};
    if (compare) {
      const auto [smax, smin] = levi_extremes(e, AlmostComplexStructure::standard(n), p, cfg.seed + 17 * s);
      std_min = std::min(std_min, smin);
      rec["levi_standard_min"] = smin;
      if (amax <= flat_tol && smin > flat_tol) ++pattern;
    }
    levi_points.push_back(rec);
  }
  if (expect == "contained" && flat_max > flat_tol) {
    std::ostringstream os;
    os << "Levi-flatness precondition violated: |L| reaches " << flat_max << " > " << flat_tol
       << " on sampled complex tangent directions";
    throw Error(os.str());
  }

  // disc chart over (Re p, arg v, c)
  const auto& chart = raw.value("chart", json::object());
  const auto p_re = doubles(chart, "p_re", linspace(-0.2, 0.2, 4));
  const auto v_arg = doubles(chart, "v_arg", linspace(0.0, 1.5 * std::numbers::pi, 4));
  const auto c_vals = doubles(chart, "c", linspace(-0.2, 0.2, 4));
  const double v_rad = chart.value("v_radius", 0.4);
  const int bins = chart.value("direction_bins", 4);
  const int np = static_cast<int>(p_re.size()), nv = static_cast<int>(v_arg.size()),
            nc = static_cast<int>(c_vals.size());
  const int count = np * nv * nc;
  const auto grid = DiscGrid::get(cfg.n_theta, cfg.n_r);
  const auto bcfg = bishop_config(cfg);

  std::vector<std::optional<BishopSolution>> sols(count);
  std::vector<std::string> errors(count);
  parallel_for(count, cfg.jobs, [&](int idx) {
    const int ip = idx / (nv * nc), iv = (idx / nc) % nv, ic = idx % nc;
    BishopParams bp;
    for (int k = 0; k < n - m; ++k) {
      Eigen::VectorXcd t = Eigen::VectorXcd::Zero(2);
      if (k == 0) t << p_re[ip], std::polar(v_rad, v_arg[iv]);
      bp.w.emplace_back(t);
    }
    bp.c = RVec::Constant(m, c_vals[ic]);
    bp.delta = delta;
    bp.dilation = Dilation::isotropic;
    bp.cfg = bcfg;
    try {
      sols[idx] = solve_bishop(j, e, bp, grid);
    } catch (const std::exception& ex) {
      errors[idx] = ex.what();
    }
  });

  double cmax = 0.0, bmax = 0.0, imax = 0.0;
  std::vector<bool> hit(bins, false);
  int solved = 0;
  for (int idx = 0; idx < count; ++idx) {
    const int ip = idx / (nv * nc), iv = (idx / nc) % nv, ic = idx % nc;
    json rec = {{"index", idx}, {"p_re", p_re[ip]}, {"v_arg", v_arg[iv]}, {"c", c_vals[ic]}};
    if (!sols[idx]) {
      rep.failures.push_back({{"index", idx}, {"message", errors[idx]}});
      rec["solved"] = false;
      rep.members.push_back(rec);
      continue;
    }
    ++solved;
    const auto& s = *sols[idx];
    const Disc f = pull_back(s.f, delta, Dilation::isotropic, m);
    const double ex = interior_excursion(f, e);
    const auto [dz, dzb] = s.f[m].center_derivatives();
    const double ang = std::arg(dz + dzb);
    const double turn = 2.0 * std::numbers::pi;
    const int bin = static_cast<int>(std::floor(std::fmod(ang + turn, turn) / turn * bins + 1e-9)) % bins;
    hit[bin] = true;
    cmax = std::max(cmax, ex);
    bmax = std::max(bmax, s.boundary_residual);
    imax = std::max(imax, s.interior_residual);
    rec["solved"] = true;
    rec["containment"] = ex;
    rec["boundary_residual"] = s.boundary_residual;
    rec["interior_residual"] = s.interior_residual;
    rec["outer_iterations"] = s.outer_iterations;
    rec["direction_angle"] = ang;
    rec["center"] = complex_json(f.center());
    rep.members.push_back(rec);
  }
  const double coverage = static_cast<double>(std::count(hit.begin(), hit.end(), true)) / bins;

  auto& a = rep.aggregates;
  a["shape"] = {np, nv, nc};
  a["containment_max"] = cmax;
  a["boundary_residual_max"] = bmax;
  a["interior_residual_max"] = imax;
  a["direction_coverage"] = coverage;
  a["levi_flat_max"] = flat_max;
  a["levi_points"] = levi_points;
  if (compare) {
    a["levi_standard_min"] = std_min;
    a["sign_pattern_points"] = pattern;
  }

  rep.verdicts.push_back(Verdict::equals("members_solved", solved, count));
  if (expect == "contained") {
    rep.verdicts.push_back(Verdict::at_most("levi_flatness", flat_max, flat_tol));
    rep.verdicts.push_back(Verdict::at_most("interior_containment", cmax, tol));
    rep.verdicts.push_back(Verdict::at_least("tangent_direction_coverage", coverage,
                                             chart.value("coverage_min", 1.0)));
  } else {
    rep.verdicts.push_back(Verdict::exceeds("negative_control_excursion", cmax, tol));
  }
  if (compare) rep.verdicts.push_back(Verdict::equals("cautionary_sign_pattern", pattern, samples));
  rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  log_info("levi_flat: ", solved, "/", count, " discs, containment ", cmax);
  return rep;
}

namespace {

FamilyParams family_from_json(const json& j, int m, int nw, double t_default) {
  FamilyParams p;
  p.t = j.value("t", t_default);
  p.lambda = j.value("lambda", 1.0);
  p.y = RVec::Zero(m);
  p.c = CVec::Zero(nw);
  if (j.contains("y")) {
    const auto y = j.at("y").get<std::vector<double>>();
    if (static_cast<int>(y.size()) != m) throw Error("family y must have m entries");
    for (int k = 0; k < m; ++k) p.y[k] = y[k];
  }
  if (j.contains("c")) {
    const auto& c = j.at("c");
    if (static_cast<int>(c.size()) != nw) throw Error("family c must have n - m complex entries");
    for (int k = 0; k < nw; ++k) p.c[k] = cplx(c.at(k).at(0).get<double>(), c.at(k).at(1).get<double>());
  }
  p.validate();
  return p;
}

json family_json(const FamilyParams& p) {
  return {{"t", p.t},
          {"lambda", p.lambda},
          {"y", std::vector<double>(p.y.data(), p.y.data() + p.y.size())},
          {"c", complex_json(p.c)}};
}

/// Bishop parameters reproducing the j0 family member at J₀ (w, Im z(0), seed).
BishopParams j0_member(const LinearPart& lp, const QuadricModel& q, const FamilyParams& p, double delta,
                       const BishopConfig& bcfg) {
  const int n = lp.n, m = lp.m, nw = n - m;
  const double s = p.t / (1.0 + p.lambda);
  BishopParams bp;
  for (int k = 0; k < nw; ++k) {
    Eigen::VectorXcd t = Eigen::VectorXcd::Zero(2);
    t[0] = p.c[k];
    if (k == nw - 1) t << p.c[k] + s * p.lambda, s;
    bp.w.emplace_back(t);
  }
  const CVec z0 = j0_disc_point(lp, q, p, 0.0), z1 = j0_disc_point(lp, q, p, 1.0),
             zi = j0_disc_point(lp, q, p, cplx(0, 1));
  bp.c = RVec(m);
  std::vector<HolomorphicDisc> seed;
  for (int k = 0; k < m; ++k) {
    bp.c[k] = z0[k].imag();
    Eigen::VectorXcd t(2);
    t << z0[k], 0.5 * ((z1[k] - z0[k]) - cplx(0, 1) * (zi[k] - z0[k]));
    seed.emplace_back(t);
  }
  bp.z_seed = seed;
  bp.delta = delta;
  bp.dilation = Dilation::anisotropic;
  bp.cfg = bcfg;
  return bp;
}

}  // namespace

ScenarioReport run_sweep(const ScenarioConfig& cfg, Artifacts* artifacts) {
  const auto t0 = Clock::now();
  const auto j = structure_from_json(cfg.descriptor("structure"));
  const auto e = manifold_from_json(cfg.descriptor("manifold"));
  const int n = j.dim_complex(), m = e.codim(), nw = n - m;
  if (e.ambient_dim() != n) throw Error("structure and manifold dimensions differ");
  const auto& raw = cfg.raw;
  const auto grid = DiscGrid::get(cfg.n_theta, cfg.n_r);
  const auto bcfg = bishop_config(cfg);
  const double delta = cfg.number("delta", 0.05);
  const double h = cfg.number("fd_step", 1e-3);
  const double res_tol = cfg.number("residual_tol", 1e-6);
  const double t_fam = cfg.number("t", 0.1);

  // Levi non-degeneracy at 0 in some H-direction
  const RVec origin = RVec::Zero(2 * n);
  const double levi_abs = levi_extremes(e, j, origin, cfg.seed).first;
  if (levi_abs <= 1e-6) throw Error("Levi form of the manifold vanishes at 0 on H; no attached family");

  const auto [lp, j0] = linear_part_and_limit(j, m);
  check_limit_pattern(lp);
  const QuadricModel q = limit_quadric(e);
  const auto [jd, ed] = dilate_pair(j, e, delta, Dilation::anisotropic);

  ScenarioReport rep;
  rep.scenario = "sweep";
  rep.seed = cfg.seed;
  rep.config = cfg.echo();
  auto& a = rep.aggregates;
  a["levi_abs_max_at_origin"] = levi_abs;

  // attachment Jacobian at (λ, y, c) = (1, 0, 0) by finite differences of solved discs
  FamilyParams center;
  center.t = t_fam;
  center.lambda = 1.0;
  center.y = RVec::Zero(m);
  center.c = CVec::Zero(nw);
  std::vector<FamilyParams> fd;
  for (double dl : {0.0, -h, -2.0 * h}) {
    FamilyParams p = center;
    p.lambda += dl;
    fd.push_back(p);
  }
  for (int k = 0; k < m; ++k)
    for (double sgn : {1.0, -1.0}) {
      FamilyParams p = center;
      p.y[k] = sgn * h;
      fd.push_back(p);
    }
  for (int k = 0; k < nw; ++k)
    for (cplx d : {cplx(h, 0), cplx(-h, 0), cplx(0, h), cplx(0, -h)}) {
      FamilyParams p = center;
      p.c[k] = d;
      fd.push_back(p);
    }
  const int nfd = static_cast<int>(fd.size());
  std::vector<std::optional<BishopSolution>> fs(nfd);
  std::vector<std::string> ferr(nfd);
  parallel_for(nfd, cfg.jobs, [&](int i) {
    try {
      fs[i] = solve_bishop(j, e, j0_member(lp, q, fd[i], delta, bcfg), grid);
    } catch (const std::exception& ex) {
      ferr[i] = ex.what();
    }
  });
  for (int i = 0; i < nfd; ++i)
    if (!fs[i]) throw Error("sweep: finite-difference member " + std::to_string(i) + " failed: " + ferr[i]);

  double bres = 0.0, ires = 0.0, on_manifold = 0.0;
  std::vector<RVec> attach(nfd);
  for (int i = 0; i < nfd; ++i) {
    bres = std::max(bres, fs[i]->boundary_residual);
    ires = std::max(ires, fs[i]->interior_residual);
    attach[i] = to_real(fs[i]->f.eval(cplx(-fd[i].lambda, 0.0)));
    if (fd[i].lambda == 1.0) on_manifold = std::max(on_manifold, ed.defining(attach[i]).cwiseAbs().maxCoeff());
  }
  const int cols = 1 + m + 2 * nw;
  Eigen::MatrixXd jac(2 * n, cols);
  jac.col(0) = (3.0 * attach[0] - 4.0 * attach[1] + attach[2]) / (2.0 * h);
  for (int k = 0; k < m + 2 * nw; ++k) jac.col(1 + k) = (attach[3 + 2 * k] - attach[4 + 2 * k]) / (2.0 * h);
  const RankInfo full = numerical_rank(jac);
  const RankInfo amap = numerical_rank(jac.rightCols(cols - 1));

  // transverse direction vs ν
  const RMat dr = ed.defining_jacobian(attach[0]);
  const Eigen::MatrixXd qn = Eigen::MatrixXd(dr.transpose()).householderQr().householderQ() *
                             Eigen::MatrixXd::Identity(2 * n, m);
  const Eigen::VectorXd normal = qn * (qn.transpose() * jac.col(0));
  const double nu_alignment = normal.norm() > 0 ? std::abs(normal[2 * (m - 1)]) / normal.norm() : 0.0;

  // fill of a graph-coordinate box around the central attachment point
  const double box = cfg.number("box_radius", 0.2), cover_r = cfg.number("coverage_radius", 0.1);
  Eigen::MatrixXd gx(2 * n - m, 2 * n - m);
  for (int k = 0; k < m + 2 * nw; ++k)
    gx.col(k) = (ed.graph_coordinates(attach[3 + 2 * k]) - ed.graph_coordinates(attach[4 + 2 * k])) / (2.0 * h);
  const auto lu = gx.fullPivLu();
  const int dimx = 2 * n - m;
  int covered = 0, total = 0;
  std::vector<int> idx(dimx, 0);
  while (true) {
    Eigen::VectorXd dx(dimx);
    for (int k = 0; k < dimx; ++k) dx[k] = cover_r * (idx[k] - 1);
    const Eigen::VectorXd dp = lu.solve(dx);
    ++total;
    if (lu.isInvertible() && dp.cwiseAbs().maxCoeff() <= box) ++covered;
    int k = 0;
    while (k < dimx && ++idx[k] == 3) idx[k++] = 0;
    if (k == dimx) break;
  }
  const double coverage = static_cast<double>(covered) / total;

  a["n"] = n;
  a["m"] = m;
  a["delta"] = delta;
  a["fd_step"] = h;
  a["boundary_residual_max"] = bres;
  a["interior_residual_max"] = ires;
  a["attachment_on_manifold_max"] = on_manifold;
  a["attachment_jacobian"] = {{"rank", full.rank},
                              {"columns", cols},
                              {"singular_values", full.singular_values},
                              {"min_ratio", full.min_ratio}};
  a["attachment_map"] = {{"rank", amap.rank},
                         {"columns", cols - 1},
                         {"singular_values", amap.singular_values},
                         {"min_ratio", amap.min_ratio}};
  a["nu_alignment"] = nu_alignment;
  a["lambda_direction"] = std::vector<double>(jac.col(0).data(), jac.col(0).data() + 2 * n);
  a["coverage"] = {{"fraction", coverage}, {"graph_box_radius", cover_r}, {"parameter_box_radius", box}};

  // δ → 0 convergence to the j0_disc family
  const FamilyParams fam = family_from_json(raw.value("family", json::object()), m, nw, t_fam);
  const auto deltas = doubles(raw, "deltas", {0.2, 0.1, 0.05, 0.025, 0.0125});
  const J0Disc limit = j0_disc(grid, lp, q, fam);
  const int nd = static_cast<int>(deltas.size());
  std::vector<std::optional<BishopSolution>> ds(nd);
  std::vector<std::string> derr(nd);
  parallel_for(nd, cfg.jobs, [&](int i) {
    try {
      ds[i] = solve_bishop(j, e, j0_member(lp, q, fam, deltas[i], bcfg), grid);
    } catch (const std::exception& ex) {
      derr[i] = ex.what();
    }
  });
  std::vector<double> dx, dy;
  for (int i = 0; i < nd; ++i) {
    json rec = {{"index", i}, {"delta", deltas[i]}};
    if (!ds[i]) {
      rep.failures.push_back({{"index", i}, {"message", derr[i]}});
      rec["solved"] = false;
      rep.members.push_back(rec);
      continue;
    }
    const double dist = ds[i]->f.distance(limit.disc);
    rec["solved"] = true;
    rec["distance_to_limit"] = dist;
    rec["boundary_residual"] = ds[i]->boundary_residual;
    rec["interior_residual"] = ds[i]->interior_residual;
    rec["outer_iterations"] = ds[i]->outer_iterations;
    rep.members.push_back(rec);
    dx.push_back(deltas[i]);
    dy.push_back(dist);
  }
  const LogLogFit fit = fit_loglog(dx, dy);
  const bool exact = !dy.empty() && *std::max_element(dy.begin(), dy.end()) <= 1e-12;
  a["family"] = family_json(fam);
  a["limit_disc_residuals"] = {{"holomorphy", limit.holomorphy_residual}, {"boundary", limit.boundary_residual}};
  a["convergence_fit"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"points", fit.points}};
  a["convergence_exact"] = exact;

  rep.verdicts.push_back(Verdict::at_most("boundary_residual_at_delta", bres, res_tol));
  rep.verdicts.push_back(Verdict::at_most("interior_residual_at_delta", ires, res_tol));
  rep.verdicts.push_back(Verdict::at_most("attachment_on_manifold", on_manifold, res_tol));
  rep.verdicts.push_back(Verdict::equals("attachment_jacobian_rank", full.rank, cols));
  rep.verdicts.push_back(Verdict::equals("attachment_map_rank", amap.rank, cols - 1));
  rep.verdicts.push_back(Verdict::equals("convergence_members_solved", static_cast<double>(dx.size()), nd));
  if (!exact) {
    if (fit.points < 3) throw Error("sweep needs at least 3 solved delta values for the rate fit");
    rep.verdicts.push_back(Verdict::at_least("limit_convergence_slope", fit.slope, cfg.number("slope_min", 0.5)));
  }
  if (artifacts) {
    (*artifacts)["limit_disc"] = to_json(limit.disc);
    if (ds[0]) (*artifacts)["largest_delta_disc"] = to_json(ds[0]->f);
  }
  rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  log_info("sweep: ranks ", full.rank, "/", amap.rank, ", slope ", fit.slope);
  return rep;
}

ScenarioReport run_convergence(const ScenarioConfig& cfg, Artifacts*) {
  const auto t0 = Clock::now();
  const auto j = structure_from_json(cfg.descriptor("structure"));
  const int n = j.dim_complex();
  const auto& raw = cfg.raw;
  const int m = raw.value("m", 1);
  if (m < 1 || m >= n) throw Error("convergence needs 1 <= m < n");
  std::vector<double> deltas;
  for (int k = 3; k <= 8; ++k) deltas.push_back(std::ldexp(1.0, -k));
  deltas = doubles(raw, "deltas", deltas);
  if (deltas.size() < 4) throw Error("convergence needs at least 4 delta values");
  const auto pts = unit_ball_grid(n, raw.value("ball_points", 5), cfg.number("ball_radius", 1.0));
  const auto st = AlmostComplexStructure::standard(n);
  const auto [lp, j0] = linear_part_and_limit(j, m);
  const double limit_gap = structure_distance(j0, st, pts, 0);

  ScenarioReport rep;
  rep.scenario = "convergence";
  rep.seed = cfg.seed;
  rep.config = cfg.echo();
  const int nd = static_cast<int>(deltas.size());
  std::vector<double> iso(nd), to_st(nd), to_j0(nd);
  std::vector<std::array<double, 4>> blocks(nd);
  parallel_for(nd, cfg.jobs, [&](int i) {
    iso[i] = structure_distance(dilate_structure_isotropic(j, deltas[i]), st, pts, 0);
    const auto ja = dilate_structure_anisotropic(j, deltas[i], m);
    blocks[i] = structure_block_distance(ja, j0, pts, m);
    to_j0[i] = structure_distance(ja, j0, pts, 0);
    to_st[i] = structure_distance(ja, st, pts, 0);
  });
  static const char* names[] = {"zz", "zw", "wz", "ww"};
  int slowest = -1;
  LogLogFit slow_fit;
  for (int b = 0; b < 4; ++b) {
    std::vector<double> y(nd);
    double mx = 0.0;
    for (int i = 0; i < nd; ++i) mx = std::max(mx, y[i] = blocks[i][b]);
    if (mx <= 1e-14) continue;
    const LogLogFit f = fit_loglog(deltas, y);
    if (slowest < 0 || f.slope < slow_fit.slope) slowest = b, slow_fit = f;
  }
  for (int i = 0; i < nd; ++i) {
    rep.members.push_back({{"index", i},
                           {"delta", deltas[i]},
                           {"isotropic_distance", iso[i]},
                           {"anisotropic_blocks", {blocks[i][0], blocks[i][1], blocks[i][2], blocks[i][3]}},
                           {"anisotropic_slowest_block", slowest >= 0 ? blocks[i][slowest] : 0.0},
                           {"anisotropic_to_limit", to_j0[i]},
                           {"anisotropic_to_standard", to_st[i]}});
  }
  const LogLogFit iso_fit = fit_loglog(deltas, iso);
  const bool exact = *std::max_element(iso.begin(), iso.end()) <= 1e-14 && slowest < 0;
  auto& a = rep.aggregates;
  a["cr_dimension"] = n - m;
  a["limit_to_standard"] = limit_gap;
  a["exact"] = exact;
  a["isotropic_fit"] = {{"slope", iso_fit.slope}, {"intercept", iso_fit.intercept}, {"points", iso_fit.points}};
  a["anisotropic_fit"] = {{"slope", slow_fit.slope}, {"intercept", slow_fit.intercept}, {"points", slow_fit.points}};
  a["slowest_block"] = slowest >= 0 ? names[slowest] : "none";
  if (!exact) {
    const auto iso_w = raw.value("isotropic_window", std::vector<double>{0.85, 1.15});
    const auto an_w = raw.value("anisotropic_window", std::vector<double>{0.35, 0.65});
    rep.verdicts.push_back(Verdict::within("isotropic_slope", iso_fit.slope, iso_w.at(0), iso_w.at(1)));
    if (slowest >= 0)
      rep.verdicts.push_back(Verdict::within("anisotropic_slowest_slope", slow_fit.slope, an_w.at(0), an_w.at(1)));
    if (n - m > 1 && limit_gap > 1e-12)
      rep.verdicts.push_back(Verdict::at_least("anisotropic_to_standard_at_smallest_delta", to_st.back(),
                                               0.5 * limit_gap));
  }
  rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  log_info("convergence: isotropic slope ", iso_fit.slope, ", slowest block slope ", slow_fit.slope);
  return rep;
}

ScenarioReport run_chart(const ScenarioConfig& cfg, Artifacts* artifacts) {
  const auto t0 = Clock::now();
  const auto j = structure_from_json(cfg.descriptor("structure"));
  const auto e = manifold_from_json(cfg.descriptor("manifold"));
  const int n = j.dim_complex(), m = e.codim(), nw = n - m;
  if (e.ambient_dim() != n) throw Error("structure and manifold dimensions differ");
  const auto& raw = cfg.raw;
  const auto grid = DiscGrid::get(cfg.n_theta, cfg.n_r);
  const double delta = cfg.number("delta", 1.0);
  const Dilation dil = parse_dilation(raw.value("dilation", std::string("none")));

  std::vector<Eigen::VectorXcd> w_base(nw, Eigen::VectorXcd::Zero(2));
  if (raw.contains("w_base")) {
    const auto& wb = raw.at("w_base");
    if (static_cast<int>(wb.size()) != nw) throw Error("w_base needs n - m components");
    for (int k = 0; k < nw; ++k) {
      w_base[k] = Eigen::VectorXcd::Zero(wb.at(k).size());
      for (size_t c = 0; c < wb.at(k).size(); ++c)
        w_base[k][c] = cplx(wb.at(k).at(c).at(0).get<double>(), wb.at(k).at(c).at(1).get<double>());
    }
  }
  RVec c_base = RVec::Zero(m);
  if (raw.contains("c_base"))
    for (int k = 0; k < m; ++k) c_base[k] = raw.at("c_base").at(k).get<double>();

  struct Axis {
    std::string target, part;
    int index = 0, coefficient = 0;
    std::vector<double> values;
  };
  std::vector<Axis> axes;
  std::vector<int> shape;
  for (const auto& ax : raw.value("axes", json::array())) {
    Axis a;
    a.target = ax.at("target").get<std::string>();
    a.index = ax.value("index", ax.value("component", 0));
    a.coefficient = ax.value("coefficient", 0);
    a.part = ax.value("part", std::string("re"));
    a.values = ax.at("values").get<std::vector<double>>();
    if (a.target != "c" && a.target != "w") throw Error("chart axis target must be 'c' or 'w'");
    if (a.target == "c" && (a.index < 0 || a.index >= m)) throw Error("chart axis c index out of range");
    if (a.target == "w" && (a.index < 0 || a.index >= nw || a.coefficient < 0))
      throw Error("chart axis w component out of range");
    if (a.values.empty()) throw Error("chart axis has no values");
    shape.push_back(static_cast<int>(a.values.size()));
    axes.push_back(a);
  }
  int count = 1;
  for (int s : shape) count *= s;
  if (axes.empty()) count = 0;

  const auto bcfg = bishop_config(cfg);
  std::vector<BishopParams> members;
  std::vector<RVec> coords;
  for (int i = 0; i < count; ++i) {
    BishopParams bp;
    auto w = w_base;
    RVec c = c_base;
    RVec coord(axes.size());
    int rem = i;
    for (int a = static_cast<int>(axes.size()) - 1; a >= 0; --a) {
      const int pos = rem % shape[a];
      rem /= shape[a];
      const double v = axes[a].values[pos];
      coord[a] = v;
      if (axes[a].target == "c") {
        c[axes[a].index] = v;
      } else {
        auto& t = w[axes[a].index];
        if (t.size() <= axes[a].coefficient) t.conservativeResize(axes[a].coefficient + 1), t.tail(1).setZero();
        t[axes[a].coefficient] = axes[a].part == "im" ? cplx(t[axes[a].coefficient].real(), v)
                                                      : cplx(v, t[axes[a].coefficient].imag());
      }
    }
    for (const auto& t : w) bp.w.emplace_back(t);
    bp.c = c;
    bp.delta = delta;
    bp.dilation = dil;
    bp.cfg = bcfg;
    members.push_back(bp);
    coords.push_back(coord);
  }
  const ChartResult chart = disc_chart(j, e, members, coords, shape, grid, cfg.jobs);

  // closed form for J_st and a Hermitian quadric with affine w
  const std::string compare = raw.value("compare", std::string());
  std::optional<QuadricModel> quad;
  if (compare == "quadric_standard") {
    if (!j.is_standard() || dil != Dilation::none)
      throw Error("compare 'quadric_standard' needs the standard structure and no dilation");
    quad = quadric_from_submanifold(e);
  } else if (!compare.empty()) {
    throw Error("unknown chart comparison '" + compare + "'");
  }

  ScenarioReport rep;
  rep.scenario = "chart";
  rep.seed = cfg.seed;
  rep.config = cfg.echo();
  json exported = json::array();
  double cmp_max = 0.0;
  for (int i = 0; i < count; ++i) {
    json params = {{"coordinates", std::vector<double>(coords[i].data(), coords[i].data() + coords[i].size())},
                   {"c", std::vector<double>(members[i].c.data(), members[i].c.data() + m)}};
    json rec = {{"index", i}, {"coordinates", params["coordinates"]}};
    if (!chart.members[i]) {
      rec["solved"] = false;
      rep.members.push_back(rec);
      continue;
    }
    const auto& s = *chart.members[i];
    rec["solved"] = true;
    rec["boundary_residual"] = s.boundary_residual;
    rec["interior_residual"] = s.interior_residual;
    rec["outer_iterations"] = s.outer_iterations;
    rec["center"] = complex_json(s.f.center());
    if (quad) {
      double dev = 0.0;
      for (int k = 0; k < grid->n_rings(); ++k)
        for (int l = 0; l < grid->n_theta(); ++l) {
          const cplx z = grid->node(k, l);
          CVec al(nw), be(nw);
          for (int r = 0; r < nw; ++r) {
            const auto& t = members[i].w[r].taylor();
            if (t.size() > 2 && t.tail(t.size() - 2).cwiseAbs().maxCoeff() > 0)
              throw Error("compare 'quadric_standard' needs affine w");
            al[r] = t[0];
            be[r] = t.size() > 1 ? t[1] : cplx(0.0);
          }
          for (int jj = 0; jj < m; ++jj) {
            const CMat& hm = quad->hermitian[jj];
            const cplx exact = cplx(0.0, members[i].c[jj]) -
                               0.5 * ((al.adjoint() * hm * al)(0, 0) + (be.adjoint() * hm * be)(0, 0)) -
                               (al.adjoint() * hm * be)(0, 0) * z;
            dev = std::max(dev, std::abs(s.f[jj](k, l) - exact));
          }
        }
      rec["closed_form_deviation"] = dev;
      cmp_max = std::max(cmp_max, dev);
    }
    rep.members.push_back(rec);
    json coeffs = json::array();
    for (const auto& comp : s.f.components) coeffs.push_back(to_json(comp.boundary()));
    json wj = json::array();
    for (const auto& t : members[i].w) wj.push_back(complex_json(CVec(t.taylor())));
    params["w"] = wj;
    exported.push_back({{"index", i},
                        {"params", params},
                        {"boundary_coefficients", coeffs},
                        {"residuals", {{"boundary", s.boundary_residual}, {"interior", s.interior_residual}}}});
  }
  for (const auto& f : chart.failures) rep.failures.push_back({{"index", f.index}, {"message", f.message}});

  auto& a = rep.aggregates;
  a["shape"] = shape;
  a["boundary_residual_max"] = chart.max_boundary_residual;
  a["interior_residual_max"] = chart.max_interior_residual;
  a["max_second_difference"] = chart.max_second_difference;
  a["min_separation_ratio"] = chart.min_separation_ratio;
  if (quad) a["closed_form_deviation_max"] = cmp_max;
  rep.verdicts.push_back(Verdict::equals("members_solved", count - static_cast<double>(chart.failures.size()), count));
  rep.verdicts.push_back(Verdict::at_most("boundary_residual", chart.max_boundary_residual, bcfg.tol));
  rep.verdicts.push_back(Verdict::at_most("interior_residual", chart.max_interior_residual, bcfg.tol_interior));
  if (count > 1)
    rep.verdicts.push_back(Verdict::exceeds("injectivity_separation_ratio", chart.min_separation_ratio, 0.0));
  if (quad)
    rep.verdicts.push_back(Verdict::at_most("closed_form_deviation", cmp_max, cfg.number("compare_tol", 1e-8)));
  if (artifacts) (*artifacts)["chart"] = exported;
  rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  log_info("chart: ", count, " members, ", chart.failures.size(), " failures");
  return rep;
}

ScenarioReport run_scenario(const ScenarioConfig& cfg, Artifacts* artifacts) {
  log_info("running scenario '", cfg.id, "' with seed ", cfg.seed, " on a ", cfg.n_theta, "x", cfg.n_r, " grid");
  if (cfg.id == "levi_flat") return run_levi_flat(cfg, artifacts);
  if (cfg.id == "sweep") return run_sweep(cfg, artifacts);
  if (cfg.id == "convergence") return run_convergence(cfg, artifacts);
  if (cfg.id == "chart") return run_chart(cfg, artifacts);
  throw Error("unknown scenario '" + cfg.id + "' (expected levi_flat, sweep, convergence or chart)");
}

std::vector<std::filesystem::path> export_artifacts(const Artifacts& a, const std::filesystem::path& dir,
                                                    const std::string& stem) {
  std::vector<std::filesystem::path> out;
  for (const auto& [name, j] : a) {
    const auto p = dir / (stem + "_" + name + ".json");
    write_text_file(p, j.dump() + "\n");
    out.push_back(p);
  }
  return out;
}

}  // namespace bishopdisc
