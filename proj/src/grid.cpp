#include "bishopdisc/grid.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace bishopdisc {

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n, double a, double b) {
  if (n < 1) throw Error("Gauss-Legendre rule needs at least one node");
  // P_n(t) and P_{n-1}(t) by the three-term recurrence
  auto legendre = [n](double t) {
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, p0};
  };
  Eigen::VectorXd x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [pn, pm] = legendre(t);
      const double step = pn / (n * (t * pn - pm) / (t * t - 1.0));
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const auto [pn, pm] = legendre(t);
    const double dp = n * (t * pn - pm) / (t * t - 1.0);
    x[n - 1 - i] = 0.5 * (b - a) * t + 0.5 * (b + a);
    w[n - 1 - i] = (b - a) / ((1.0 - t * t) * dp * dp);
  }
  return {x, w};
}

DiscGrid::DiscGrid(int n_theta, int n_r) : n_theta_(n_theta), n_r_(n_r) {
  if (n_theta < 8 || (n_theta & (n_theta - 1)) != 0)
    throw Error("N_theta must be a power of two >= 8, got " + std::to_string(n_theta));
  if (n_r < 4) throw Error("N_r must be at least 4, got " + std::to_string(n_r));
  auto [x, w] = gauss_legendre(n_r, 0.0, 1.0);
  const int nr = n_rings();
  radii_.resize(nr);
  area_weights_.resize(nr);
  radii_.head(n_r) = x;
  radii_[n_r] = 1.0;
  for (int i = 0; i < n_r; ++i) area_weights_[i] = w[i] * x[i] * 2.0 * std::numbers::pi / n_theta;
  area_weights_[n_r] = 0.0;

  // barycentric weights, scaled by the capacity of [0,1]
  bary_.resize(nr);
  for (int j = 0; j < nr; ++j) {
    double p = 1.0;
    for (int k = 0; k < nr; ++k)
      if (k != j) p *= 4.0 * (radii_[j] - radii_[k]);
    bary_[j] = 1.0 / p;
  }
  diff_ = Eigen::MatrixXd::Zero(nr, nr);
  for (int i = 0; i < nr; ++i) {
    double diag = 0.0;
    for (int j = 0; j < nr; ++j) {
      if (i == j) continue;
      diff_(i, j) = (bary_[j] / bary_[i]) / (radii_[i] - radii_[j]);
      diag -= diff_(i, j);
    }
    diff_(i, i) = diag;
  }
  build_cauchy_green();
}

std::shared_ptr<const DiscGrid> DiscGrid::get(int n_theta, int n_r) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const DiscGrid>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n_theta, n_r}];
  if (!slot) slot = std::make_shared<const DiscGrid>(n_theta, n_r);
  return slot;
}

double DiscGrid::theta(int j) const { return 2.0 * std::numbers::pi * j / n_theta_; }

cplx DiscGrid::node(int ring, int j) const { return std::polar(radii_[ring], theta(j)); }

Eigen::RowVectorXd DiscGrid::interpolation_row(double r) const {
  const int nr = n_rings();
  Eigen::RowVectorXd row(nr);
  for (int j = 0; j < nr; ++j)
    if (r == radii_[j]) {
      row.setZero();
      row[j] = 1.0;
      return row;
    }
  double denom = 0.0;
  for (int j = 0; j < nr; ++j) {
    row[j] = bary_[j] / (r - radii_[j]);
    denom += row[j];
  }
  return row / denom;
}

Eigen::RowVectorXd DiscGrid::derivative_row(double r, int order) const {
  Eigen::RowVectorXd row = interpolation_row(r);
  for (int k = 0; k < order; ++k) row = row * diff_;
  return row;
}

void DiscGrid::build_cauchy_green() {
  const int nr = n_rings();
  cg_.assign(n_theta_, Eigen::MatrixXd::Zero(nr, nr));
  const int kmax = n_theta_ / 2;

  // inner integrals (k <= 0): 2ρ ∫_0^1 ℓ_j(ρσ) σ^{1-k} dσ, polynomial integrand
  const int q_inner = (nr + 2 + kmax) / 2 + 2;
  const auto [sig, sw] = gauss_legendre(q_inner, 0.0, 1.0);
  // outer integrals (k >= 1): -2 ∫_ρ^1 ℓ_j(s) (ρ/s)^{k-1} ds on dyadic pieces
  const auto [ref, refw] = gauss_legendre(32, 0.0, 1.0);

  for (int i = 0; i < nr; ++i) {
    const double rho = radii_[i];
    Eigen::MatrixXd basis(q_inner, nr);
    for (int l = 0; l < q_inner; ++l) basis.row(l) = interpolation_row(rho * sig[l]);
    for (int k = -kmax + 1; k <= 0; ++k) {
      Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(nr);
      for (int l = 0; l < q_inner; ++l) acc += sw[l] * std::pow(sig[l], 1 - k) * basis.row(l);
      cg_[column(k)].row(i) = 2.0 * rho * acc;
    }
    if (rho >= 1.0) continue;
    std::vector<double> pts, wts;
    double a = rho;
    while (a < 1.0) {
      const double b = std::min(2.0 * a, 1.0);
      for (int l = 0; l < ref.size(); ++l) {
        pts.push_back(a + (b - a) * ref[l]);
        wts.push_back((b - a) * refw[l]);
      }
      a = b;
    }
    Eigen::MatrixXd ob(pts.size(), nr);
    for (size_t l = 0; l < pts.size(); ++l) ob.row(l) = interpolation_row(pts[l]);
    for (int k = 1; k < kmax; ++k) {
      Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(nr);
      for (size_t l = 0; l < pts.size(); ++l) acc += wts[l] * std::pow(rho / pts[l], k - 1) * ob.row(l);
      cg_[column(k)].row(i) = -2.0 * acc;
    }
  }
}

}  // namespace bishopdisc
