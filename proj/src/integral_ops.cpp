#include "bishopdisc/integral_ops.hpp"

#include <cmath>
#include <numbers>

namespace bishopdisc {

namespace {

// out mode k ± 1 = ½ (C_k' ∓ (k/r) C_k)
DiscFunction radial_derivative_op(const DiscFunction& f, int shift) {
  const auto& grid = f.grid();
  const Eigen::MatrixXcd c = f.modes();
  const Eigen::MatrixXcd cp = grid->radial_derivative().cast<cplx>() * c;
  const Eigen::VectorXd& r = grid->radii();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(c.rows(), c.cols());
  for (int col = 0; col < grid->n_theta(); ++col) {
    const int k = grid->mode(col);
    if (!grid->has_mode(k + shift)) continue;
    const double sign = shift > 0 ? -1.0 : 1.0;
    out.col(grid->column(k + shift)) =
        0.5 * (cp.col(col) + sign * k * c.col(col).cwiseQuotient(r.cast<cplx>()));
  }
  return DiscFunction::from_modes(grid, out);
}

}  // namespace

DiscFunction dbar_numeric(const DiscFunction& f) { return radial_derivative_op(f, +1); }

DiscFunction dzeta_numeric(const DiscFunction& f) { return radial_derivative_op(f, -1); }

DiscFunction cauchy_green(const DiscFunction& g) {
  const auto& grid = g.grid();
  const Eigen::MatrixXcd c = g.modes();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(c.rows(), c.cols());
  for (int col = 0; col < grid->n_theta(); ++col) {
    const int k = grid->mode(col);
    if (!grid->has_mode(k - 1)) continue;
    out.col(grid->column(k - 1)) = grid->cauchy_green_matrix(k).cast<cplx>() * c.col(col);
  }
  return DiscFunction::from_modes(grid, out);
}

cplx cauchy_green_at(const std::function<cplx(cplx)>& g, cplx zeta, int n_rho, int n_phi) {
  if (std::abs(zeta) > 1.0 + 1e-12) throw Error("Cauchy-Green target outside the closed disc");
  const auto [x, w] = gauss_legendre(n_rho, 0.0, 1.0);
  const double rest = std::max(0.0, 1.0 - std::norm(zeta));
  cplx acc = 0.0;
  for (int p = 0; p < n_phi; ++p) {
    const double phi = 2.0 * std::numbers::pi * (p + 0.5) / n_phi;
    const cplx e = std::polar(1.0, phi);
    const double b = (std::conj(zeta) * e).real();
    const double big_r = -b + std::sqrt(b * b + rest);
    cplx inner = 0.0;
    for (int l = 0; l < n_rho; ++l) inner += w[l] * g(zeta + big_r * x[l] * e);
    acc += std::conj(e) * big_r * inner;
  }
  return -acc * (2.0 * std::numbers::pi / n_phi) / std::numbers::pi;
}

HolomorphicDisc schwarz(const BoundarySignal& h, double imag_tol) {
  const double frac = h.imaginary_fraction();
  if (frac > imag_tol)
    throw Error("Schwarz integral needs real boundary data (relative imaginary part " +
                std::to_string(frac) + ")");
  const Eigen::VectorXcd c = BoundarySignal(h.samples().real().cast<cplx>()).coefficients();
  const int n = h.size();
  Eigen::VectorXcd taylor(n / 2);
  taylor[0] = c[0].real();
  for (int k = 1; k < n / 2; ++k) taylor[k] = 2.0 * c[k];
  return HolomorphicDisc(taylor);
}

double negative_mode_energy(const BoundarySignal& b) {
  const Eigen::VectorXcd c = b.coefficients();
  const int n = b.size();
  double neg = 0.0;
  for (int col = n / 2; col < n; ++col) neg += std::norm(c[col]);
  const double total = c.squaredNorm();
  return total > 0.0 ? neg / total : 0.0;
}

HolomorphicDisc boundary_to_holomorphic(const BoundarySignal& b, double threshold) {
  const double neg = negative_mode_energy(b);
  if (neg > threshold)
    throw Error("boundary data is not holomorphic: negative-mode energy " + std::to_string(neg));
  const Eigen::VectorXcd c = b.coefficients();
  HolomorphicDisc out(c.head(b.size() / 2));
  out.discarded_energy = neg;
  return out;
}

double fourier_decay_seminorm(const BoundarySignal& b, double s) {
  const Eigen::VectorXcd c = b.coefficients();
  const int n = b.size();
  double acc = 0.0;
  for (int col = 0; col < n; ++col) {
    const int k = col < n / 2 ? col : col - n;
    if (k != 0) acc += std::pow(std::abs(k), s) * std::abs(c[col]);
  }
  return acc;
}

}  // namespace bishopdisc
