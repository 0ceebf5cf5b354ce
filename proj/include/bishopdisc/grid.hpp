#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "bishopdisc/types.hpp"

namespace bishopdisc {

/// Gauss–Legendre nodes and weights on (a, b).
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Polar tensor grid on the closed unit disc: N_θ uniform angles times N_r
/// Gauss–Legendre radii on (0,1), plus the boundary ring r = 1 stored last.
/// Immutable; obtain shared instances through DiscGrid::get.
class DiscGrid {
 public:
  DiscGrid(int n_theta, int n_r);

  static std::shared_ptr<const DiscGrid> get(int n_theta = 128, int n_r = 48);

  int n_theta() const { return n_theta_; }
  int n_r() const { return n_r_; }
  int n_rings() const { return n_r_ + 1; }
  int boundary_ring() const { return n_r_; }

  const Eigen::VectorXd& radii() const { return radii_; }
  double radius(int ring) const { return radii_[ring]; }
  double theta(int j) const;
  cplx node(int ring, int j) const;
  /// Area quadrature weight of an interior node (0 on the boundary ring).
  double area_weight(int ring) const { return area_weights_[ring]; }

  /// FFT column index ↔ Fourier mode k ∈ [-N_θ/2, N_θ/2 - 1].
  int mode(int column) const { return column < n_theta_ / 2 ? column : column - n_theta_; }
  int column(int mode) const { return mode >= 0 ? mode : mode + n_theta_; }
  bool has_mode(int k) const { return k >= -n_theta_ / 2 && k < n_theta_ / 2; }

  /// Radial differentiation matrix on the ring radii (barycentric).
  const Eigen::MatrixXd& radial_derivative() const { return diff_; }
  /// Lagrange basis values at radius r.
  Eigen::RowVectorXd interpolation_row(double r) const;
  /// Lagrange basis derivatives of the given order (0, 1, 2) at radius r.
  Eigen::RowVectorXd derivative_row(double r, int order) const;

  /// Radial Cauchy–Green matrix for input mode k (output mode k - 1).
  const Eigen::MatrixXd& cauchy_green_matrix(int k) const { return cg_[column(k)]; }

 private:
  void build_cauchy_green();

  int n_theta_, n_r_;
  Eigen::VectorXd radii_, area_weights_, bary_;
  Eigen::MatrixXd diff_;
  std::vector<Eigen::MatrixXd> cg_;
};

using GridPtr = std::shared_ptr<const DiscGrid>;

}  // namespace bishopdisc
