#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "bishopdisc/grid.hpp"
#include "bishopdisc/types.hpp"

namespace bishopdisc {

/// Samples (or two-sided Fourier coefficients) on the N_θ boundary nodes.
class BoundarySignal {
 public:
  BoundarySignal() = default;
  explicit BoundarySignal(Eigen::VectorXcd samples);
  static BoundarySignal from_real(const Eigen::VectorXd& samples);
  static BoundarySignal from_function(int n_theta, const std::function<cplx(double)>& f);
  /// Coefficients in FFT order (index j ↔ mode j for j < N/2, j - N otherwise).
  static BoundarySignal from_coefficients(const Eigen::VectorXcd& coeffs);

  int size() const { return static_cast<int>(samples_.size()); }
  const Eigen::VectorXcd& samples() const { return samples_; }
  Eigen::VectorXcd coefficients() const;
  cplx coefficient(int mode) const;
  /// max |Im| relative to max |sample|.
  double imaginary_fraction() const;
  double sup() const { return samples_.size() ? samples_.cwiseAbs().maxCoeff() : 0.0; }

 private:
  Eigen::VectorXcd samples_;
};

/// Complex function sampled on the polar grid; rows are rings, columns angles.
class DiscFunction {
 public:
  DiscFunction() = default;
  explicit DiscFunction(GridPtr grid);
  DiscFunction(GridPtr grid, Eigen::MatrixXcd values);

  static DiscFunction from_function(GridPtr grid, const std::function<cplx(cplx)>& f);
  static DiscFunction constant(GridPtr grid, cplx c);
  /// Per-ring Fourier coefficients in FFT column order.
  static DiscFunction from_modes(GridPtr grid, const Eigen::MatrixXcd& modes);

  const GridPtr& grid() const { return grid_; }
  const Eigen::MatrixXcd& values() const { return values_; }
  Eigen::MatrixXcd& values() { return values_; }
  cplx operator()(int ring, int j) const { return values_(ring, j); }

  Eigen::MatrixXcd modes() const;
  BoundarySignal boundary() const;
  /// Spectral interpolation at an arbitrary point of the closed disc.
  cplx eval(cplx zeta) const;
  cplx center() const;
  /// ∂/∂ζ and ∂/∂ζ̄ at the center, from the radial slopes of modes ±1.
  std::pair<cplx, cplx> center_derivatives() const;
  /// Laplacian at the center, 2·φ₀''(0) from the mean over circles.
  cplx center_laplacian() const;

  double sup() const;
  double boundary_sup() const;
  DiscFunction conj() const;
  DiscFunction real() const;

  DiscFunction operator+(const DiscFunction& o) const;
  DiscFunction operator-(const DiscFunction& o) const;
  DiscFunction operator*(cplx a) const;
  DiscFunction& operator+=(const DiscFunction& o);
  DiscFunction& operator-=(const DiscFunction& o);
  /// Pointwise product.
  DiscFunction times(const DiscFunction& o) const;

 private:
  void check_same_grid(const DiscFunction& o) const;

  GridPtr grid_;
  Eigen::MatrixXcd values_;
};

/// Holomorphic function stored by its Taylor coefficients a₀..a_{K}; the center
/// value is exact.
class HolomorphicDisc {
 public:
  HolomorphicDisc() = default;
  explicit HolomorphicDisc(Eigen::VectorXcd taylor) : taylor_(std::move(taylor)) {}

  const Eigen::VectorXcd& taylor() const { return taylor_; }
  cplx center() const { return taylor_.size() ? taylor_[0] : cplx(0.0); }
  cplx eval(cplx zeta) const;
  DiscFunction on_grid(GridPtr grid) const;
  BoundarySignal boundary(int n_theta) const;

  /// Energy discarded when the signal was projected onto non-negative modes.
  double discarded_energy = 0.0;

 private:
  Eigen::VectorXcd taylor_;
};

/// A map 𝔻 → ℂⁿ, one DiscFunction per complex coordinate.
struct Disc {
  std::vector<DiscFunction> components;

  Disc() = default;
  explicit Disc(std::vector<DiscFunction> c) : components(std::move(c)) {}
  static Disc zeros(GridPtr grid, int n);

  int dim() const { return static_cast<int>(components.size()); }
  const GridPtr& grid() const { return components.at(0).grid(); }
  DiscFunction& operator[](int k) { return components[k]; }
  const DiscFunction& operator[](int k) const { return components[k]; }

  CVec point(int ring, int j) const;
  CVec eval(cplx zeta) const;
  CVec center() const;
  double sup() const;
  /// max over components of the sup-norm of the difference.
  double distance(const Disc& o) const;
  Disc operator+(const Disc& o) const;
  Disc operator-(const Disc& o) const;
};

}  // namespace bishopdisc
