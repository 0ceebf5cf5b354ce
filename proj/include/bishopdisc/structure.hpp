#pragma once

#include <array>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bishopdisc/polynomial.hpp"
#include "bishopdisc/types.hpp"

namespace bishopdisc {

/// A field Z ↦ J(Z) of real 2n×2n matrices with J² = -Id, defined on a ball
/// around the origin of ℂⁿ ≅ ℝ²ⁿ. Immutable and cheap to copy.
class AlmostComplexStructure {
 public:
  using Field = std::function<RMat(const RVec&)>;
  /// Returns the 2n partial derivatives ∂J/∂x_k.
  using JacobianField = std::function<std::vector<RMat>(const RVec&)>;

  AlmostComplexStructure(int n, Field field, JacobianField jacobian = {},
                         double domain_radius = std::numeric_limits<double>::infinity(),
                         std::string name = {});

  static AlmostComplexStructure standard(int n);

  int dim_complex() const { return n_; }
  int dim_real() const { return 2 * n_; }
  double domain_radius() const { return domain_radius_; }
  const std::string& name() const { return name_; }
  bool is_standard() const { return standard_; }
  bool has_analytic_jacobian() const { return static_cast<bool>(jacobian_); }
  /// Hölder-class stand-in carried as configuration only.
  double regularity_order() const { return regularity_order_; }
  AlmostComplexStructure with_regularity_order(double k) const;

  RMat operator()(const RVec& x) const;
  RMat at(const CVec& z) const { return (*this)(to_real(z)); }

  /// Analytic derivatives when supplied, central differences (step 1e-5) otherwise.
  std::vector<RMat> jacobian(const RVec& x) const;

  static constexpr double kDerivativeStep = 1e-5;

 private:
  int n_;
  Field field_;
  JacobianField jacobian_;
  double domain_radius_;
  std::string name_;
  bool standard_ = false;
  double regularity_order_ = 2.5;
};

/// J ↦ J·(−J²)^{−1/2}, principal square root. Leaves valid structures fixed.
RMat retract_structure(const RMat& j);

/// J_st + perturbation(Z), projected back onto J² = −Id.
AlmostComplexStructure perturbed_structure(int n, std::function<RMat(const RVec&)> perturbation,
                                           std::string name = "perturbed");

/// Polynomial matrix field; `add_standard` adds J_st to the constant term and
/// `retract` projects every evaluation onto J² = −Id.
AlmostComplexStructure polynomial_structure(int n, Polynomial<RMat> field, bool add_standard,
                                            bool retract, std::string name = "polynomial");

/// Z ↦ P(Z) J_st P(Z)^{-1}; exact on the constraint for any invertible P.
AlmostComplexStructure conjugated_structure(int n, std::function<RMat(const RVec&)> p,
                                            std::string name = "conjugated");

struct StructureValidation {
  double max_deviation = 0.0;  // max over samples of max-entry |J² + Id|
  double tolerance = 1e-9;
  bool ok = true;
  std::optional<RVec> worst_point;
  std::optional<std::string> failure;  // evaluation failure with the offending point
};

StructureValidation validate_structure(const AlmostComplexStructure& j,
                                       const std::vector<RVec>& sample_points,
                                       double tolerance = 1e-9);

/// Points of a compact set used for sup-norm comparisons.
std::vector<RVec> unit_ball_grid(int n, int per_axis = 5, double radius = 1.0);

/// max over grid of max-entry |J1 − J2|; order 1 adds the first-derivative term.
double structure_distance(const AlmostComplexStructure& a, const AlmostComplexStructure& b,
                          const std::vector<RVec>& grid, int derivative_order = 0);

/// Block-wise version for rate fits: returns max-entry distance per complex
/// block pair (rows/cols split into z ∈ ℂ^m and w ∈ ℂ^{n-m}) as [zz, zw, wz, ww].
std::array<double, 4> structure_block_distance(const AlmostComplexStructure& a,
                                               const AlmostComplexStructure& b,
                                               const std::vector<RVec>& grid, int m);

/// Pushforward under Z ↦ δ^{-1}Z: J_δ(Z) = J(δZ).
AlmostComplexStructure dilate_structure_isotropic(const AlmostComplexStructure& j, double delta);

/// Pushforward under Λ_δ(z, w) = (δ^{-1} z, δ^{-1/2} w), z ∈ ℂ^m.
AlmostComplexStructure dilate_structure_anisotropic(const AlmostComplexStructure& j, double delta,
                                                    int m);

/// First-order Taylor data of J at 0 and the anisotropic limit structure J₀.
struct LinearPart {
  int n = 0;
  int m = 0;
  std::vector<RMat> slopes;       // ∂J/∂x_k(0), anti-linear part, k = 0..2n-1
  std::vector<RMat> limit_slopes; // masked blocks kept in J₀ (zero for z-coordinates)
  RMat linear(const RVec& x) const;
  RMat limit(const RVec& x) const;
};

/// Builds the limit structure J₀ = J_st + L₀(w). L₀ keeps only the z-rows ×
/// w-columns block of L(0, w), and its last column is evaluated with
/// w_{n-m} = 0. Throws when J(0) ≠ J_st.
std::pair<LinearPart, AlmostComplexStructure> linear_part_and_limit(const AlmostComplexStructure& j,
                                                                    int m);

}  // namespace bishopdisc
