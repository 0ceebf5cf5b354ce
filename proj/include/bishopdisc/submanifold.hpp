#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bishopdisc/polynomial.hpp"
#include "bishopdisc/scalar_field.hpp"
#include "bishopdisc/structure.hpp"
#include "bishopdisc/types.hpp"

namespace bishopdisc {

/// Codimension-m generating submanifold {Re z = h(Im z, w)} of ℂⁿ with
/// z ∈ ℂ^m, w ∈ ℂ^{n-m}. The graph variable ξ = (y₁..y_m, Re w₁, Im w₁, ...)
/// has length 2n - m.
class GenericSubmanifold {
 public:
  using Graph = std::function<RVec(const RVec&)>;
  /// m × (2n - m) Jacobian of h.
  using GraphJacobian = std::function<RMat(const RVec&)>;

  GenericSubmanifold(int n, int m, Graph h, GraphJacobian dh = {}, std::string name = {});

  static GenericSubmanifold from_polynomial(int n, int m, const Polynomial<RVec>& h,
                                            std::string name = "polynomial");
  /// Re z = 0.
  static GenericSubmanifold flat(int n, int m);

  int ambient_dim() const { return n_; }
  int codim() const { return m_; }
  int graph_dim() const { return 2 * n_ - m_; }
  const std::string& name() const { return name_; }

  RVec h(const RVec& xi) const { return h_(xi); }
  RMat h_jacobian(const RVec& xi) const;

  /// ξ from a point Z ∈ ℝ²ⁿ.
  RVec graph_coordinates(const RVec& z) const;
  /// The point of the manifold above ξ.
  RVec graph_point(const RVec& xi) const;

  /// r(Z) = Re z - h(Im z, w) ∈ ℝ^m.
  RVec defining(const RVec& z) const;
  /// m × 2n real Jacobian of r.
  RMat defining_jacobian(const RVec& z) const;
  /// r_j as a scalar field on ℝ²ⁿ (second derivatives by differences of the gradient).
  ScalarField component(int j) const;

  /// h(0) = 0, ∇h(0) = 0 within 1e-12.
  void check_normalized(double tol = 1e-12) const;

  GenericSubmanifold dilate_isotropic(double delta) const;
  GenericSubmanifold dilate_anisotropic(double delta) const;

 private:
  int n_, m_;
  Graph h_;
  GraphJacobian dh_;
  std::string name_;
};

struct TangentFrame {
  RVec base;
  std::vector<CVec> holomorphic;  // orthonormal complex basis of H_p^J(E)
  std::vector<RVec> holomorphic_real;  // orthonormal real basis, J(p)-stable
  std::vector<RVec> tangent;  // orthonormal real basis of T_p(E)
};

/// Common kernel of ∂_J r^j at p, of complex dimension n - m.
TangentFrame holomorphic_tangent(const GenericSubmanifold& e, const AlmostComplexStructure& j,
                                 const RVec& p, double on_manifold_tol = 1e-8);

/// Orthonormal basis of the null space of a real matrix (relative threshold on singular values).
std::vector<RVec> null_space(const RMat& a, double rel_tol = 1e-10);

/// r_ε(Z) = r(Z) + ε|Z|² - ε/N.
ScalarField foliation_leaf(const ScalarField& r, double eps, double n_param);

struct FoliationConfig {
  double n_param = 4.0;
  /// Domain radius of ε(Z) as a multiple of 1/√N.
  double radius_factor = 0.5;
};

/// ε with Z ∈ Γ_ε, i.e. r(Z)/(1/N - |Z|²); requires |Z| < radius_factor/√N.
double leaf_parameter(const ScalarField& r, const RVec& z, const FoliationConfig& cfg = {});

/// Hermitian quadratic model of E at 0: r^j = 2 Re z_j + H_j(0, w) with
/// H_j(w) = w* H_j w.
struct QuadricModel {
  int n = 0;
  int m = 0;
  std::vector<CMat> hermitian;  // m matrices of size (n-m)×(n-m)

  double form(int j, const CVec& w) const;
  /// H_j[N,N] = 0 for j < m, H_m[N,N] = -1, H_m[N,s] = 0 for s ≠ N (N = last w index).
  bool normalized(double tol = 1e-12) const;
  void require_normalized(double tol = 1e-12) const;
};

/// Reads the quadric model off the w-Hessian of h at 0. Fails if h has a
/// non-Hermitian (complex quadratic) part in w.
QuadricModel quadric_from_submanifold(const GenericSubmanifold& e, double tol = 1e-6);

/// Takes real linear combinations of the defining functions to reach the
/// normal form. Returns the model and the real m×m matrix A with z' = A z.
std::pair<QuadricModel, Eigen::MatrixXd> normalize_quadric(const QuadricModel& q);

/// {Re z_j = -½ H_j(0, w)} as a submanifold.
GenericSubmanifold quadric_submanifold(const QuadricModel& q);

}  // namespace bishopdisc
