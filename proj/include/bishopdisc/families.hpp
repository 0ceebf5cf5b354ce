#pragma once

#include <optional>
#include <vector>

#include "bishopdisc/bishop.hpp"
#include "bishopdisc/disc_function.hpp"
#include "bishopdisc/structure.hpp"
#include "bishopdisc/submanifold.hpp"

namespace bishopdisc {

/// f(ζ) = (i·c, p + vζ): boundary on {Re z = 0}.
Disc flat_disc(GridPtr grid, const CVec& p, const CVec& v, const RVec& c);

struct FamilyParams {
  double t = 0.1;
  double lambda = 0.5;
  RVec y;  // n-1 entries for the closed-form quadric family, m for j0_disc
  CVec c;  // 1 entry for the quadric family, n-m for j0_disc
  double delta = 1.0;

  void validate() const;
};

/// Point of the closed-form quadric disc f(t, λ, y, c)(ζ) in ℂⁿ, exact.
CVec boggess_pitts_point(const FamilyParams& p, int n, cplx zeta);
Disc boggess_pitts(GridPtr grid, const FamilyParams& p, int n);
/// Holomorphic w and z-seed data of the family, as used by solve_bishop.
std::vector<HolomorphicDisc> boggess_pitts_w(const FamilyParams& p);
std::vector<HolomorphicDisc> boggess_pitts_z(const FamilyParams& p, int n);
/// E₀′ = {Re z_j = 0 (j ≤ n-2), 2 Re z_{n-1} = |w|²}.
GenericSubmanifold boggess_pitts_quadric(int n);

struct RankInfo {
  int rank = 0;
  std::vector<double> singular_values;
  /// σ_rank / σ_{rank+1}, both floored at ε·σ_1; 0 when rank is the full column count.
  /// A map from ℝ^cols into a smaller space gets exact zero singular values appended.
  double gap = 0.0;
  double min_ratio = 1.0;  // smallest consecutive ratio σ_{k+1}/σ_k
};

/// Rank by the first consecutive singular-value ratio σ_{k+1}/σ_k ≤ threshold.
/// Throws when the smallest ratio lies in (threshold, ambiguity) with no clear crossing.
RankInfo numerical_rank(const Eigen::MatrixXd& a, double threshold = 1e-6, double ambiguity = 1e-5);

struct AttachJacobian {
  Eigen::MatrixXd jacobian;  // 2n × (n+2), columns (λ, y, Re c, Im c)
  RankInfo rank;             // of the jacobian extended by the t-column
  Eigen::VectorXd lambda_direction;
  /// |⟨P_N ∂_λ, ν⟩| / |P_N ∂_λ| with P_N the normal projection of T₀(E₀′).
  double nu_alignment = 0.0;
};

/// Differential of (λ, y, c) ↦ f(t, λ, y, c)(-λ) at (1, 0, 0), central
/// differences in (y, c, t) and one-sided second-order differences in λ.
AttachJacobian bp_attach_jacobian(double t, int n, double step = 1e-4);
/// Rank of (y, c) ↦ f(t, 1, y, c)(-1), extended by the t-column.
RankInfo bp_attachment_map_rank(double t, int n, double step = 1e-4);

/// Explicit J₀-holomorphic Bishop disc attached to E₀ = {2 Re z_j + H_j(0, w) = 0}.
struct J0Disc {
  Disc disc;
  CVec a;  // coefficients of ζ̄ in the z-components
  double holomorphy_residual = 0.0;
  double boundary_residual = 0.0;
};

/// Checks the block pattern of the limit slopes: only z-rows × w-columns, and
/// the last w-column independent of w_{n-m}.
void check_limit_pattern(const LinearPart& lp, double tol = 1e-12);

J0Disc j0_disc(GridPtr grid, const LinearPart& l0, const QuadricModel& q, const FamilyParams& p,
               double tol = 1e-10);
/// Closed-form point of the j0 family (used for attachment maps).
CVec j0_disc_point(const LinearPart& l0, const QuadricModel& q, const FamilyParams& p, cplx zeta);

/// Ψ_j(w) = T_CG(-(Q(0, w)·conj(w_ζ))_j), j = 1..m.
std::vector<DiscFunction> psi(const std::vector<DiscFunction>& w, const AlmostComplexStructure& j0,
                              int m);

struct TransferResult {
  Disc disc;
  double input_holomorphy = 0.0;   // J₀-holomorphy residual of the input
  double input_boundary = 0.0;     // boundary residual of the input on E₀
  double output_holomorphy = 0.0;  // ∂̄ residual of the output
  double output_boundary = 0.0;
};

/// (z - Ψ(w) + I_S(Re Ψ(w)), w).
TransferResult lemma45_transfer(const Disc& zw, const AlmostComplexStructure& j0,
                                const GenericSubmanifold& e0, int m);

}  // namespace bishopdisc
