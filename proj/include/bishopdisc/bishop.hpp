#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bishopdisc/dbar_solver.hpp"
#include "bishopdisc/disc_function.hpp"
#include "bishopdisc/structure.hpp"
#include "bishopdisc/submanifold.hpp"

namespace bishopdisc {

enum class Dilation { none, isotropic, anisotropic };

Dilation parse_dilation(const std::string& s);
std::string to_string(Dilation d);

struct BishopConfig {
  int max_outer = 100;
  double tol = 1e-10;         // boundary defect sup-norm
  double damping = 1.0;       // halved whenever the defect grows
  double min_damping = 1.0 / 64.0;
  double tol_interior = 1e-6; // reported, and enforced when `enforce_interior`
  bool enforce_interior = true;
  PhiInverseConfig inner{200, 1e-12, 0.2, false};
};

struct BishopParams {
  std::vector<HolomorphicDisc> w;  // n - m components, never solved for
  RVec c;                          // Im z(0) = c
  double delta = 1.0;
  Dilation dilation = Dilation::none;
  std::optional<std::vector<HolomorphicDisc>> z_seed;
  BishopConfig cfg;
};

struct BishopSolution {
  Disc f;  // J_δ-holomorphic disc attached to E_δ
  Disc g;  // Φ(f), holomorphic
  std::vector<HolomorphicDisc> z;  // holomorphic z-part of g
  double boundary_residual = 0.0;
  double interior_residual = 0.0;
  int outer_iterations = 0;
  int inner_iterations = 0;
  double contraction = 0.0;
  std::vector<double> defect_history;
};

/// (J_δ, E_δ) for the requested dilation.
std::pair<AlmostComplexStructure, GenericSubmanifold> dilate_pair(const AlmostComplexStructure& j,
                                                                  const GenericSubmanifold& e,
                                                                  double delta, Dilation kind);

/// r(f) at the boundary nodes, one real signal per defining function.
std::vector<Eigen::VectorXd> boundary_defect(const Disc& f, const GenericSubmanifold& e);
double boundary_defect_sup(const Disc& f, const GenericSubmanifold& e);

/// ζ ↦ r_δ(Φ^{-1}(g))(ζ) on b𝔻.
std::vector<BoundarySignal> bishop_residual(const Disc& g, const AlmostComplexStructure& j,
                                            const GenericSubmanifold& e, double delta = 1.0,
                                            Dilation kind = Dilation::none,
                                            const PhiInverseConfig& cfg = {});

/// Outer iteration z ← z - damping·I_S(r(Φ^{-1}(z, w))|_{b𝔻}) with Im z(0) = c.
BishopSolution solve_bishop(const AlmostComplexStructure& j, const GenericSubmanifold& e,
                            const BishopParams& params, GridPtr grid);

/// Maps a disc solved at scale δ back to the original coordinates.
Disc pull_back(const Disc& f, double delta, Dilation kind, int m);

struct ChartFailure {
  int index = 0;
  std::string message;
};

struct ChartResult {
  std::vector<std::optional<BishopSolution>> members;
  std::vector<ChartFailure> failures;
  double max_boundary_residual = 0.0;
  double max_interior_residual = 0.0;
  double max_second_difference = 0.0;  // normalized by the squared parameter step
  double min_separation_ratio = 0.0;   // min ‖f_a - f_b‖ / ‖p_a - p_b‖
};

/// Solves every member (in parallel, index-ordered) and computes smoothness and
/// injectivity diagnostics on the parameter grid of the given shape.
ChartResult disc_chart(const AlmostComplexStructure& j, const GenericSubmanifold& e,
                       const std::vector<BishopParams>& members,
                       const std::vector<RVec>& coordinates, const std::vector<int>& shape,
                       GridPtr grid, int jobs = 1);

}  // namespace bishopdisc
