#pragma once

#include <cstdint>
#include <vector>

#include "bishopdisc/dbar_solver.hpp"
#include "bishopdisc/grid.hpp"
#include "bishopdisc/scalar_field.hpp"
#include "bishopdisc/structure.hpp"

namespace bishopdisc {

// Laplacian convention Δ = ∂²/∂x² + ∂²/∂y², so L^{J_st}(|Z|²)(v) = 4|v|².

/// -d(J*du)(X, JX)(p) for the constant field X = v.
double levi_form_direct(const ScalarField& u, const AlmostComplexStructure& j, const RVec& p,
                        const RVec& v);

/// Symmetric S with levi_form_direct(u, j, p, v) = vᵀ S v.
RMat levi_matrix(const ScalarField& u, const AlmostComplexStructure& j, const RVec& p);

struct LeviDiscConfig {
  double scale = 0.2;  // the disc is f(0) = p, f_x(0) = scale·v
  int n_theta = 64;
  int n_r = 24;
  int max_iter = 60;
  double tol = 1e-12;
  PhiInverseConfig phi{200, 1e-13, 0.2, false};
};

struct LeviDiscResult {
  double value = 0.0;
  Disc disc;
  int iterations = 0;
  double center_error = 0.0;
  double direction_error = 0.0;
};

/// Δ(u∘f)(0)/scale² along a J-holomorphic disc f = Φ^{-1}(a + bζ) with a, b
/// tuned so that f(0) = p and ∂f/∂x(0) = scale·v.
LeviDiscResult levi_form_disc(const ScalarField& u, const AlmostComplexStructure& j, const RVec& p,
                              const RVec& v, const LeviDiscConfig& cfg = {});

enum class LeviMethod { direct, disc };

double levi_form(const ScalarField& u, const AlmostComplexStructure& j, const RVec& p, const RVec& v,
                 LeviMethod method, const LeviDiscConfig& cfg = {});

/// Real basis of H_p^J({u = 0}) = ker[du; du∘J(p)].
std::vector<RVec> levi_null_tangent(const ScalarField& r, const AlmostComplexStructure& j,
                                    const RVec& p);

/// Deterministic unit directions in the span of `basis` (or all of ℝᵈ when empty).
std::vector<RVec> sample_directions(int dim, int count, std::uint64_t seed,
                                    const std::vector<RVec>& basis = {});

struct StrictifyConfig {
  double cap = 1073741824.0;  // 2^30
  double margin = 1e-6;
  std::uint64_t seed = 7;
};

struct StrictifyResult {
  double c = 0.0;
  ScalarField field;
  double margin = 0.0;      // min sampled Levi value of r + C r²
  double tangent_min = 0.0; // min sampled Levi value of r on H_p
  int candidates = 0;
};

/// Smallest C ∈ {1, 2, 4, ...} making r + C r² strictly J-plurisubharmonic at p on
/// 64·(2n-1) sampled directions.
StrictifyResult strictify_defining(const ScalarField& r, const AlmostComplexStructure& j,
                                   const RVec& p, const StrictifyConfig& cfg = {});

}  // namespace bishopdisc
