#pragma once

#include <optional>
#include <vector>

#include "bishopdisc/disc_function.hpp"
#include "bishopdisc/structure.hpp"

namespace bishopdisc {

/// Complex matrix Q with A(v) = Q·v̄, A = -(J_st + J)^{-1}(J_st - J).
/// Throws when J_st + J is singular or A fails to anti-commute with J_st.
CMat q_matrix(const RMat& j, double tol = 1e-9);
CMat q_matrix(const AlmostComplexStructure& j, const RVec& z, double tol = 1e-9);

struct QSample {
  double q_sup = 0.0;          // max Frobenius norm of Q over the samples
  double structure_dev = 0.0;  // max-entry |J - J_st| over the samples
};

/// Σ_q Q_{jq}(f)·conj((f_q)_ζ) at every node, given f and ∂f/∂ζ.
Disc q_conj_product(const Disc& f, const Disc& f_zeta, const AlmostComplexStructure& j,
                    QSample* stats = nullptr);

/// f_ζ̄ + Q(f)·conj(f_ζ).
Disc jholo_residual(const Disc& f, const AlmostComplexStructure& j);
double jholo_residual_sup(const Disc& f, const AlmostComplexStructure& j);

/// g = f + T_CG(Q(f)·conj(f_ζ)).
Disc phi_forward(const Disc& f, const AlmostComplexStructure& j);

struct PhiInverseConfig {
  int max_iter = 200;
  double tol = 1e-10;
  /// Largest admissible max-entry |J - J_st| along the iterates.
  double structure_threshold = 0.2;
  bool compute_residual = true;
};

struct PhiInverseResult {
  Disc f;
  int iterations = 0;
  std::vector<double> steps;  // successive-iterate distances
  double contraction = 0.0;   // largest observed ratio of successive steps
  double q_sup = 0.0;
  double structure_dev = 0.0;
  double residual = -1.0;     // sup |jholo_residual|, -1 when not computed
};

/// Picard iteration f ← g - T_CG(Q(f)·conj(f_ζ)) seeded with `warm` (or g).
PhiInverseResult phi_inverse(const Disc& g, const AlmostComplexStructure& j,
                             const PhiInverseConfig& cfg = {}, const Disc* warm = nullptr);

}  // namespace bishopdisc
