#pragma once

#include <functional>

#include "bishopdisc/disc_function.hpp"

namespace bishopdisc {

/// ∂f/∂ζ̄: spectral in θ, barycentric in r.
DiscFunction dbar_numeric(const DiscFunction& f);
/// ∂f/∂ζ, same discretization.
DiscFunction dzeta_numeric(const DiscFunction& f);

/// T(g)(ζ) = -(1/π) ∬_𝔻 g(τ)/(τ - ζ) dA(τ), the right inverse of ∂̄ with T(1) = ζ̄.
/// Evaluated mode by mode: θ-mode k of g feeds θ-mode k - 1 of T(g) through
/// radial integrals of the interpolant.
DiscFunction cauchy_green(const DiscFunction& g);

/// T(g) at a single point by the polar substitution τ = ζ + ρe^{iφ}
/// (the area element cancels the pole). Gauss–Legendre in ρ, trapezoid in φ.
cplx cauchy_green_at(const std::function<cplx(cplx)>& g, cplx zeta, int n_rho = 32, int n_phi = 64);

/// Holomorphic F with Re F = h on the boundary and Im F(0) = 0:
/// F = ĥ₀ + Σ_{k>0} 2ĥ_k ζ^k. Rejects signals with an imaginary part above
/// `imag_tol` (relative).
HolomorphicDisc schwarz(const BoundarySignal& h, double imag_tol = 1e-12);

/// Analytic extension of boundary data, discarding negative modes. Throws when
/// the negative-mode energy (relative to the total) exceeds `threshold`.
HolomorphicDisc boundary_to_holomorphic(const BoundarySignal& b, double threshold = 1e-10);

/// Σ |k|^s |ĝ_k| over the boundary coefficients.
double fourier_decay_seminorm(const BoundarySignal& b, double s);

/// Σ_{k<0} |ĝ_k|² / Σ |ĝ_k|² (0 for the zero signal).
double negative_mode_energy(const BoundarySignal& b);

}  // namespace bishopdisc
