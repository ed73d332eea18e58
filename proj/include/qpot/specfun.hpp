#pragma once

namespace qpot {

/// Physicists' Hermite polynomial H_n(x), 0 ≤ n ≤ 200.
double hermite(int n, double x);

/// Hermite function H_n(x)e^{-x²/2}/√(2ⁿ n! √π), stable for large n.
double hermite_function(int n, double x);

/// Associated Legendre P_λ^μ(x) with the Condon–Shortley phase, 0 ≤ μ ≤ λ ≤ 100.
double assoc_legendre(int lambda, int mu, double x);

/// √((λ−μ)!/(λ+μ)!) P_λ^μ(x), computed without factorial overflow.
double assoc_legendre_normalized(int lambda, int mu, double x);

/// Same with s = √(1−x²) supplied by the caller, e.g. sech q for x = tanh q,
/// which avoids cancellation near |x| = 1.
double assoc_legendre_normalized(int lambda, int mu, double x, double s);

/// ln Γ(x) for x > 0 (Lanczos, g = 7).
double ln_gamma(double x);

/// k!! with (−1)!! = 0!! = 1, for −1 ≤ k ≤ 170.
double double_factorial(int k);

/// q² sech^{2μ}(q), evaluated in log space.
double pt_variance_integrand(int mu, double q);

/**
 * Position variance of the λ = μ Pöschl–Teller eigenstate,
 * [(2μ−1)!!/(2μ−2)!!] ∫₀^∞ sech^{2μ}(q) q² dq, by quadrature. 1 ≤ μ ≤ 200.
 */
double pt_position_variance(int mu);

/// Pöschl–Teller binding energy −ħ²μ²/(2m).
double pt_energy(int mu, double mass, double hbar = 1.0);

/// The variant −ħ²μ/(2m), linear in μ; kept for
/// comparison only since it is inconsistent with the eigenvalue equation.
double pt_energy_linear_mu(int mu, double mass, double hbar = 1.0);

}  // namespace qpot
