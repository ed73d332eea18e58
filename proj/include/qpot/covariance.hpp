#pragma once

#include <optional>
#include <vector>

#include "qpot/gaussian.hpp"
#include "qpot/qpotential.hpp"
#include "qpot/states.hpp"

namespace qpot {

/**
 * Second moments of a pure state split into classical and nonclassical parts.
 *
 * V is the position covariance, Vt = Vc + Vnc the momentum covariance,
 * Vc = Cov(∂S, ∂S), Vnc = ħ²∫∂Ω∂Ωᵀ and Vqp(i,j) = ⟨(q_i − ⟨q_i⟩)(∂_jS − pc_j)⟩.
 * `vt_direct` is ħ²∫Re(∂ψ̄ ∂ψᵀ) − pc pcᵀ, an independent estimate of Vt.
 */
struct CovarianceReport {
  SymMatrix V;
  SymMatrix Vt;
  Matrix Vqp;
  SymMatrix Vc;
  SymMatrix Vnc;
  Vector pc;
  Vector q_mean;
  std::optional<SymMatrix> vt_direct;
  double hbar = 1.0;
};

CovarianceReport covariance_report(const PolarState& s, const SymMatrix& m);
/// Closed-form blocks of a Gaussian state.
CovarianceReport covariance_report(const GaussianPureState& g);

struct RsurResult {
  CMatrix matrix;  // Ṽ − (Vqp + iħ/2)† V⁻¹ (Vqp + iħ/2)
  double min_eigenvalue = 0.0;
  bool pass = false;
};

/// Robertson–Schrödinger check through the Schur complement; passes when
/// the smallest eigenvalue is ≥ −1e-8·‖Ṽ‖.
RsurResult rsur_check(const CovarianceReport& r, double hbar);

/// Smallest eigenvalue of a Hermitian matrix via its real 2n×2n embedding.
double hermitian_min_eigenvalue(const CMatrix& h);

struct Theorem4Result {
  double vnc_dq2 = 0.0;  // Ṽnc Δq², compared with ħ²/4
  double mvqp_dq2 = 0.0;  // ⟨Q⟩ Δq², compared with ħ²/(8m)
  double delta = 0.0;  // Cov(∂S,∂S)Δq² − Cov(q,p)²
  double delta_scale = 0.0;
  bool vnc_pass = false;
  bool mvqp_pass = false;
  bool delta_pass = false;
  bool pass = false;
};

Theorem4Result theorem4_check(const CovarianceReport& r, double mvqp, double mass, double hbar);

struct MinCorrelation {
  double trace = 0.0;       // Tr[Ṽnc M]
  double lambda_max = 0.0;  // largest eigenvalue of Ṽnc M
  bool pass = false;
};

MinCorrelation min_quantum_correlation(const CovarianceReport& r, const SymMatrix& m);

struct NoClassicalCorrelation {
  double min_eigenvalue = 0.0;  // of V^{1/2} Ṽnc V^{1/2}
  double trace_lhs = 0.0;       // (ħ²/4) Tr(V⁻¹M)
  double trace_rhs = 0.0;       // Tr[Ṽnc M]
  bool pass = false;
};

/// Requires ‖Vc‖ < 1e-6·‖Vt‖, otherwise throws ClassicalCorrelationsPresent.
NoClassicalCorrelation no_classical_corr_check(const CovarianceReport& r, double hbar, const SymMatrix& m);

/// Smallest eigenvalue of Vc − Vqpᵀ V⁻¹ Vqp, which vanishes for pure Gaussians.
double classical_schur_gap(const CovarianceReport& r);

struct IndependentBound {
  double bound = 0.0;     // Σ ħ²/(8 m_i Δq_i²)
  double mvqp_sum = 0.0;  // Σ ⟨Q_i⟩
  bool pass = false;
};

IndependentBound independent_df_bound(const std::vector<PolarState>& states, const std::vector<double>& masses);

}  // namespace qpot
