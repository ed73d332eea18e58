#pragma once

#include <vector>

#include "qpot/numerics.hpp"
#include "qpot/states.hpp"

namespace qpot {

/// Difference order used by the physics modules.
inline constexpr int kPhysicsOrder = 8;

/**
 * First derivatives of Ω and S obtained from ψ = Ω e^{iS/ħ}, which stays
 * smooth where S jumps by πħ at nodes.
 *
 * ∂Ω = Re(ψ̄∂ψ)/Ω and ∂S = ħ Im(ψ̄∂ψ)/Ω². For real states ∂Ω = sgn(ψ)∂ψ and
 * ∂S = 0. Cells with Ω < kNodeThreshold·max Ω are masked and carry zeros.
 */
struct AmplitudeGradient {
  std::vector<std::vector<double>> d_omega;
  std::vector<std::vector<double>> d_phase;
  std::vector<char> mask;
  std::size_t masked_cells = 0;
  double masked_mass = 0.0;  // ∫Ω² over masked cells
  Matrix g;                  // ∫∂Ω ∂Ωᵀ, with Re(∂ψ̄ ∂ψᵀ) standing in on masked cells
};

AmplitudeGradient amplitude_gradient(const PolarState& s, int order = kPhysicsOrder);

/// Pointwise Q = −(ħ²/2Ω) ∂·(M∂Ω). Masked cells hold 0; see node_mask().
ScalarField quantum_potential(const PolarState& s, const SymMatrix& m);
std::vector<char> node_mask(const PolarState& s);

/// ⟨Q⟩ = (ħ²/2) ∫ ∂Ω·M∂Ω.
double mvqp(const PolarState& s, const SymMatrix& m);

/// **Q** = ⟨∂lnΩ² (∂lnΩ²)ᵀ⟩ M = 4 ∫∂Ω∂Ωᵀ M; not symmetric in general.
Matrix q_matrix(const PolarState& s, const SymMatrix& m);

/// Ṽnc = ħ² ∫ ∂Ω ∂Ωᵀ.
SymMatrix vnc(const PolarState& s, const SymMatrix& m);

/// Eigenvalues of **Q**, ascending, through the pencil (4∫∂Ω∂Ωᵀ, M⁻¹).
Vector q_matrix_eigenvalues(const Matrix& g, const SymMatrix& m);

/// ∫Ω²Q over unmasked cells: the second-derivative form, for cross-checks.
double mvqp_laplacian_form(const PolarState& s, const SymMatrix& m);

/// −⟨∂²lnΩ²⟩M from the Hessian of Ω; only meaningful for node-free states.
Matrix q_matrix_hessian_form(const PolarState& s, const SymMatrix& m);

struct QpReport {
  ScalarField q_field;
  std::size_t masked_cells = 0;
  double mvqp = 0.0;
  Matrix q_matrix;
  SymMatrix vnc;
  Vector eigenvalues;  // of **Q**, ascending
};

/// Assembles all of the above and checks ⟨Q⟩ = ½Tr[Ṽnc M] and (ħ²/4)**Q** = Ṽnc M.
QpReport qp_report(const PolarState& s, const SymMatrix& m);

}  // namespace qpot
