#pragma once

#include <complex>
#include <vector>

#include "qpot/gaussian.hpp"
#include "qpot/qpotential.hpp"
#include "qpot/states.hpp"

namespace qpot {

/// Convex decomposition ρ = Σ ω_k |ψ_k⟩⟨ψ_k| on a shared grid.
struct MixedState {
  std::vector<double> weights;
  std::vector<PolarState> components;
  double hbar = 1.0;

  MixedState(std::vector<double> weights, std::vector<PolarState> components);

  const Grid& grid() const { return components.front().grid(); }
  std::size_t dim() const { return components.front().dim(); }
  std::size_t size() const { return components.size(); }
};

/// ρ(q_i, q_j) for one degree of freedom, row-major N×N.
class DensityGrid {
 public:
  DensityGrid(Grid grid, std::vector<std::complex<double>> rho, double hbar);

  const Grid& grid() const { return grid_; }
  std::size_t n() const { return n_; }
  double hbar() const { return hbar_; }
  std::complex<double> operator()(std::size_t i, std::size_t j) const { return rho_[i * n_ + j]; }
  /// ρ(q, q), the position density.
  std::vector<double> diagonal() const;

 private:
  Grid grid_;
  std::size_t n_;
  std::vector<std::complex<double>> rho_;
  double hbar_;
};

DensityGrid assemble_density(const MixedState& ms);

/**
 * ⟨Q̄⟩ = −(ħ²/2) M ∫ ∂²_q |ρ(q, q′)| at q′ = q.
 *
 * The derivative is taken along q in each column q′ = q_j and only then read
 * on the diagonal.
 */
double mixed_mvqp(const DensityGrid& d, double m);

/// Ṽnc = −ħ² ∫ ∂²_q |ρ(q, q′)| at q′ = q.
double density_vnc(const DensityGrid& d);

/// ∂_q|ρ(q, q′)| at q′ = q, column-wise.
std::vector<double> offdiagonal_amplitude_derivative(const DensityGrid& d);
/// ½ d/dq ρ(q, q); equals the above.
std::vector<double> half_diagonal_derivative(const DensityGrid& d);
/// ∂_q S̄ at q′ = q, i.e. ħ Im(∂_qρ)/ρ on the diagonal; zero on masked cells.
std::vector<double> mixed_phase_gradient(const DensityGrid& d);

/// δṼnc = Σ ω_k ∫ Ω_k² (∂S_k − ∂S̄)(∂S_k − ∂S̄)ᵀ with ∂S̄ = Σω_kΩ_k²∂S_k / Σω_kΩ_k².
SymMatrix delta_vnc(const MixedState& ms);

struct ConvexDecomposition {
  SymMatrix sum_k;  // Σ ω_k Ṽnc^{(k)}
  SymMatrix delta;  // δṼnc
  SymMatrix total;
};

ConvexDecomposition vnc_convex_decomposition(const MixedState& ms, const SymMatrix& m);

struct Theorem3Result {
  double bound = 0.0;        // (ħ²/8) Σ ω_k λ_max((V^{(k)})⁻¹M)
  double convex_mvqp = 0.0;  // Σ ω_k ⟨Q_k⟩
  double mixed_mvqp = 0.0;   // ½ Tr[Ṽnc M]
  bool pass = false;
};

Theorem3Result theorem3_bound(const MixedState& ms, const SymMatrix& m);

struct MixedCorrelation {
  double trace = 0.0;             // Tr[Ṽnc M]
  double weighted_lambda = 0.0;   // Σ ω_k λ_max(Ṽnc^{(k)} M)
  double lambda_of_sum = 0.0;     // λ_max(Σ ω_k Ṽnc^{(k)} M)
  bool pass = false;
};

MixedCorrelation mixed_min_correlation(const MixedState& ms, const SymMatrix& m);

/// Weights e^{−xk}(1 − e^{−x}) with x = ħβν, renormalized after truncation.
std::vector<double> thermal_weights(double x, int k);
/// Smallest K with truncated weight e^{−xK} below 1e-8.
int thermal_truncation(double x);

/**
 * HO thermal state truncated to K levels; K ≤ 0 picks the adaptive value.
 * Throws TruncationInsufficient when the discarded weight reaches 1e-8.
 */
MixedState thermal_state(double beta, double nu, double dq0, int k, const Grid& grid, double hbar = 1.0);
Grid thermal_recommended_grid(double x, double dq0, int k, std::size_t points = 1025);

/// J = Ω²(ξ_p + Cᵀq) + M Ω²∂S, the probability current under H.
std::vector<ScalarField> probability_current(const PolarState& s, const QuadraticHamiltonian& h);
std::vector<ScalarField> probability_current(const MixedState& ms, const QuadraticHamiltonian& h);

}  // namespace qpot
