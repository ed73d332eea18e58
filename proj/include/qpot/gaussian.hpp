#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

#include "qpot/numerics.hpp"
#include "qpot/states.hpp"

namespace qpot {

using CMatrix = Eigen::MatrixXcd;

/// J = [[0, I], [−I, 0]] of order 2n.
Matrix symplectic_form(std::size_t n);

/// H = ½p·Mp + q·Cp + ½q·Lq + ξ_p·p + ξ_q·q + H₀.
struct QuadraticHamiltonian {
  SymMatrix M;
  Matrix C;
  SymMatrix L;
  Vector xi_p;
  Vector xi_q;
  double H0 = 0.0;

  QuadraticHamiltonian(SymMatrix m, Matrix c, SymMatrix l, Vector xi_p, Vector xi_q, double h0 = 0.0);

  std::size_t dim() const { return M.dim(); }
  /// The 2n×2n matrix [[L, C], [Cᵀ, M]].
  Matrix block() const;

  /// Independent oscillators, M = L = diag(ν).
  static QuadraticHamiltonian oscillator(std::span<const double> nu);
  /// 1-DF inverted oscillator, M = ν, L = −ν.
  static QuadraticHamiltonian inverted(double nu);
};

/// Real 2n×2n matrix with blocks a, b (top) and c, d (bottom) and SᵀJS = J.
class SymplecticMatrix {
 public:
  /// Validates all block constraints within 1e-10 relative to max(1, ‖S‖²).
  explicit SymplecticMatrix(Matrix s);
  static SymplecticMatrix identity(std::size_t n);
  static SymplecticMatrix from_blocks(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d);

  std::size_t dim() const { return static_cast<std::size_t>(s_.rows() / 2); }
  const Matrix& matrix() const { return s_; }
  Matrix a() const;
  Matrix b() const;
  Matrix c() const;
  Matrix d() const;

  /// Largest violation among adᵀ−bcᵀ=I, aᵀd−cᵀb=I, aᵀc, abᵀ, cdᵀ, bᵀd symmetric, and SᵀJS=J.
  static double constraint_residual(const Matrix& s);

  SymplecticMatrix operator*(const SymplecticMatrix& o) const;

 private:
  Matrix s_;
};

/// Padé(6) scaling-and-squaring exponential.
Matrix expm(const Matrix& a);

/// exp(J·H·t), re-projected onto the symplectic group if drift exceeds 1e-10.
SymplecticMatrix symplectic_propagator(const QuadraticHamiltonian& h, double t);

/**
 * Pure Gaussian state generated from the vacuum by S, displaced to (η_q, η_p).
 * `arg_det` is the branch-tracked Arg det(a + ib).
 */
struct GaussianPureState {
  SymplecticMatrix S;
  Vector eta_q;
  Vector eta_p;
  double hbar = 1.0;
  double arg_det = 0.0;

  GaussianPureState(SymplecticMatrix s, Vector eta_q, Vector eta_p, double hbar);
  std::size_t dim() const { return S.dim(); }
};

GaussianPureState coherent_state(std::span<const double> eta_q, std::span<const double> eta_p,
                                 double hbar = 1.0);
/// a = diag(a_ii), d = a⁻¹, b = c = 0.
GaussianPureState squeezed_state(std::span<const double> a_diag, double hbar = 1.0);

/// Σ = [I − i(caᵀ + dbᵀ)](aaᵀ + bbᵀ)⁻¹.
CMatrix sigma_matrix(const SymplecticMatrix& s);

SymMatrix position_cov(const GaussianPureState& g);        // (ħ/2)(aaᵀ + bbᵀ)
SymMatrix momentum_cov(const GaussianPureState& g);        // (ħ/2)(ccᵀ + ddᵀ)
Matrix position_momentum_cov(const GaussianPureState& g);  // (ħ/2)(acᵀ + bdᵀ)
SymMatrix gaussian_vnc(const GaussianPureState& g);        // (ħ²/4)V⁻¹
SymMatrix gaussian_vc(const GaussianPureState& g);         // Im Σ · V · Im Σ

GaussianPureState evolve(const GaussianPureState& g, const QuadraticHamiltonian& h, double t);

double gaussian_qp(const GaussianPureState& g, const SymMatrix& m, std::span<const double> q);
double gaussian_mvqp(const GaussianPureState& g, const SymMatrix& m);

/**
 * Sample ψ on a grid: Ω ∝ exp(−(q−η)·ReΣ(q−η)/2ħ) and
 * S = −½(q−η)·ImΣ(q−η) + η_p·q − ½η_q·η_p − (ħ/2)Arg det(a+ib).
 */
PolarState to_polar(const GaussianPureState& g, const Grid& grid);

}  // namespace qpot
