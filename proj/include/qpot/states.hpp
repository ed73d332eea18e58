#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>

#include "qpot/numerics.hpp"

namespace qpot {

/**
 * Pure state ψ = Ω e^{iS/ħ} sampled on a grid.
 *
 * Construction checks Ω ≥ 0, ∫Ω² = 1 within 1e-6 and Ω < 1e-6·max Ω on the
 * grid boundary. `real_valued` marks states whose phase is 0 or πħ: their
 * phase gradient is zero away from nodes and the πħ jumps are not unwrapped.
 */
class PolarState {
 public:
  PolarState(ScalarField omega, ScalarField phase, double hbar, bool real_valued = false);

  const Grid& grid() const { return omega_.grid(); }
  std::size_t dim() const { return omega_.grid().dim(); }
  const ScalarField& omega() const { return omega_; }
  const ScalarField& phase() const { return phase_; }
  double hbar() const { return hbar_; }
  bool real_valued() const { return real_valued_; }
  double max_omega() const { return max_omega_; }

  /// Ω²(q), the probability density.
  std::vector<double> density() const;
  std::vector<double> psi_real() const;
  std::vector<double> psi_imag() const;

 private:
  ScalarField omega_;
  ScalarField phase_;
  double hbar_;
  bool real_valued_;
  double max_omega_ = 0.0;
};

/// A sampled T₀ ∈ L²(Ω²) with a label for reports.
struct TestFunction {
  ScalarField values;
  std::string label;
};

TestFunction make_test_function(const Grid& grid, std::string label,
                                std::function<double(std::span<const double>)> f);

/// Cells below this fraction of max Ω are treated as nodes.
inline constexpr double kNodeThreshold = 1e-8;

/// Phase jumps above π/2 between neighbours with Ω above this fraction of
/// max Ω abort the unwrap.
inline constexpr double kUnwrapGuard = 0.25;

PolarState polar_decompose(const ScalarField& re, const ScalarField& im, double hbar);

/// HO eigenstate ψ_n with ground-state width Δq₀ (Δq₀² = ħ/(2mν)).
PolarState ho_eigenstate(int n, double dq0, const Grid& grid, double hbar = 1.0);
Grid ho_recommended_grid(int n, double dq0, std::size_t points = 513);

/// λ ≥ μ ≥ 1 eigenstate √μ·P̃_λ^μ(tanh q) of the Pöschl–Teller well.
PolarState poschl_teller_state(int lambda, int mu, const Grid& grid, double hbar = 1.0);
Grid pt_recommended_grid(std::size_t points = 2049);

/// Zero-phase Gaussian with position covariance V centred at η_q.
PolarState gaussian_polar(const SymMatrix& v, std::span<const double> eta_q, const Grid& grid,
                          double hbar = 1.0);

/**
 * Gaussian with phase S = η_p·q + ½(q−η_q)·K(q−η_q); K is a symmetric chirp.
 * Pass an empty chirp for none.
 */
PolarState gaussian_wavepacket(const SymMatrix& v, std::span<const double> eta_q,
                               std::span<const double> eta_p, const Matrix& chirp,
                               const Grid& grid, double hbar = 1.0);

/// Grid spanning ±half_sigmas·σ_i around η_q.
Grid gaussian_recommended_grid(const SymMatrix& v, std::span<const double> eta_q,
                               std::size_t points, double half_sigmas = 8.0);

double weighted_mean(const PolarState& s, const ScalarField& f);
double weighted_cov(const PolarState& s, const ScalarField& f, const ScalarField& g);

/// Position mean vector and covariance matrix under Ω².
Vector position_mean(const PolarState& s);
SymMatrix position_covariance(const PolarState& s);

/**
 * State CSV: a header row `q1(lo:hi:count),...,re,im,hbar=<value>` followed by
 * one row per grid point in flat order with columns q1..qn, re ψ, im ψ.
 */
PolarState read_state_csv(std::istream& in);
PolarState read_state_csv(const std::string& path);
void write_state_csv(std::ostream& out, const PolarState& s);

}  // namespace qpot
