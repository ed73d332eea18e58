#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qpot/gaussian.hpp"
#include "qpot/qpotential.hpp"
#include "qpot/states.hpp"

namespace qpot {

struct BoundEvaluation {
  double value = 0.0;  // L_Q(T₀)
  std::string t0_label;
  double mvqp = 0.0;
  double slack = 0.0;  // mvqp − value
};

/**
 * Evaluates L_Q(T₀) = (ħ²/8) ⟨∂T₀⟩·M⟨∂T₀⟩ / Cov(T₀,T₀) against one state.
 *
 * ⟨∂T₀⟩ is taken in the integrated-by-parts form −2∫Ω(T₀ − ⟨T₀⟩)∂Ω, which
 * needs no derivative of T₀ and is finite across nodes.
 */
class BoundContext {
 public:
  BoundContext(const PolarState& s, const SymMatrix& m);

  BoundEvaluation evaluate(const TestFunction& t0) const;
  /// ⟨∂T⟩ by parts.
  Vector mean_gradient(const ScalarField& t) const;
  /// ⟨∂T⟩ = ∫Ω²∂T by differencing T; cross-check only.
  Vector mean_gradient_direct(const ScalarField& t) const;

  double mvqp() const { return mvqp_; }
  const PolarState& state() const { return state_; }
  const SymMatrix& metric() const { return m_; }
  const AmplitudeGradient& gradient() const { return ag_; }

 private:
  PolarState state_;
  SymMatrix m_;
  AmplitudeGradient ag_;
  double mvqp_;
};

BoundEvaluation bound_functional(const PolarState& s, const SymMatrix& m, const TestFunction& t0);

/// T_j = √λ_j e_j·∂lnΩ² for M = Σλ_j e_j e_jᵀ; zero on masked cells.
std::vector<TestFunction> auxiliary_ti(const PolarState& s, const SymMatrix& m);

/// (ħ²/8) λ_max(**Q**).
double theorem2_bound(const PolarState& s, const SymMatrix& m);

struct LinearBound {
  double lower = 0.0;  // (ħ²/8) λ_min of M v = λ V v
  double upper = 0.0;  // (ħ²/8) λ_max
  double bound = 0.0;  // = upper
};

LinearBound linear_bound(const PolarState& s, const SymMatrix& m);
LinearBound linear_bound(const GaussianPureState& g, const SymMatrix& m);
LinearBound linear_bound_from_cov(const SymMatrix& v, const SymMatrix& m, double hbar);

/// Ω-weighted L² distance between T and the right side of the extremal
/// equation, divided by √Cov(T,T). Zero for an extremizer.
double extremal_residual(const PolarState& s, const SymMatrix& m, const TestFunction& t);

struct FixedPointResult {
  TestFunction t;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Experimental damped iteration of the extremal equation. Each iterate is
/// centred and scaled to unit variance; no convergence guarantee.
FixedPointResult extremal_fixed_point(const PolarState& s, const SymMatrix& m, const TestFunction& init,
                                      double damping = 0.5, int max_iter = 200, double tol = 1e-8);

/// C_k = (k!!)²/(2k−1)!! for odd k in 1..99; 0 for even k.
double powerlaw_coefficient(int k);

/// L_Q(tanhⁿ q) on the λ = μ Pöschl–Teller state, closed form; 0 for even n.
double pt_bound_tanh_n(int mu, int n, double mass, double hbar = 1.0);

/// ⟨Q⟩ of the (λ, μ) Pöschl–Teller state: −ħ²μ²/2m + (ħ²/2m)·2μλ(λ+1)/(2λ+1).
double pt_mvqp(int lambda, int mu, double mass, double hbar = 1.0);

/**
 * Random smooth test functions: a polynomial of total degree ≤ 6 in the
 * standardized coordinates with coefficients uniform in [−1, 1], times
 * exp(−Σ((q_i − c_i)/w_i)⁴) with c, w the centre and half-width of each axis.
 */
class RandomTestFunctionGenerator {
 public:
  static constexpr int kMaxDegree = 12;

  explicit RandomTestFunctionGenerator(std::uint64_t seed, int max_degree = 6);
  TestFunction next(const PolarState& s);

 private:
  std::mt19937_64 rng_;
  int max_degree_;
  std::uint64_t count_ = 0;
};

}  // namespace qpot
