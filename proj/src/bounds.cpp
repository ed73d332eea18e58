#include "qpot/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qpot/specfun.hpp"

namespace qpot {

namespace {

using Idx = Eigen::Index;

void check_metric(const PolarState& s, const SymMatrix& m) {
  if (m.dim() != s.dim()) fail(ErrorCode::DimensionMismatch, "M order differs from the state");
  cholesky_lower(m);
}

// Centred T and its variance under the state's Ω².
struct Centred {
  std::vector<double> dt;
  double mean = 0.0;
  double cov = 0.0;
};

Centred centre(const PolarState& s, const ScalarField& t) {
  if (!(s.grid() == t.grid())) fail(ErrorCode::GridMismatch, "test function grid differs from the state");
  Centred c;
  c.mean = weighted_mean(s, t);
  c.dt.resize(t.size());
  std::vector<double> buf(t.size());
  double second = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    c.dt[i] = t[i] - c.mean;
    buf[i] = s.omega()[i] * s.omega()[i] * c.dt[i] * c.dt[i];
  }
  c.cov = integrate(s.grid(), buf);
  for (std::size_t i = 0; i < t.size(); ++i) buf[i] = s.omega()[i] * s.omega()[i] * t[i] * t[i];
  second = integrate(s.grid(), buf);
  if (!(c.cov > 1e-14 * std::max(1.0, second))) {
    fail(ErrorCode::DegenerateTestFunction, "Cov(T₀,T₀) vanishes; T₀ is constant on the support");
  }
  return c;
}

Vector by_parts(const PolarState& s, const AmplitudeGradient& ag, const std::vector<double>& dt) {
  const std::size_t n = s.dim();
  Vector g(static_cast<Idx>(n));
  std::vector<double> buf(dt.size());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < dt.size(); ++i) buf[i] = s.omega()[i] * dt[i] * ag.d_omega[k][i];
    g(static_cast<Idx>(k)) = -2.0 * integrate(s.grid(), buf);
  }
  return g;
}

}  // namespace

BoundContext::BoundContext(const PolarState& s, const SymMatrix& m)
    : state_(s), m_(m), ag_((check_metric(s, m), amplitude_gradient(s))),
      mvqp_(0.5 * s.hbar() * s.hbar() * (ag_.g * m.matrix()).trace()) {}

Vector BoundContext::mean_gradient(const ScalarField& t) const {
  return by_parts(state_, ag_, centre(state_, t).dt);
}

Vector BoundContext::mean_gradient_direct(const ScalarField& t) const {
  Vector g(static_cast<Idx>(state_.dim()));
  for (std::size_t k = 0; k < state_.dim(); ++k) {
    g(static_cast<Idx>(k)) = weighted_mean(state_, derivative(t, k, kPhysicsOrder));
  }
  return g;
}

BoundEvaluation BoundContext::evaluate(const TestFunction& t0) const {
  const Centred c = centre(state_, t0.values);
  const Vector g = by_parts(state_, ag_, c.dt);
  const double h2 = state_.hbar() * state_.hbar();
  const double value = 0.125 * h2 * g.dot(m_.matrix() * g) / c.cov;
  return BoundEvaluation{value, t0.label, mvqp_, mvqp_ - value};
}

BoundEvaluation bound_functional(const PolarState& s, const SymMatrix& m, const TestFunction& t0) {
  return BoundContext(s, m).evaluate(t0);
}

std::vector<TestFunction> auxiliary_ti(const PolarState& s, const SymMatrix& m) {
  check_metric(s, m);
  const auto ag = amplitude_gradient(s);
  if (ag.masked_mass > 0.05) {
    fail(ErrorCode::NodeDominatedState, "more than 5% of the probability sits on masked cells");
  }
  const SymEigen e = sym_eig(m);
  const std::size_t n = s.dim();
  std::vector<TestFunction> out;
  for (std::size_t j = 0; j < n; ++j) {
    const double lam = e.values(static_cast<Idx>(j));
    std::vector<double> v(s.grid().size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (ag.mask[i]) continue;
      double proj = 0.0;
      for (std::size_t k = 0; k < n; ++k) proj += e.vectors(static_cast<Idx>(k), static_cast<Idx>(j)) * ag.d_omega[k][i];
      v[i] = 2.0 * std::sqrt(lam) * proj / s.omega()[i];
    }
    out.push_back(TestFunction{ScalarField(s.grid(), std::move(v)), "T_" + std::to_string(j + 1)});
  }
  return out;
}

double theorem2_bound(const PolarState& s, const SymMatrix& m) {
  check_metric(s, m);
  const auto ev = q_matrix_eigenvalues(amplitude_gradient(s).g, m);
  return 0.125 * s.hbar() * s.hbar() * ev(ev.size() - 1);
}

LinearBound linear_bound_from_cov(const SymMatrix& v, const SymMatrix& m, double hbar) {
  if (v.dim() != m.dim()) fail(ErrorCode::DimensionMismatch, "V and M orders differ");
  const Vector ev = gen_eig_spd(m, v);
  const double f = 0.125 * hbar * hbar;
  return LinearBound{f * ev(0), f * ev(ev.size() - 1), f * ev(ev.size() - 1)};
}

LinearBound linear_bound(const PolarState& s, const SymMatrix& m) {
  check_metric(s, m);
  return linear_bound_from_cov(position_covariance(s), m, s.hbar());
}

LinearBound linear_bound(const GaussianPureState& g, const SymMatrix& m) {
  return linear_bound_from_cov(position_cov(g), m, g.hbar);
}

namespace {

// Ω·(T − rhs of the extremal equation), centred T given.
std::vector<double> extremal_gap(const PolarState& s, const SymMatrix& m, const AmplitudeGradient& ag,
                                 const Centred& c) {
  const Vector g = by_parts(s, ag, c.dt);
  const double h2 = s.hbar() * s.hbar();
  const double lq = 0.125 * h2 * g.dot(m.matrix() * g) / c.cov;
  if (!(lq > 0.0)) fail(ErrorCode::DegenerateTestFunction, "L_Q(T) = 0; the extremal equation is undefined");
  const Vector mg = m.matrix() * g;
  std::vector<double> gap(c.dt.size());
  for (std::size_t i = 0; i < gap.size(); ++i) {
    double proj = 0.0;
    for (std::size_t k = 0; k < s.dim(); ++k) proj += ag.d_omega[k][i] * mg(static_cast<Idx>(k));
    gap[i] = s.omega()[i] * c.dt[i] + 0.25 * h2 * proj / lq;
  }
  return gap;
}

double residual_from_gap(const PolarState& s, const std::vector<double>& gap, double cov) {
  std::vector<double> sq(gap.size());
  for (std::size_t i = 0; i < gap.size(); ++i) sq[i] = gap[i] * gap[i];
  return std::sqrt(std::max(0.0, integrate(s.grid(), sq)) / cov);
}

}  // namespace

double extremal_residual(const PolarState& s, const SymMatrix& m, const TestFunction& t) {
  check_metric(s, m);
  const auto ag = amplitude_gradient(s);
  const Centred c = centre(s, t.values);
  return residual_from_gap(s, extremal_gap(s, m, ag, c), c.cov);
}

FixedPointResult extremal_fixed_point(const PolarState& s, const SymMatrix& m, const TestFunction& init,
                                      double damping, int max_iter, double tol) {
  check_metric(s, m);
  if (!(damping > 0.0 && damping <= 1.0)) fail(ErrorCode::ArgumentOutOfDomain, "damping must lie in (0, 1]");
  const auto ag = amplitude_gradient(s);
  const std::size_t size = s.grid().size();
  auto normalise = [&](const std::vector<double>& v) {
    ScalarField f(s.grid(), v);
    Centred c = centre(s, f);
    const double scale = 1.0 / std::sqrt(c.cov);
    for (double& x : c.dt) x *= scale;
    return c.dt;
  };
  std::vector<double> t = normalise(std::vector<double>(init.values.values().begin(), init.values.values().end()));
  FixedPointResult out{TestFunction{ScalarField(s.grid(), t), init.label + " (fixed point)"}, 0, 0.0, false};
  for (int it = 1; it <= max_iter; ++it) {
    const Centred c = centre(s, ScalarField(s.grid(), t));
    const auto gap = extremal_gap(s, m, ag, c);
    out.residual = residual_from_gap(s, gap, c.cov);
    out.iterations = it - 1;
    if (out.residual < tol) {
      out.converged = true;
      break;
    }
    // rhs = T − gap/Ω on unmasked cells; masked cells keep the mean.
    std::vector<double> next(size);
    for (std::size_t i = 0; i < size; ++i) {
      const double rhs = ag.mask[i] ? 0.0 : c.dt[i] - gap[i] / s.omega()[i];
      next[i] = (1.0 - damping) * c.dt[i] + damping * rhs;
    }
    t = normalise(next);
    out.iterations = it;
  }
  out.t = TestFunction{ScalarField(s.grid(), t), init.label + " (fixed point)"};
  if (!out.converged) {
    const Centred c = centre(s, out.t.values);
    out.residual = residual_from_gap(s, extremal_gap(s, m, ag, c), c.cov);
    out.converged = out.residual < tol;
  }
  return out;
}

double powerlaw_coefficient(int k) {
  if (k < 1 || k > 99) fail(ErrorCode::OutOfRange, "power-law exponent must lie in 1..99");
  if (k % 2 == 0) return 0.0;
  // C_{j+2}/C_j = (j+2)²/((2j+1)(2j+3))
  double c = 1.0;
  for (int j = 1; j < k; j += 2) c *= static_cast<double>((j + 2) * (j + 2)) / ((2.0 * j + 1.0) * (2.0 * j + 3.0));
  return c;
}

double pt_bound_tanh_n(int mu, int n, double mass, double hbar) {
  if (mu < 1 || mu > 200 || n < 1 || n > 200) fail(ErrorCode::OutOfRange, "need 1 <= mu, n <= 200");
  if (!(mass > 0.0)) fail(ErrorCode::ArgumentOutOfDomain, "mass must be positive");
  if (n % 2 == 0) return 0.0;
  const double lg = ln_gamma(mu + 0.5) + ln_gamma(n + mu + 0.5) + 2.0 * ln_gamma(0.5 * n + 1.0) -
                    0.5 * std::log(std::numbers::pi) - ln_gamma(n + 0.5) - 2.0 * ln_gamma(0.5 * n + mu + 1.0);
  return hbar * hbar * mu * mu / (2.0 * mass) * std::exp(lg);
}

double pt_mvqp(int lambda, int mu, double mass, double hbar) {
  if (mu < 1 || lambda < mu) fail(ErrorCode::InvalidOrder, "need 1 <= mu <= lambda");
  const double k = hbar * hbar / (2.0 * mass);
  return pt_energy(mu, mass, hbar) + k * 2.0 * mu * lambda * (lambda + 1.0) / (2.0 * lambda + 1.0);
}

RandomTestFunctionGenerator::RandomTestFunctionGenerator(std::uint64_t seed, int max_degree)
    : rng_(seed), max_degree_(max_degree) {
  if (max_degree < 1 || max_degree > 12) fail(ErrorCode::OutOfRange, "degree must lie in 1..12");
}

TestFunction RandomTestFunctionGenerator::next(const PolarState& s) {
  const Grid& grid = s.grid();
  const std::size_t n = grid.dim();
  const Vector mean = position_mean(s);
  const SymMatrix v = position_covariance(s);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);

  // Monomials x^e with total degree ≤ max_degree.
  std::vector<std::array<int, 3>> exps;
  for (int a = 0; a <= max_degree_; ++a)
    for (int b = 0; b <= (n > 1 ? max_degree_ - a : 0); ++b)
      for (int c = 0; c <= (n > 2 ? max_degree_ - a - b : 0); ++c) exps.push_back({a, b, c});
  std::vector<double> coeffs(exps.size());
  for (double& x : coeffs) x = coef(rng_);

  std::array<double, 3> centre{}, width{}, sigma{}, mu{};
  for (std::size_t k = 0; k < n; ++k) {
    centre[k] = 0.5 * (grid.axis(k).lower + grid.axis(k).upper);
    width[k] = 0.5 * (grid.axis(k).upper - grid.axis(k).lower);
    sigma[k] = std::sqrt(v(k, k));
    mu[k] = mean(static_cast<Idx>(k));
  }
  std::vector<double> vals(grid.size());
  std::array<double, 3> q{};
  for (std::size_t i = 0; i < vals.size(); ++i) {
    grid.point(i, std::span<double>(q.data(), n));
    std::array<std::array<double, kMaxDegree + 1>, 3> pw{};
    double env = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double x = (q[k] - mu[k]) / sigma[k];
      pw[k][0] = 1.0;
      for (int e = 1; e <= max_degree_; ++e) pw[k][static_cast<std::size_t>(e)] = pw[k][static_cast<std::size_t>(e - 1)] * x;
      const double y = (q[k] - centre[k]) / width[k];
      env += y * y * y * y;
    }
    double p = 0.0;
    for (std::size_t j = 0; j < exps.size(); ++j) {
      double term = coeffs[j];
      for (std::size_t k = 0; k < n; ++k) term *= pw[k][static_cast<std::size_t>(exps[j][k])];
      p += term;
    }
    vals[i] = p * std::exp(-env);
  }
  return TestFunction{ScalarField(grid, std::move(vals)), "random#" + std::to_string(count_++)};
}

}  // namespace qpot
