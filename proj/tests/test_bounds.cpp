#include "qpot/bounds.hpp"
#include "qpot/builtin.hpp"
#include "support.hpp"

using namespace qpot;
using qpot::test::rel;

namespace {

TestFunction poly(const Grid& grid, double a, double b, double c) {
  return make_test_function(grid, "poly", [=](std::span<const double> q) {
    return a + b * q[0] + c * q[0] * q[0] * q[0];
  });
}

}  // namespace

TEST_CASE("bound functional is affine invariant") {
  const Grid grid = ho_recommended_grid(2, std::sqrt(0.5));
  const PolarState s = ho_eigenstate(2, std::sqrt(0.5), grid);
  const SymMatrix m = SymMatrix::scalar(1.0);
  const double base = bound_functional(s, m, poly(grid, 0.0, 1.0, 0.2)).value;
  CHECK(base > 0.0);
  CHECK(rel(bound_functional(s, m, poly(grid, 3.0, -2.5, -0.5)).value, base) < 1e-12);
  CHECK(rel(bound_functional(s, m, poly(grid, -1.0, 1e-3, 2e-4)).value, base) < 1e-12);
  CHECK_THROWS_CODE(bound_functional(s, m, poly(grid, 1.0, 0.0, 0.0)), ErrorCode::DegenerateTestFunction);
}

TEST_CASE("linear bound on oscillator states") {
  const double dq0 = std::sqrt(0.5), nu = 1.4;
  const SymMatrix m = SymMatrix::scalar(nu);
  for (int n = 0; n < 6; ++n) {
    const PolarState s = ho_eigenstate(n, dq0, ho_recommended_grid(n, dq0), 1.0);
    const auto lb = linear_bound(s, m);
    CHECK(rel(lb.bound, nu / (4.0 * (2 * n + 1))) < 1e-8);
    const auto ev = bound_functional(s, m, make_test_function(s.grid(), "q", [](auto q) { return q[0]; }));
    CHECK(rel(ev.value, lb.bound) < 1e-8);
    CHECK(ev.slack >= -1e-12);
    if (n == 0) CHECK(std::abs(ev.slack) < 1e-8 * ev.mvqp);
    if (n > 0) CHECK(ev.slack > 0.1 * ev.mvqp);
  }
}

TEST_CASE("auxiliary test functions reach the largest eigenvalue") {
  // 1-DF: L_Q(∂lnΩ²) = ⟨Q⟩, with an even point count to stay off the nodes.
  for (int n : {0, 1, 2, 3}) {
    const PolarState s = ho_eigenstate(n, std::sqrt(0.5), ho_recommended_grid(n, std::sqrt(0.5), 1024));
    const SymMatrix m = SymMatrix::scalar(0.8);
    const auto ti = auxiliary_ti(s, m);
    REQUIRE(ti.size() == 1);
    const double mv = mvqp(s, m);
    CHECK(rel(bound_functional(s, m, ti[0]).value, mv) < 1e-5);
    CHECK(rel(theorem2_bound(s, m), mv) < 1e-10);
  }
  // Gaussians: (ħ²/8) λ_max(V⁻¹M), which equals the linear bound.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const SymMatrix v = test::random_spd(rng, 2, 0.4, 1.5);
    const SymMatrix m = test::random_spd(rng, 2, 0.5, 2.0);
    const std::vector<double> zero(2, 0.0);
    const PolarState s = gaussian_polar(v, zero, gaussian_recommended_grid(v, zero, 201));
    const auto lb = linear_bound_from_cov(v, m, 1.0);
    CHECK(rel(theorem2_bound(s, m), lb.bound) < 1e-6);
    CHECK(rel(linear_bound(s, m).bound, lb.bound) < 1e-6);
    CHECK(lb.bound < mvqp(s, m));
    CHECK(lb.lower <= lb.upper);
  }
}

TEST_CASE("extremal residual") {
  const PolarState g = ho_eigenstate(0, std::sqrt(0.5), ho_recommended_grid(0, std::sqrt(0.5)));
  const SymMatrix m = SymMatrix::scalar(1.0);
  const auto lin = make_test_function(g.grid(), "q", [](auto q) { return q[0]; });
  const auto cub = make_test_function(g.grid(), "q3", [](auto q) { return q[0] * q[0] * q[0]; });
  CHECK(extremal_residual(g, m, lin) < 1e-6);
  CHECK(extremal_residual(g, m, cub) > 1e-2);

  const PolarState pt = poschl_teller_state(3, 3, pt_recommended_grid());
  const auto th = make_test_function(pt.grid(), "tanh", [](auto q) { return std::tanh(q[0]); });
  const auto th3 = make_test_function(pt.grid(), "tanh3", [](auto q) { return std::pow(std::tanh(q[0]), 3); });
  CHECK(extremal_residual(pt, m, th) < 1e-6);
  CHECK(extremal_residual(pt, m, th3) > 1e-2);

  const auto fp = extremal_fixed_point(g, m, cub);
  CHECK(fp.residual <= extremal_residual(g, m, cub));
}

TEST_CASE("power-law coefficients") {
  CHECK(powerlaw_coefficient(1) == 1.0);
  CHECK(rel(powerlaw_coefficient(3), 0.6) < 1e-15);
  CHECK(rel(powerlaw_coefficient(5), 0.2380952380952382) < 1e-14);
  CHECK(rel(powerlaw_coefficient(7), 0.08158508158508161) < 1e-14);
  CHECK(rel(powerlaw_coefficient(9), 0.025915261209378867) < 1e-14);
  CHECK(powerlaw_coefficient(4) == 0.0);
  for (int k = 3; k < 99; k += 2) CHECK(powerlaw_coefficient(k) < powerlaw_coefficient(k - 2));
  CHECK(powerlaw_coefficient(99) > 0.0);
}

TEST_CASE("tanh power bounds on Poschl-Teller states") {
  const double mass = 0.5;
  struct Case {
    int mu, n;
    double value;
  };
  const std::vector<Case> cases{{1, 1, 1.0 / 3.0},          {1, 3, 0.28},
                                {3, 1, 1.2857142857142858}, {3, 3, 0.9428571428571428},
                                {3, 5, 0.6029684601113172}, {10, 7, 0.7423923365952352}};
  const Grid grid = pt_recommended_grid();
  const SymMatrix m = SymMatrix::scalar(1.0 / mass);
  for (const auto& c : cases) {
    CAPTURE(c.mu);
    CAPTURE(c.n);
    CHECK(rel(pt_bound_tanh_n(c.mu, c.n, mass), c.value) < 1e-12);
    const PolarState s = poschl_teller_state(c.mu, c.mu, grid);
    const int n = c.n;
    const auto t = make_test_function(grid, "tanh^n", [n](auto q) { return std::pow(std::tanh(q[0]), n); });
    CHECK(rel(bound_functional(s, m, t).value, c.value) < 1e-7);
  }
  CHECK(pt_bound_tanh_n(4, 2, mass) == 0.0);
  // n = 1 saturates the bound.
  for (int mu : {1, 2, 5, 20}) CHECK(rel(pt_bound_tanh_n(mu, 1, mass), pt_mvqp(mu, mu, mass)) < 1e-12);
}

TEST_CASE("random test functions respect the bound") {
  RandomTestFunctionGenerator gen(11);
  for (const auto& b : builtin_catalog_1d()) {
    CAPTURE(b.name);
    const BoundContext ctx(b.state, b.metric);
    for (int i = 0; i < 20; ++i) {
      const auto ev = ctx.evaluate(gen.next(b.state));
      CHECK(ev.value <= ctx.mvqp() * (1.0 + 1e-8));
    }
  }
  // Same seed, same functions.
  const PolarState s = ho_eigenstate(1, std::sqrt(0.5), ho_recommended_grid(1, std::sqrt(0.5)));
  RandomTestFunctionGenerator a(3), b(3);
  for (int i = 0; i < 3; ++i) {
    const auto ta = a.next(s), tb = b.next(s);
    CHECK(std::equal(ta.values.values().begin(), ta.values.values().end(), tb.values.values().begin()));
  }
}

TEST_CASE("mean gradient by parts matches direct differencing") {
  const PolarState s = poschl_teller_state(4, 2, pt_recommended_grid());
  const BoundContext ctx(s, SymMatrix::scalar(1.0));
  const auto t = make_test_function(s.grid(), "t", [](auto q) { return std::sin(q[0]) * std::exp(-0.1 * q[0] * q[0]); });
  CHECK(std::abs(ctx.mean_gradient(t.values)(0) - ctx.mean_gradient_direct(t.values)(0)) < 1e-8);
}
