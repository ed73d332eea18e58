#include <numbers>

#include "qpot/covariance.hpp"
#include "qpot/gaussian.hpp"
#include "qpot/qpotential.hpp"
#include "support.hpp"

using namespace qpot;
using qpot::test::max_abs;
using qpot::test::rel;

namespace {

QuadraticHamiltonian random_hamiltonian(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 0.5);
  const Eigen::Index k = static_cast<Eigen::Index>(n);
  Matrix c(k, k), l(k, k);
  Vector xp(k), xq(k);
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = g(rng);
  for (Eigen::Index i = 0; i < l.size(); ++i) l.data()[i] = g(rng);
  for (Eigen::Index i = 0; i < k; ++i) {
    xp(i) = g(rng);
    xq(i) = g(rng);
  }
  return QuadraticHamiltonian(test::random_spd(rng, n), c, SymMatrix::symmetrized(l), xp, xq);
}

GaussianPureState vacuum(std::size_t n, double hbar = 1.0) {
  const std::vector<double> z(n, 0.0);
  return coherent_state(z, z, hbar);
}

}  // namespace

TEST_CASE("symplectic propagator closed forms") {
  const std::vector<double> nu{0.7, 1.3, 2.1};
  const auto h = QuadraticHamiltonian::oscillator(nu);
  CHECK(max_abs(symplectic_propagator(h, 0.0).matrix() - Matrix::Identity(6, 6)) < 1e-15);
  const double t = 0.9;
  const auto s = symplectic_propagator(h, t);
  for (Eigen::Index i = 0; i < 3; ++i) {
    const double w = nu[static_cast<std::size_t>(i)] * t;
    CHECK(std::abs(s.a()(i, i) - std::cos(w)) < 1e-12);
    CHECK(std::abs(s.b()(i, i) - std::sin(w)) < 1e-12);
    CHECK(std::abs(s.c()(i, i) + std::sin(w)) < 1e-12);
    CHECK(std::abs(s.d()(i, i) - std::cos(w)) < 1e-12);
  }
  const auto inv = symplectic_propagator(QuadraticHamiltonian::inverted(1.4), 0.6);
  CHECK(std::abs(inv.a()(0, 0) - std::cosh(0.84)) < 1e-12);
  CHECK(std::abs(inv.b()(0, 0) - std::sinh(0.84)) < 1e-12);
  CHECK(std::abs(inv.c()(0, 0) - std::sinh(0.84)) < 1e-12);
}

TEST_CASE("symplectic suite on random Hamiltonians") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ut(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    const auto h = random_hamiltonian(rng, n);
    const double t1 = ut(rng), t2 = ut(rng);
    const auto s1 = symplectic_propagator(h, t1);
    const auto s2 = symplectic_propagator(h, t2);
    const auto s12 = symplectic_propagator(h, t1 + t2);
    const double scale = std::max(1.0, s12.matrix().cwiseAbs().maxCoeff());
    CHECK(SymplecticMatrix::constraint_residual(s12.matrix()) < 1e-9 * scale * scale);
    CHECK(max_abs((s1 * s2).matrix() - s12.matrix()) < 1e-9 * scale);
  }
}

TEST_CASE("symplectic validation") {
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = 2.0;
  CHECK_THROWS_CODE(SymplecticMatrix{bad}, ErrorCode::NotSymplectic);
  const Matrix j = symplectic_form(2);
  CHECK(max_abs(j * j + Matrix::Identity(4, 4)) == 0.0);
}

TEST_CASE("sigma matrix") {
  const CMatrix id = sigma_matrix(SymplecticMatrix::identity(2));
  CHECK(max_abs((id - CMatrix::Identity(2, 2)).cwiseAbs()) < 1e-15);
  const std::vector<double> sq{2.0, 0.5};
  const auto g = squeezed_state(sq);
  const CMatrix s = sigma_matrix(g.S);
  CHECK(std::abs(s(0, 0).real() - 0.25) < 1e-15);
  CHECK(std::abs(s(1, 1).real() - 4.0) < 1e-14);
  CHECK(s.imag().cwiseAbs().maxCoeff() == 0.0);

  const std::vector<double> nu{1.0};
  const auto quarter = evolve(vacuum(1), QuadraticHamiltonian::oscillator(nu), std::numbers::pi / 2);
  const CMatrix sq4 = sigma_matrix(quarter.S);
  CHECK(std::abs(sq4(0, 0) - std::complex<double>(1.0, 0.0)) < 1e-12);
}

TEST_CASE("covariance blocks") {
  CHECK(max_abs(position_cov(vacuum(2)).matrix() - 0.5 * Matrix::Identity(2, 2)) < 1e-15);
  const std::vector<double> a{1.5, 0.8, 3.0};
  const double hbar = 0.7;
  const auto g = squeezed_state(a, hbar);
  for (std::size_t i = 0; i < 3; ++i) CHECK(rel(position_cov(g)(i, i), 0.5 * hbar * a[i] * a[i]) < 1e-14);

  // Evolved squeeze under the oscillator.
  const std::vector<double> nu{0.6, 1.1, 1.7};
  const double t = 1.3;
  const auto gt = evolve(g, QuadraticHamiltonian::oscillator(nu), t);
  for (std::size_t i = 0; i < 3; ++i) {
    const double c = std::cos(nu[i] * t), s = std::sin(nu[i] * t);
    const double expect = 0.5 * hbar * (c * c * a[i] * a[i] + s * s / (a[i] * a[i]));
    CHECK(std::abs(position_cov(gt)(i, i) - expect) < 1e-8 * expect);
  }
  // Free particle: Cov(q,p) = ħt/2 grows positive.
  const QuadraticHamiltonian free(SymMatrix::scalar(1.0), Matrix::Zero(1, 1), SymMatrix::scalar(0.0), Vector::Zero(1),
                                  Vector::Zero(1));
  const auto gf = evolve(vacuum(1), free, 2.0);
  CHECK(std::abs(position_momentum_cov(gf)(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(momentum_cov(gf)(0, 0) - 0.5) < 1e-12);
}

TEST_CASE("mean evolution") {
  const std::vector<double> nu{0.9, 1.6}, q0{0.3, -1.2}, p0{0.8, 0.4};
  const auto g = coherent_state(q0, p0);
  const auto same = evolve(g, QuadraticHamiltonian::oscillator(nu), 0.0);
  CHECK(max_abs(same.S.matrix() - g.S.matrix()) < 1e-15);
  const double t = 2.3;
  const auto gt = evolve(g, QuadraticHamiltonian::oscillator(nu), t);
  for (Eigen::Index i = 0; i < 2; ++i) {
    const double w = nu[static_cast<std::size_t>(i)] * t;
    const double qi = q0[static_cast<std::size_t>(i)], pi = p0[static_cast<std::size_t>(i)];
    CHECK(std::abs(gt.eta_q(i) - (std::cos(w) * qi + std::sin(w) * pi)) < 1e-8);
    CHECK(std::abs(gt.eta_p(i) - (std::cos(w) * pi - std::sin(w) * qi)) < 1e-8);
  }
  // Constant force F on a free particle: η_q = q + pt − Ft²/2.
  const double f = 0.6;
  Vector xq(1);
  xq << f;
  const QuadraticHamiltonian push(SymMatrix::scalar(1.0), Matrix::Zero(1, 1), SymMatrix::scalar(0.0), Vector::Zero(1), xq);
  const std::vector<double> a{0.5}, b{1.0};
  const auto gp = evolve(coherent_state(a, b), push, 1.5);
  CHECK(std::abs(gp.eta_q(0) - (0.5 + 1.5 - 0.5 * f * 2.25)) < 1e-10);
  CHECK(std::abs(gp.eta_p(0) - (1.0 - f * 1.5)) < 1e-10);

  // Inverted oscillator spreads as cosh(2νt).
  for (double tt : {0.0, 0.25, 0.5, 1.0}) {
    const auto gi = evolve(vacuum(1), QuadraticHamiltonian::inverted(1.0), tt);
    CHECK(std::abs(position_cov(gi)(0, 0) - 0.5 * std::cosh(2.0 * tt)) < 1e-10);
  }
}

TEST_CASE("quantum potential of Gaussians") {
  const std::vector<double> nu{1.7};
  const SymMatrix m = SymMatrix::scalar(nu[0]);
  CHECK(rel(gaussian_mvqp(vacuum(1), m), nu[0] / 4.0) < 1e-14);
  for (double t : {0.0, 0.25, 0.5, 1.0}) {
    const auto gi = evolve(vacuum(1), QuadraticHamiltonian::inverted(nu[0]), t);
    CHECK(rel(gaussian_mvqp(gi, m), nu[0] / (4.0 * std::cosh(2.0 * nu[0] * t))) < 1e-10);
  }
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 4);
    const auto h = random_hamiltonian(rng, n);
    const auto g = evolve(vacuum(n), h, 0.7);
    const SymMatrix mm = test::random_spd(rng, n);
    const std::vector<double> eta(g.eta_q.data(), g.eta_q.data() + n);
    CHECK(rel(gaussian_qp(g, mm, eta), 2.0 * gaussian_mvqp(g, mm)) < 1e-12);
  }
}

TEST_CASE("Gaussian polar form") {
  const std::vector<double> q0{0.4}, p0{-0.9};
  const double hbar = 1.0;
  const auto g = coherent_state(q0, p0, hbar);
  const Grid grid = gaussian_recommended_grid(position_cov(g), q0, 513);
  const PolarState s = to_polar(g, grid);
  const PolarState ref = gaussian_polar(SymMatrix::scalar(0.5), q0, grid, hbar);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(s.omega()[i] - ref.omega()[i]) < 1e-13);
    CHECK(std::abs(s.phase()[i] - s.phase()[0] - p0[0] * (grid.coord(i, 0) - grid.coord(0, 0))) < 1e-12);
  }

  // b = c = 0 keeps the phase linear.
  const std::vector<double> a{1.8};
  const auto sq = squeezed_state(a);
  const PolarState ps = to_polar(sq, gaussian_recommended_grid(position_cov(sq), std::vector<double>{0.0}, 257));
  const auto d2 = derivative(derivative(ps.phase(), 0, 8), 0, 8);
  for (double x : d2.values()) CHECK(std::abs(x) < 1e-9);

  // Grid quantities match the closed forms, including the sign of Vqp.
  const std::vector<double> nu{1.0, 0.6};
  const std::vector<double> a2{1.4, 0.8};
  const auto g2 = evolve(squeezed_state(a2), QuadraticHamiltonian::oscillator(nu), 0.9);
  const SymMatrix m2 = SymMatrix::diagonal(nu);
  const PolarState p2 = to_polar(g2, gaussian_recommended_grid(position_cov(g2), std::vector<double>{0.0, 0.0}, 201));
  CHECK(rel(mvqp(p2, m2), gaussian_mvqp(g2, m2)) < 1e-5);
  const auto cov = covariance_report(p2, m2);
  CHECK(max_abs(cov.Vqp - position_momentum_cov(g2)) < 1e-6);
  CHECK(max_abs(cov.Vc.matrix() - gaussian_vc(g2).matrix()) < 1e-6);

  CHECK_THROWS_CODE(to_polar(g, Grid::line(-1.0, 1.0, 101)), ErrorCode::BoxTooSmall);
}

TEST_CASE("matrix exponential") {
  Matrix rot(2, 2);
  rot << 0, -3.0, 3.0, 0;
  const Matrix e = expm(rot);
  CHECK(std::abs(e(0, 0) - std::cos(3.0)) < 1e-13);
  CHECK(std::abs(e(1, 0) - std::sin(3.0)) < 1e-13);
  Matrix nil = Matrix::Zero(3, 3);
  nil(0, 1) = 2.0;
  nil(1, 2) = 5.0;
  const Matrix en = expm(nil);
  CHECK(std::abs(en(0, 2) - 5.0) < 1e-13);
  Matrix big = Matrix::Identity(2, 2) * 1e30;
  CHECK_THROWS_CODE(expm(big), ErrorCode::ExpDivergence);
}
