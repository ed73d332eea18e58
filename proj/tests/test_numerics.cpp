#include <numbers>

#include "qpot/numerics.hpp"
#include "qpot/states.hpp"
#include "support.hpp"

using namespace qpot;
using qpot::test::rel;

TEST_CASE("simpson weights") {
  const auto w5 = simpson_weights(5, 1.0);
  const std::vector<double> e5{1.0 / 3, 4.0 / 3, 2.0 / 3, 4.0 / 3, 1.0 / 3};
  for (std::size_t i = 0; i < 5; ++i) CHECK(w5[i] == doctest::Approx(e5[i]).epsilon(1e-15));
  // Cubics are integrated exactly for both interval parities.
  for (std::size_t n : {16, 17, 32, 33}) {
    const Grid g = Grid::line(-1.0, 2.0, n);
    const auto f = ScalarField::sample(g, [](auto q) { return q[0] * q[0] * q[0] - 2.0 * q[0] + 1.0; });
    CHECK(integrate(f) == doctest::Approx(3.75).epsilon(1e-13));
  }
}

TEST_CASE("integrate") {
  const Grid g = Grid::line(-8.0, 8.0, 513);
  CHECK(integrate(ScalarField::zeros(g)) == 0.0);
  const auto gauss = ScalarField::sample(g, [](auto q) { return std::exp(-q[0] * q[0]) / std::sqrt(std::numbers::pi); });
  CHECK(std::abs(integrate(gauss) - 1.0) < 1e-10);

  const double dq0 = std::sqrt(0.5);
  const PolarState ho = ho_eigenstate(0, dq0, ho_recommended_grid(0, dq0));
  CHECK(std::abs(integrate(ho.grid(), ho.density()) - 1.0) < 1e-8);

  const Grid g2 = Grid::cube(2, 6.0, 101);
  const auto f2 = ScalarField::sample(g2, [](auto q) { return std::exp(-q[0] * q[0] - 2.0 * q[1] * q[1]); });
  CHECK(rel(integrate(f2), std::numbers::pi / std::sqrt(2.0)) < 1e-9);
}

TEST_CASE("grid layout is row-major") {
  const Grid g({Axis{0.0, 1.0, 16}, Axis{0.0, 2.0, 17}, Axis{-1.0, 1.0, 18}});
  CHECK(g.size() == 16 * 17 * 18);
  CHECK(g.stride(2) == 1);
  CHECK(g.stride(1) == 18);
  const auto idx = g.unravel(18 * 3 + 5);
  CHECK(idx[0] == 0);
  CHECK(idx[1] == 3);
  CHECK(idx[2] == 5);
  CHECK(g.coord(18 * 3 + 5, 1) == doctest::Approx(3 * 2.0 / 16));
}

TEST_CASE("grid errors") {
  CHECK_THROWS_CODE(Grid::line(0.0, 1.0, 15), ErrorCode::InvalidGrid);
  CHECK_THROWS_CODE(Grid::line(1.0, 0.0, 32), ErrorCode::InvalidGrid);
  CHECK_THROWS_CODE(Grid(std::vector<Axis>(4, Axis{0.0, 1.0, 16})), ErrorCode::DimensionUnsupported);
  const Grid g = Grid::line(0.0, 1.0, 16);
  CHECK_THROWS_CODE(ScalarField(g, std::vector<double>(15, 0.0)), ErrorCode::GridMismatch);
  std::vector<double> v(16, 0.0);
  v[3] = std::nan("");
  CHECK_THROWS_CODE(ScalarField(g, v), ErrorCode::NonFiniteField);
}

TEST_CASE("fornberg weights") {
  const std::vector<double> off{-1.0, 0.0, 1.0};
  const auto d1 = fd_weights(1, off);
  CHECK(d1[0] == doctest::Approx(-0.5));
  CHECK(std::abs(d1[1]) < 1e-15);
  CHECK(d1[2] == doctest::Approx(0.5));
  const auto d2 = fd_weights(2, off);
  CHECK(d2[0] == doctest::Approx(1.0));
  CHECK(d2[1] == doctest::Approx(-2.0));
  const std::vector<double> off5{-2.0, -1.0, 0.0, 1.0, 2.0};
  const auto d15 = fd_weights(1, off5);
  CHECK(d15[0] == doctest::Approx(1.0 / 12));
  CHECK(d15[1] == doctest::Approx(-8.0 / 12));
  const std::vector<double> one_sided{0.0, 1.0, 2.0};
  const auto os = fd_weights(1, one_sided);
  CHECK(os[0] == doctest::Approx(-1.5));
  CHECK(os[1] == doctest::Approx(2.0));
  CHECK(os[2] == doctest::Approx(-0.5));
}

TEST_CASE("gradient") {
  const Grid g = Grid::cube(2, 1.0, 33);
  const auto c = ScalarField::sample(g, [](auto) { return 3.5; });
  for (const auto& d : gradient(c)) {
    for (double x : d.values()) CHECK(std::abs(x) < 1e-11);
  }
  const auto q1 = ScalarField::coordinate(g, 0);
  const auto gq = gradient(q1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(std::abs(gq[0][i] - 1.0) < 1e-11);
    CHECK(std::abs(gq[1][i]) < 1e-11);
  }

  const Grid line = Grid::line(-std::numbers::pi, std::numbers::pi, 257);
  const auto s = ScalarField::sample(line, [](auto q) { return std::sin(q[0]); });
  const auto ds = derivative(s, 0);
  double worst = 0.0;
  for (std::size_t i = 0; i < line.size(); ++i) worst = std::max(worst, std::abs(ds[i] - std::cos(line.coord(i, 0))));
  CHECK(worst < 1e-7);

  for (int order : {2, 4, 6, 8}) {
    const auto d = derivative(s, 0, order);
    double w = 0.0;
    for (std::size_t i = 0; i < line.size(); ++i) w = std::max(w, std::abs(d[i] - std::cos(line.coord(i, 0))));
    CHECK(w < std::pow(0.05, order));
  }
  CHECK_THROWS_CODE(derivative(s, 0, 3), ErrorCode::InvalidOrder);
}

TEST_CASE("hessian") {
  const Grid g = Grid::cube(2, 1.0, 21);
  const auto f = ScalarField::sample(g, [](auto q) { return q[0] * q[1]; });
  const auto h = hessian(f);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(std::abs(h[0][1][i] - 1.0) < 1e-10);
    CHECK(std::abs(h[1][0][i] - 1.0) < 1e-10);
    CHECK(std::abs(h[0][0][i]) < 1e-10);
    CHECK(std::abs(h[1][1][i]) < 1e-10);
  }
  const double a00 = 1.3, a01 = -0.4, a02 = 0.2, a11 = 0.7, a12 = 0.5, a22 = -1.1;
  const Grid g3 = Grid::cube(3, 1.0, 16);
  const auto quad = ScalarField::sample(g3, [&](auto q) {
    return 0.5 * (a00 * q[0] * q[0] + a11 * q[1] * q[1] + a22 * q[2] * q[2]) + a01 * q[0] * q[1] + a02 * q[0] * q[2] +
           a12 * q[1] * q[2];
  });
  const auto h3 = hessian(quad);
  const double a[3][3] = {{a00, a01, a02}, {a01, a11, a12}, {a02, a12, a22}};
  double worst = 0.0;
  for (std::size_t i = 0; i < g3.size(); ++i)
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) worst = std::max(worst, std::abs(h3[r][c][i] - a[r][c]));
  CHECK(worst < 1e-8);

  const Grid line = Grid::line(-1.0, 1.0, 201);
  const auto e = ScalarField::sample(line, [](auto q) { return std::exp(q[0]); });
  const auto he = hessian(e);
  for (std::size_t i = 5; i + 5 < line.size(); ++i) CHECK(std::abs(he[0][0][i] - e[i]) < 1e-6);
}

TEST_CASE("sym_eig") {
  const auto id = sym_eig(SymMatrix::identity(3));
  for (int i = 0; i < 3; ++i) CHECK(id.values(i) == doctest::Approx(1.0));
  const std::vector<double> d{5.0, 2.0};
  const auto e = sym_eig(SymMatrix::diagonal(d));
  CHECK(e.values(0) == doctest::Approx(2.0));
  CHECK(e.values(1) == doctest::Approx(5.0));
  CHECK(std::abs(std::abs(e.vectors(1, 0)) - 1.0) < 1e-14);
  Matrix a(2, 2);
  a << 2, 1, 1, 2;
  const auto ea = sym_eig(SymMatrix(a));
  CHECK(ea.values(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ea.values(1) == doctest::Approx(3.0).epsilon(1e-14));

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const SymMatrix m = test::random_spd(rng, 1 + trial % 6, -2.0, 3.0);
    const auto r = sym_eig(m);
    const Matrix recon = r.vectors * r.values.asDiagonal() * r.vectors.transpose();
    CHECK(test::max_abs(recon - m.matrix()) < 1e-12);
    CHECK(test::max_abs(r.vectors.transpose() * r.vectors - Matrix::Identity(m.matrix().rows(), m.matrix().rows())) < 1e-12);
    for (Eigen::Index i = 1; i < r.values.size(); ++i) CHECK(r.values(i - 1) <= r.values(i));
  }
}

TEST_CASE("generalized eigenvalues") {
  Matrix a(2, 2), b(2, 2);
  a << 2, 1, 1, 2;
  b << 1, 0, 0, 4;
  const Vector ev = gen_eig_spd(SymMatrix(a), SymMatrix(b));
  // det(A − λB) = 4λ² − 10λ + 3.
  const double disc = std::sqrt(100.0 - 48.0);
  CHECK(std::abs(ev(0) - (10.0 - disc) / 8.0) < 1e-12);
  CHECK(std::abs(ev(1) - (10.0 + disc) / 8.0) < 1e-12);

  const Vector same = gen_eig_spd(SymMatrix(a), SymMatrix(a));
  CHECK(std::abs(same(0) - 1.0) < 1e-12);
  CHECK(std::abs(same(1) - 1.0) < 1e-12);
  const std::vector<double> da{1.0, 4.0}, db{1.0, 2.0};
  const Vector r = gen_eig_spd(SymMatrix::diagonal(da), SymMatrix::diagonal(db));
  CHECK(r(0) == doctest::Approx(1.0));
  CHECK(r(1) == doctest::Approx(2.0));

  Matrix np(2, 2);
  np << 1, 2, 2, 1;
  CHECK_THROWS_CODE(gen_eig_spd(SymMatrix(a), SymMatrix(np)), ErrorCode::NotPositiveDefinite);
  Matrix asym(2, 2);
  asym << 1, 2, 2.1, 1;
  CHECK_THROWS_CODE(SymMatrix{asym}, ErrorCode::NotSymmetric);
}

TEST_CASE("cholesky and inverse") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const SymMatrix m = test::random_spd(rng, 1 + trial % 4);
    const Matrix l = cholesky_lower(m);
    CHECK(test::max_abs(l * l.transpose() - m.matrix()) < 1e-13);
    const auto n = m.matrix().rows();
    CHECK(test::max_abs(inverse_spd(m).matrix() * m.matrix() - Matrix::Identity(n, n)) < 1e-12);
  }
}
