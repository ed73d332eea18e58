#include <numbers>

#include "qpot/specfun.hpp"
#include "support.hpp"

using namespace qpot;
using qpot::test::rel;

TEST_CASE("hermite") {
  CHECK(hermite(0, 0.37) == 1.0);
  CHECK(hermite(1, 2.0) == 4.0);
  CHECK(hermite(4, 1.0) == doctest::Approx(-20.0).epsilon(1e-15));
  CHECK(rel(hermite(5, 0.7), 34.49824) < 1e-13);
  CHECK(rel(hermite(10, 1.3), -66123.41303306242) < 1e-13);
  CHECK_THROWS_CODE(hermite(201, 0.0), ErrorCode::DegreeOutOfRange);
  CHECK_THROWS_CODE(hermite(-1, 0.0), ErrorCode::DegreeOutOfRange);
}

TEST_CASE("hermite functions") {
  CHECK(rel(hermite_function(3, 0.9), -0.3592396256341327) < 1e-13);
  CHECK(rel(hermite_function(40, 2.5), -0.26498308850855745) < 1e-11);
  CHECK(rel(hermite_function(0, 0.0), std::pow(std::numbers::pi, -0.25)) < 1e-15);
  // Far tails stay finite where H_n e^{−x²/2} would overflow.
  CHECK(std::isfinite(hermite_function(200, 30.0)));
}

TEST_CASE("associated legendre") {
  CHECK(assoc_legendre(1, 0, 0.3) == doctest::Approx(0.3));
  CHECK(assoc_legendre(1, 1, 0.6) == doctest::Approx(-0.8).epsilon(1e-15));
  CHECK(rel(assoc_legendre(2, 1, 0.5), -3.0 * 0.5 * std::sqrt(0.75)) < 1e-14);
  CHECK(rel(assoc_legendre(3, 2, 0.4), 5.039999999999999) < 1e-13);
  CHECK(rel(assoc_legendre(5, 3, -0.3), 8.659144616061972) < 1e-13);
  CHECK_THROWS_CODE(assoc_legendre(2, 3, 0.1), ErrorCode::InvalidOrder);
  CHECK_THROWS_CODE(assoc_legendre(2, 1, 1.5), ErrorCode::ArgumentOutOfDomain);
  // The sech-argument overload agrees with the plain one.
  const double q = 0.8, x = std::tanh(q), s = 1.0 / std::cosh(q);
  CHECK(rel(assoc_legendre_normalized(4, 2, x, s), assoc_legendre_normalized(4, 2, x)) < 1e-12);
}

TEST_CASE("ln_gamma and double factorial") {
  CHECK(std::abs(ln_gamma(1.0)) < 1e-15);
  CHECK(std::abs(ln_gamma(0.5) - 0.5723649429247001) < 1e-14);
  CHECK(rel(ln_gamma(0.3), 1.0957979948180756) < 1e-14);
  CHECK(rel(ln_gamma(10.5), 13.940625219403763) < 1e-14);
  CHECK(rel(ln_gamma(150.2), 601.0110639258921) < 1e-14);
  CHECK_THROWS_CODE(ln_gamma(0.0), ErrorCode::ArgumentOutOfDomain);
  CHECK(double_factorial(5) == 15.0);
  CHECK(double_factorial(-1) == 1.0);
  CHECK(double_factorial(0) == 1.0);
  CHECK(double_factorial(8) == 384.0);
  CHECK_THROWS_CODE(double_factorial(-2), ErrorCode::ArgumentOutOfDomain);
}

TEST_CASE("Pöschl–Teller position variance") {
  CHECK(pt_variance_integrand(3, 0.0) == 0.0);
  // μ = 1 has the closed form π²/12.
  CHECK(rel(pt_position_variance(1), std::numbers::pi * std::numbers::pi / 12.0) < 1e-10);
  CHECK(rel(pt_position_variance(2), 0.3224670334241132) < 1e-10);
  CHECK(rel(pt_position_variance(3), 0.19746703342411323) < 1e-10);
  CHECK(rel(pt_position_variance(5), 0.11066147786855766) < 1e-10);
  CHECK(rel(pt_position_variance(10), 0.052583167840842875) < 1e-10);
  CHECK(rel(pt_position_variance(40), 0.012657551920645514) < 1e-10);
  double prev = pt_position_variance(1);
  for (int mu = 2; mu <= 200; mu += 7) {
    const double v = pt_position_variance(mu);
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_CODE(pt_position_variance(0), ErrorCode::OrderOutOfRange);
  CHECK_THROWS_CODE(pt_position_variance(201), ErrorCode::OrderOutOfRange);
}

TEST_CASE("Pöschl–Teller energy") {
  CHECK(pt_energy(3, 0.5) == doctest::Approx(-9.0));
  CHECK(pt_energy_linear_mu(3, 0.5) == doctest::Approx(-3.0));
  CHECK(pt_energy(1, 1.0, 2.0) == doctest::Approx(-2.0));
}
