#include "qpot/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qpot/error.hpp"
#include "qpot/numerics.hpp"

namespace qpot {

double hermite(int n, double x) {
  if (n < 0 || n > 200) fail(ErrorCode::DegreeOutOfRange, "Hermite degree " + std::to_string(n));
  if (n == 0) return 1.0;
  double hm = 1.0, h = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double hp = 2.0 * x * h - 2.0 * k * hm;
    hm = h;
    h = hp;
  }
  return h;
}

double hermite_function(int n, double x) {
  if (n < 0 || n > 200) fail(ErrorCode::DegreeOutOfRange, "Hermite degree " + std::to_string(n));
  double pm = 0.0;
  double p = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  for (int k = 0; k < n; ++k) {
    const double pp = std::sqrt(2.0 / (k + 1)) * x * p - std::sqrt(static_cast<double>(k) / (k + 1)) * pm;
    pm = p;
    p = pp;
  }
  return p;
}

namespace {

void check_legendre(int lambda, int mu, double x) {
  if (mu < 0 || lambda < mu || lambda > 100) {
    fail(ErrorCode::InvalidOrder, "need 0 <= mu <= lambda <= 100");
  }
  if (!(x >= -1.0 && x <= 1.0)) fail(ErrorCode::ArgumentOutOfDomain, "x must lie in [-1, 1]");
}

}  // namespace

double assoc_legendre(int lambda, int mu, double x) {
  check_legendre(lambda, mu, x);
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  double pmm = 1.0;
  for (int k = 1; k <= mu; ++k) pmm *= -(2.0 * k - 1.0) * s;
  if (lambda == mu) return pmm;
  double pm1 = x * (2.0 * mu + 1.0) * pmm;
  for (int l = mu + 2; l <= lambda; ++l) {
    const double pl = ((2.0 * l - 1.0) * x * pm1 - (l + mu - 1.0) * pmm) / (l - mu);
    pmm = pm1;
    pm1 = pl;
  }
  return pm1;
}

double assoc_legendre_normalized(int lambda, int mu, double x) {
  return assoc_legendre_normalized(lambda, mu, x, std::sqrt((1.0 - x) * (1.0 + x)));
}

double assoc_legendre_normalized(int lambda, int mu, double x, double s) {
  check_legendre(lambda, mu, x);
  double pmm = 1.0;
  for (int k = 1; k <= mu; ++k) pmm *= -std::sqrt((2.0 * k - 1.0) / (2.0 * k)) * s;
  if (lambda == mu) return pmm;
  double pm1 = x * std::sqrt(2.0 * mu + 1.0) * pmm;
  for (int l = mu + 2; l <= lambda; ++l) {
    const double a = std::sqrt(static_cast<double>(l * l - mu * mu));
    const double b = std::sqrt(static_cast<double>((l - 1) * (l - 1) - mu * mu));
    const double pl = ((2.0 * l - 1.0) * x * pm1 - b * pmm) / a;
    pmm = pm1;
    pm1 = pl;
  }
  return pm1;
}

double ln_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorCode::ArgumentOutOfDomain, "ln_gamma needs x > 0");
  if (x < 0.5) {
    // Γ(x) = Γ(x+1)/x keeps the Lanczos sum in its accurate range.
    return ln_gamma(x + 1.0) - std::log(x);
  }
  static constexpr std::array<double, 9> c = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  const double z = x - 1.0;
  double a = c[0];
  const double t = z + 7.5;
  for (int i = 1; i < 9; ++i) a += c[static_cast<std::size_t>(i)] / (z + i);
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

double double_factorial(int k) {
  if (k < -1 || k > 170) fail(ErrorCode::ArgumentOutOfDomain, "double factorial needs -1 <= k <= 170");
  double r = 1.0;
  for (int j = k; j > 1; j -= 2) r *= j;
  return r;
}

double pt_variance_integrand(int mu, double q) {
  if (q == 0.0) return 0.0;
  const double aq = std::abs(q);
  const double log_cosh = aq + std::log1p(std::exp(-2.0 * aq)) - std::numbers::ln2;
  return q * q * std::exp(-2.0 * mu * log_cosh);
}

double pt_position_variance(int mu) {
  if (mu < 1 || mu > 200) fail(ErrorCode::OrderOutOfRange, "mu must lie in 1..200");
  // Cut where sech^{2μ} drops below e^{-80}; the q² factor is dwarfed there.
  const double cut = std::acosh(std::exp(40.0 / mu)) + 2.0;
  const std::size_t n = 8193;
  const double h = cut / static_cast<double>(n - 1);
  const auto w = simpson_weights(n, h);
  double integral = 0.0;
  for (std::size_t i = 0; i < n; ++i) integral += w[i] * pt_variance_integrand(mu, h * static_cast<double>(i));
  // (2μ−1)!!/(2μ−2)!! = 2Γ(μ+½)/(√π Γ(μ))
  const double ratio = std::exp(std::numbers::ln2 + ln_gamma(mu + 0.5) -
                                0.5 * std::log(std::numbers::pi) - ln_gamma(mu));
  return ratio * integral;
}

double pt_energy(int mu, double mass, double hbar) {
  return -hbar * hbar * mu * mu / (2.0 * mass);
}

double pt_energy_linear_mu(int mu, double mass, double hbar) {
  return -hbar * hbar * mu / (2.0 * mass);
}

}  // namespace qpot
