#include "qpot/builtin.hpp"

#include <cmath>

#include "qpot/bounds.hpp"
#include "qpot/qpotential.hpp"

namespace qpot {

namespace {

using Idx = Eigen::Index;

std::size_t default_points(std::size_t dim) {
  switch (dim) {
    case 1: return 513;
    case 2: return 201;
    default: return 61;
  }
}

Grid gaussian_grid(const GaussianPureState& g, const StateSpec& spec) {
  const std::size_t pts = spec.grid_points ? spec.grid_points : default_points(g.dim());
  const std::vector<double> eta(g.eta_q.data(), g.eta_q.data() + g.eta_q.size());
  if (spec.grid_box <= 0.0) return gaussian_recommended_grid(position_cov(g), eta, pts);
  std::vector<Axis> axes;
  for (double c : eta) axes.push_back(Axis{c - spec.grid_box, c + spec.grid_box, pts});
  return Grid(std::move(axes));
}

BuiltinState from_gaussian(std::string name, const GaussianPureState& g, const SymMatrix& m, double mass,
                           const StateSpec& spec) {
  PolarState s = to_polar(g, gaussian_grid(g, spec));
  const double analytic = gaussian_mvqp(g, m);
  return BuiltinState{std::move(name), std::move(s), m, mass, g, analytic};
}

/// Pure Gaussian with position covariance v, zero mean and no phase: a = √(2/ħ)·chol(v), d = a⁻ᵀ.
GaussianPureState gaussian_from_cov(const SymMatrix& v, double hbar) {
  const Idx n = static_cast<Idx>(v.dim());
  const Matrix a = std::sqrt(2.0 / hbar) * cholesky_lower(v);
  const Matrix d = a.inverse().transpose();
  const Matrix z = Matrix::Zero(n, n);
  return GaussianPureState(SymplecticMatrix::from_blocks(a, z, z, d), Vector::Zero(n), Vector::Zero(n), hbar);
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorCode::ArgumentOutOfDomain, std::string(what) + " must be positive");
}

}  // namespace

BuiltinState make_builtin(const StateSpec& spec) {
  require_positive(spec.hbar, "hbar");
  require_positive(spec.mass, "mass");
  require_positive(spec.nu, "nu");
  const double hbar = spec.hbar;
  const std::string& name = spec.name;

  if (name == "ho") {
    const double dq0 = std::sqrt(hbar / 2.0);
    const std::size_t pts = spec.grid_points ? spec.grid_points : 513;
    const Grid grid = spec.grid_box > 0.0 ? Grid::line(-spec.grid_box, spec.grid_box, pts)
                                          : ho_recommended_grid(spec.n, dq0, pts);
    const double analytic = (2 * spec.n + 1) * hbar * hbar * spec.nu / (8.0 * dq0 * dq0);
    return BuiltinState{"ho n=" + std::to_string(spec.n), ho_eigenstate(spec.n, dq0, grid, hbar),
                        SymMatrix::scalar(spec.nu), 1.0 / spec.nu, std::nullopt, analytic};
  }
  if (name == "pt") {
    const std::size_t pts = spec.grid_points ? spec.grid_points : 2049;
    const Grid grid = spec.grid_box > 0.0 ? Grid::line(-spec.grid_box, spec.grid_box, pts) : pt_recommended_grid(pts);
    return BuiltinState{"pt lambda=" + std::to_string(spec.lambda) + " mu=" + std::to_string(spec.mu),
                        poschl_teller_state(spec.lambda, spec.mu, grid, hbar), SymMatrix::scalar(1.0 / spec.mass),
                        spec.mass, std::nullopt, pt_mvqp(spec.lambda, spec.mu, spec.mass, hbar)};
  }
  if (name == "gaussian") {
    if (spec.dim < 1 || spec.dim > 3) fail(ErrorCode::DimensionUnsupported, "gaussian: dim must be 1..3");
    std::vector<double> vd = spec.vdiag.empty() ? std::vector<double>(spec.dim, hbar / 2.0) : spec.vdiag;
    if (vd.size() != spec.dim) fail(ErrorCode::DimensionMismatch, "vdiag needs one entry per dimension");
    for (double x : vd) require_positive(x, "vdiag entries");
    const auto g = gaussian_from_cov(SymMatrix::diagonal(vd), hbar);
    return from_gaussian("gaussian dim=" + std::to_string(spec.dim), g,
                         SymMatrix::diagonal(std::vector<double>(spec.dim, 1.0 / spec.mass)), spec.mass, spec);
  }
  if (name == "coherent") {
    const double q = 0.3, p = 1.2;
    const auto g = coherent_state(std::span<const double>(&q, 1), std::span<const double>(&p, 1), hbar);
    return from_gaussian("coherent", g, SymMatrix::scalar(1.0 / spec.mass), spec.mass, spec);
  }
  if (name == "squeezed") {
    if (spec.dim < 1 || spec.dim > 3) fail(ErrorCode::DimensionUnsupported, "squeezed: dim must be 1..3");
    require_positive(spec.a, "a");
    std::vector<double> a(spec.dim), nu(spec.dim, spec.nu);
    for (std::size_t i = 0; i < spec.dim; ++i) a[i] = (i % 2 == 0) ? spec.a : 1.0 / spec.a;
    const auto h = QuadraticHamiltonian::oscillator(nu);
    const auto g = evolve(squeezed_state(a, hbar), h, spec.t);
    return from_gaussian("squeezed dim=" + std::to_string(spec.dim), g, h.M, 1.0 / spec.nu, spec);
  }
  if (name == "inverted") {
    const double zero = 0.0;
    const auto h = QuadraticHamiltonian::inverted(spec.nu);
    const auto g0 = coherent_state(std::span<const double>(&zero, 1), std::span<const double>(&zero, 1), hbar);
    const auto g = evolve(g0, h, spec.t);
    return from_gaussian("inverted", g, h.M, 1.0 / spec.nu, spec);
  }
  if (name == "free") {
    const double zero = 0.0;
    const QuadraticHamiltonian h(SymMatrix::scalar(1.0 / spec.mass), Matrix::Zero(1, 1), SymMatrix::scalar(0.0),
                                 Vector::Zero(1), Vector::Zero(1));
    const auto g0 = coherent_state(std::span<const double>(&zero, 1), std::span<const double>(&zero, 1), hbar);
    return from_gaussian("free", evolve(g0, h, spec.t), h.M, spec.mass, spec);
  }
  fail(ErrorCode::ParseError, "unknown state '" + name + "'");
}

MixedState make_thermal(const StateSpec& spec) {
  if (spec.name != "thermal") fail(ErrorCode::InvalidMixture, "not a thermal spec");
  require_positive(spec.beta_hnu, "beta-hnu");
  require_positive(spec.nu, "nu");
  const double dq0 = std::sqrt(spec.hbar / 2.0);
  const std::size_t pts = spec.grid_points ? spec.grid_points : 1025;
  const Grid grid = spec.grid_box > 0.0 ? Grid::line(-spec.grid_box, spec.grid_box, pts)
                                        : thermal_recommended_grid(spec.beta_hnu, dq0, spec.k, pts);
  const double beta = spec.beta_hnu / (spec.hbar * spec.nu);
  return thermal_state(beta, spec.nu, dq0, spec.k, grid, spec.hbar);
}

std::vector<BuiltinState> builtin_catalog_1d(double hbar) {
  std::vector<BuiltinState> out;
  StateSpec s;
  s.hbar = hbar;
  for (int n : {0, 1, 2, 5}) {
    s.name = "ho";
    s.n = n;
    out.push_back(make_builtin(s));
  }
  for (auto [l, m] : {std::pair{1, 1}, std::pair{3, 3}, std::pair{4, 2}}) {
    s = StateSpec{};
    s.hbar = hbar;
    s.name = "pt";
    s.lambda = l;
    s.mu = m;
    out.push_back(make_builtin(s));
  }
  s = StateSpec{};
  s.hbar = hbar;
  s.name = "gaussian";
  s.vdiag = {0.7};
  out.push_back(make_builtin(s));
  s.name = "coherent";
  out.push_back(make_builtin(s));
  s = StateSpec{};
  s.hbar = hbar;
  s.name = "inverted";
  s.t = 0.5;
  out.push_back(make_builtin(s));
  s.name = "free";
  s.t = 1.0;
  out.push_back(make_builtin(s));
  s.name = "squeezed";
  s.a = 1.5;
  s.t = 0.4;
  out.push_back(make_builtin(s));
  return out;
}

std::vector<BuiltinState> builtin_catalog(double hbar) {
  auto out = builtin_catalog_1d(hbar);
  // Correlated 2-DF Gaussian with an anisotropic metric.
  {
    Matrix v(2, 2);
    v << 0.8, 0.3, 0.3, 0.5;
    const auto g = gaussian_from_cov(SymMatrix(v), hbar);
    Matrix m(2, 2);
    m << 1.0, 0.2, 0.2, 0.6;
    StateSpec spec;
    spec.dim = 2;
    out.push_back(from_gaussian("gaussian dim=2 correlated", g, SymMatrix(m), 1.0, spec));
  }
  StateSpec s;
  s.hbar = hbar;
  s.name = "squeezed";
  s.dim = 2;
  s.a = 2.0;
  s.t = 0.7;
  out.push_back(make_builtin(s));
  return out;
}

}  // namespace qpot
