#include "qpot/mixed.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qpot/bounds.hpp"

namespace qpot {

namespace {

using Idx = Eigen::Index;
using cplx = std::complex<double>;

Idx ix(std::size_t n) { return static_cast<Idx>(n); }

// Central stencil weights of the physics order for derivative `deriv`.
std::vector<double> central_weights(int deriv) {
  const int half = kPhysicsOrder / 2;
  std::vector<double> off;
  for (int j = -half; j <= half; ++j) off.push_back(j);
  return fd_weights(deriv, off);
}

// Derivative along q of |ρ(·, q_j)| evaluated at q_j, for every column j.
// The stencil acts on the smooth complex column r = ρ(·, q_j) and |r| is
// differentiated analytically, since |r| has kinks wherever r vanishes:
//   |r|′ = Re(r̄r′)/|r|,  |r|″ = (Re(r̄r″) + |r′|²)/|r| − Re(r̄r′)²/|r|³.
// Masked diagonal cells and columns too close to the edge get 0.
std::vector<double> column_derivative_on_diagonal(const DensityGrid& d, int deriv) {
  const std::size_t n = d.n();
  const auto w1 = central_weights(1);
  const auto w2 = central_weights(2);
  const std::size_t half = w1.size() / 2;
  const double h = d.grid().axis(0).spacing();
  const auto diag = d.diagonal();
  const double mx = *std::max_element(diag.begin(), diag.end());
  std::vector<double> out(n, 0.0);
  for (std::size_t j = half; j + half < n; ++j) {
    const double a = diag[j];
    if (a < kNodeThreshold * kNodeThreshold * mx) continue;
    cplx r1(0.0, 0.0), r2(0.0, 0.0);
    for (std::size_t s = 0; s < w1.size(); ++s) {
      const cplx v = d(j - half + s, j);
      r1 += w1[s] * v;
      r2 += w2[s] * v;
    }
    r1 /= h;
    r2 /= h * h;
    // r(q_j) = ρ(q_j, q_j) = a is real and positive.
    const double re1 = a * r1.real();
    if (deriv == 1) {
      out[j] = re1 / a;
    } else {
      out[j] = (a * r2.real() + std::norm(r1)) / a - re1 * re1 / (a * a * a);
    }
  }
  return out;
}

void check_mask(const DensityGrid& d) {
  const auto diag = d.diagonal();
  const double mx = *std::max_element(diag.begin(), diag.end());
  std::vector<double> masked(diag.size(), 0.0);
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (diag[i] < kNodeThreshold * kNodeThreshold * mx) masked[i] = diag[i];
  }
  if (integrate(d.grid(), masked) > 0.05) {
    fail(ErrorCode::MaskDominated, "more than 5% of the diagonal mass is masked");
  }
}

}  // namespace

MixedState::MixedState(std::vector<double> w, std::vector<PolarState> comps)
    : weights(std::move(w)), components(std::move(comps)) {
  if (components.empty() || weights.size() != components.size()) {
    fail(ErrorCode::InvalidMixture, "need one weight per component and at least one component");
  }
  double total = 0.0;
  for (double x : weights) {
    if (!(x >= 0.0) || !std::isfinite(x)) fail(ErrorCode::InvalidMixture, "weights must be nonnegative");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    fail(ErrorCode::InvalidMixture, "weights sum to " + std::to_string(total) + ", not 1");
  }
  hbar = components.front().hbar();
  for (const auto& c : components) {
    if (!(c.grid() == components.front().grid())) fail(ErrorCode::GridMismatch, "components use different grids");
    if (c.hbar() != hbar) fail(ErrorCode::InvalidMixture, "components use different ħ");
  }
}

DensityGrid::DensityGrid(Grid grid, std::vector<cplx> rho, double hbar)
    : grid_(std::move(grid)), n_(grid_.size()), rho_(std::move(rho)), hbar_(hbar) {
  if (grid_.dim() != 1) fail(ErrorCode::DimensionUnsupported, "density grids are 1-DF only");
  if (rho_.size() != n_ * n_) fail(ErrorCode::GridMismatch, "ρ must be N×N");
  double mx = 0.0;
  for (const auto& v : rho_) mx = std::max(mx, std::abs(v));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i; j < n_; ++j) {
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > 1e-10 * mx) {
        fail(ErrorCode::NotSymmetric, "ρ is not Hermitian");
      }
    }
    if ((*this)(i, i).real() < 0.0) fail(ErrorCode::ArgumentOutOfDomain, "ρ has a negative diagonal");
  }
  const double tr = integrate(grid_, diagonal());
  if (std::abs(tr - 1.0) > 1e-6) fail(ErrorCode::NotNormalized, "Tr ρ = " + std::to_string(tr));
}

std::vector<double> DensityGrid::diagonal() const {
  std::vector<double> d(n_);
  for (std::size_t i = 0; i < n_; ++i) d[i] = rho_[i * n_ + i].real();
  return d;
}

DensityGrid assemble_density(const MixedState& ms) {
  if (ms.dim() != 1) fail(ErrorCode::DimensionUnsupported, "density grids are 1-DF only");
  const std::size_t n = ms.grid().size();
  std::vector<cplx> rho(n * n, cplx(0.0, 0.0));
  for (std::size_t k = 0; k < ms.size(); ++k) {
    if (ms.weights[k] == 0.0) continue;
    const auto re = ms.components[k].psi_real();
    const auto im = ms.components[k].psi_imag();
    const double w = ms.weights[k];
    for (std::size_t i = 0; i < n; ++i) {
      const cplx a(w * re[i], w * im[i]);
      cplx* row = rho.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) row[j] += a * cplx(re[j], -im[j]);
    }
  }
  // Exact Hermitian symmetry and a real diagonal.
  for (std::size_t i = 0; i < n; ++i) {
    rho[i * n + i] = cplx(rho[i * n + i].real(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx avg = 0.5 * (rho[i * n + j] + std::conj(rho[j * n + i]));
      rho[i * n + j] = avg;
      rho[j * n + i] = std::conj(avg);
    }
  }
  return DensityGrid(ms.grid(), std::move(rho), ms.hbar);
}

double density_vnc(const DensityGrid& d) {
  check_mask(d);
  const auto d2 = column_derivative_on_diagonal(d, 2);
  return -d.hbar() * d.hbar() * integrate(d.grid(), d2);
}

double mixed_mvqp(const DensityGrid& d, double m) {
  if (!(m > 0.0)) fail(ErrorCode::ArgumentOutOfDomain, "M must be positive");
  return 0.5 * m * density_vnc(d);
}

std::vector<double> offdiagonal_amplitude_derivative(const DensityGrid& d) {
  return column_derivative_on_diagonal(d, 1);
}

std::vector<double> half_diagonal_derivative(const DensityGrid& d) {
  auto g = derivative(d.grid(), d.diagonal(), 0, kPhysicsOrder);
  for (double& x : g) x *= 0.5;
  return g;
}

std::vector<double> mixed_phase_gradient(const DensityGrid& d) {
  const std::size_t n = d.n();
  const auto w = central_weights(1);
  const std::size_t half = w.size() / 2;
  const double h = d.grid().axis(0).spacing();
  const auto diag = d.diagonal();
  const double mx = *std::max_element(diag.begin(), diag.end());
  std::vector<double> out(n, 0.0);
  for (std::size_t j = half; j + half < n; ++j) {
    if (diag[j] < kNodeThreshold * kNodeThreshold * mx) continue;
    cplx acc(0.0, 0.0);
    for (std::size_t s = 0; s < w.size(); ++s) acc += w[s] * d(j - half + s, j);
    out[j] = d.hbar() * (acc / h).imag() / diag[j];
  }
  return out;
}

SymMatrix delta_vnc(const MixedState& ms) {
  const std::size_t n = ms.dim(), size = ms.grid().size();
  std::vector<AmplitudeGradient> ag;
  for (const auto& c : ms.components) ag.push_back(amplitude_gradient(c));
  std::vector<double> rho(size, 0.0);
  std::vector<std::vector<double>> flux(n, std::vector<double>(size, 0.0));
  for (std::size_t k = 0; k < ms.size(); ++k) {
    const auto& c = ms.components[k];
    for (std::size_t i = 0; i < size; ++i) {
      const double w2 = c.omega()[i] * c.omega()[i];
      rho[i] += ms.weights[k] * w2;
      for (std::size_t a = 0; a < n; ++a) flux[a][i] += ms.weights[k] * w2 * ag[k].d_phase[a][i];
    }
  }
  const double rmax = *std::max_element(rho.begin(), rho.end());
  std::vector<std::vector<double>> sbar(n, std::vector<double>(size, 0.0));
  for (std::size_t i = 0; i < size; ++i) {
    if (rho[i] < kNodeThreshold * kNodeThreshold * rmax) continue;
    for (std::size_t a = 0; a < n; ++a) sbar[a][i] = flux[a][i] / rho[i];
  }
  Matrix out = Matrix::Zero(ix(n), ix(n));
  std::vector<double> buf(size);
  for (std::size_t k = 0; k < ms.size(); ++k) {
    if (ms.weights[k] == 0.0) continue;
    const auto& c = ms.components[k];
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a; b < n; ++b) {
        for (std::size_t i = 0; i < size; ++i) {
          if (ag[k].mask[i]) {
            buf[i] = 0.0;
            continue;
          }
          const double w2 = c.omega()[i] * c.omega()[i];
          buf[i] = w2 * (ag[k].d_phase[a][i] - sbar[a][i]) * (ag[k].d_phase[b][i] - sbar[b][i]);
        }
        const double v = ms.weights[k] * integrate(ms.grid(), buf);
        out(ix(a), ix(b)) += v;
        if (a != b) out(ix(b), ix(a)) += v;
      }
    }
  }
  return SymMatrix::symmetrized(out);
}

ConvexDecomposition vnc_convex_decomposition(const MixedState& ms, const SymMatrix& m) {
  const std::size_t n = ms.dim();
  Matrix sum = Matrix::Zero(ix(n), ix(n));
  for (std::size_t k = 0; k < ms.size(); ++k) {
    if (ms.weights[k] == 0.0) continue;
    sum += ms.weights[k] * vnc(ms.components[k], m).matrix();
  }
  const SymMatrix delta = delta_vnc(ms);
  return ConvexDecomposition{SymMatrix::symmetrized(sum), delta, SymMatrix::symmetrized(sum + delta.matrix())};
}

Theorem3Result theorem3_bound(const MixedState& ms, const SymMatrix& m) {
  Theorem3Result r;
  for (std::size_t k = 0; k < ms.size(); ++k) {
    if (ms.weights[k] == 0.0) continue;
    const auto& c = ms.components[k];
    r.bound += ms.weights[k] * linear_bound(c, m).upper;
    r.convex_mvqp += ms.weights[k] * mvqp(c, m);
  }
  const auto dec = vnc_convex_decomposition(ms, m);
  r.mixed_mvqp = 0.5 * (dec.total.matrix() * m.matrix()).trace();
  const double tol = 1e-6 * std::abs(r.mixed_mvqp);
  r.pass = r.mixed_mvqp >= r.convex_mvqp - tol && r.convex_mvqp >= r.bound - tol;
  return r;
}

MixedCorrelation mixed_min_correlation(const MixedState& ms, const SymMatrix& m) {
  const auto dec = vnc_convex_decomposition(ms, m);
  const SymMatrix minv = inverse_spd(m);
  MixedCorrelation r;
  r.trace = (dec.total.matrix() * m.matrix()).trace();
  for (std::size_t k = 0; k < ms.size(); ++k) {
    if (ms.weights[k] == 0.0) continue;
    const Vector ev = gen_eig_spd(vnc(ms.components[k], m), minv);
    r.weighted_lambda += ms.weights[k] * ev(ev.size() - 1);
  }
  const Vector ev = gen_eig_spd(dec.sum_k, minv);
  r.lambda_of_sum = ev(ev.size() - 1);
  const double tol = 1e-6 * std::abs(r.trace);
  r.pass = r.trace >= r.weighted_lambda - tol && r.weighted_lambda >= r.lambda_of_sum - tol;
  return r;
}

std::vector<double> thermal_weights(double x, int k) {
  if (!(x > 0.0)) fail(ErrorCode::ArgumentOutOfDomain, "ħβν must be positive");
  if (k < 1) fail(ErrorCode::OutOfRange, "need at least one level");
  std::vector<double> w(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) w[static_cast<std::size_t>(j)] = std::exp(-x * j) * -std::expm1(-x);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= total;
  return w;
}

int thermal_truncation(double x) {
  if (!(x > 0.0)) fail(ErrorCode::ArgumentOutOfDomain, "ħβν must be positive");
  return std::max(1, static_cast<int>(std::ceil(-std::log(1e-8) / x)));
}

MixedState thermal_state(double beta, double nu, double dq0, int k, const Grid& grid, double hbar) {
  if (!(beta > 0.0) || !(nu > 0.0)) fail(ErrorCode::ArgumentOutOfDomain, "β and ν must be positive");
  const double x = hbar * beta * nu;
  if (k <= 0) k = thermal_truncation(x);
  if (std::exp(-x * k) >= 1e-8) {
    fail(ErrorCode::TruncationInsufficient,
         "K = " + std::to_string(k) + " leaves weight " + std::to_string(std::exp(-x * k)) + "; need K >= " +
             std::to_string(thermal_truncation(x)));
  }
  std::vector<PolarState> comps;
  for (int j = 0; j < k; ++j) comps.push_back(ho_eigenstate(j, dq0, grid, hbar));
  return MixedState(thermal_weights(x, k), std::move(comps));
}

Grid thermal_recommended_grid(double x, double dq0, int k, std::size_t points) {
  if (k <= 0) k = thermal_truncation(x);
  return ho_recommended_grid(k - 1, dq0, points);
}

std::vector<ScalarField> probability_current(const PolarState& s, const QuadraticHamiltonian& h) {
  if (h.dim() != s.dim()) fail(ErrorCode::DimensionMismatch, "Hamiltonian order differs from the state");
  const std::size_t n = s.dim(), size = s.grid().size();
  const auto ag = amplitude_gradient(s);
  std::vector<std::vector<double>> j(n, std::vector<double>(size, 0.0));
  std::array<double, 3> q{};
  for (std::size_t i = 0; i < size; ++i) {
    s.grid().point(i, std::span<double>(q.data(), n));
    const double w2 = s.omega()[i] * s.omega()[i];
    for (std::size_t a = 0; a < n; ++a) {
      double v = h.xi_p(ix(a));
      for (std::size_t b = 0; b < n; ++b) v += h.C(ix(b), ix(a)) * q[b];
      for (std::size_t b = 0; b < n; ++b) v += h.M(a, b) * ag.d_phase[b][i];
      j[a][i] = w2 * v;
    }
  }
  std::vector<ScalarField> out;
  for (auto& v : j) out.emplace_back(s.grid(), std::move(v));
  return out;
}

std::vector<ScalarField> probability_current(const MixedState& ms, const QuadraticHamiltonian& h) {
  const std::size_t n = ms.dim(), size = ms.grid().size();
  std::vector<std::vector<double>> acc(n, std::vector<double>(size, 0.0));
  for (std::size_t k = 0; k < ms.size(); ++k) {
    const auto jk = probability_current(ms.components[k], h);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t i = 0; i < size; ++i) acc[a][i] += ms.weights[k] * jk[a][i];
  }
  std::vector<ScalarField> out;
  for (auto& v : acc) out.emplace_back(ms.grid(), std::move(v));
  return out;
}

}  // namespace qpot
