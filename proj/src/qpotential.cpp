#include "qpot/qpotential.hpp"

#include <cmath>
#include <string>

namespace qpot {

namespace {

using Idx = Eigen::Index;

void check_metric(const PolarState& s, const SymMatrix& m) {
  if (m.dim() != s.dim()) {
    fail(ErrorCode::DimensionMismatch,
         "M is " + std::to_string(m.dim()) + "×" + std::to_string(m.dim()) + " but the state has " +
             std::to_string(s.dim()) + " coordinates");
  }
  cholesky_lower(m);
}

}  // namespace

std::vector<char> node_mask(const PolarState& s) {
  std::vector<char> mask(s.grid().size(), 0);
  const double cut = kNodeThreshold * s.max_omega();
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = s.omega()[i] < cut ? 1 : 0;
  return mask;
}

AmplitudeGradient amplitude_gradient(const PolarState& s, int order) {
  const Grid& grid = s.grid();
  const std::size_t n = s.dim(), size = grid.size();
  const auto re = s.psi_real();
  const auto im = s.psi_imag();
  AmplitudeGradient out;
  out.mask = node_mask(s);
  std::vector<double> masked_rho(size, 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    if (out.mask[i]) {
      ++out.masked_cells;
      masked_rho[i] = s.omega()[i] * s.omega()[i];
    }
  }
  out.masked_mass = integrate(grid, masked_rho);

  std::vector<std::vector<double>> dre(n), dim(n);
  for (std::size_t k = 0; k < n; ++k) {
    dre[k] = derivative(grid, re, k, order);
    dim[k] = s.real_valued() ? std::vector<double>(size, 0.0) : derivative(grid, im, k, order);
  }
  out.d_omega.assign(n, std::vector<double>(size, 0.0));
  out.d_phase.assign(n, std::vector<double>(size, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < size; ++i) {
      if (s.real_valued()) {
        out.d_omega[k][i] = re[i] < 0.0 ? -dre[k][i] : dre[k][i];
        continue;
      }
      if (out.mask[i]) continue;
      const double w2 = re[i] * re[i] + im[i] * im[i];
      const double w = std::sqrt(w2);
      out.d_omega[k][i] = (re[i] * dre[k][i] + im[i] * dim[k][i]) / w;
      out.d_phase[k][i] = s.hbar() * (re[i] * dim[k][i] - im[i] * dre[k][i]) / w2;
    }
  }

  out.g = Matrix::Zero(static_cast<Idx>(n), static_cast<Idx>(n));
  std::vector<double> buf(size);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      for (std::size_t i = 0; i < size; ++i) {
        if (!s.real_valued() && out.mask[i]) {
          buf[i] = dre[a][i] * dre[b][i] + dim[a][i] * dim[b][i];
        } else {
          buf[i] = out.d_omega[a][i] * out.d_omega[b][i];
        }
      }
      const double v = integrate(grid, buf);
      out.g(static_cast<Idx>(a), static_cast<Idx>(b)) = v;
      out.g(static_cast<Idx>(b), static_cast<Idx>(a)) = v;
    }
  }
  return out;
}

ScalarField quantum_potential(const PolarState& s, const SymMatrix& m) {
  check_metric(s, m);
  const Grid& grid = s.grid();
  const std::size_t n = s.dim(), size = grid.size();
  const auto re = s.psi_real();
  const auto im = s.psi_imag();
  const auto mask = node_mask(s);
  std::vector<double> lap_re(size, 0.0), lap_im(size, 0.0);
  std::vector<std::vector<double>> dre(n), dim(n);
  for (std::size_t i = 0; i < n; ++i) {
    dre[i] = derivative(grid, re, i, kPhysicsOrder);
    if (!s.real_valued()) dim[i] = derivative(grid, im, i, kPhysicsOrder);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double mij = m(i, j);
      if (mij == 0.0) continue;
      const auto d2r = derivative(grid, dre[i], j, kPhysicsOrder);
      for (std::size_t p = 0; p < size; ++p) lap_re[p] += mij * d2r[p];
      if (!s.real_valued()) {
        const auto d2i = derivative(grid, dim[i], j, kPhysicsOrder);
        for (std::size_t p = 0; p < size; ++p) lap_im[p] += mij * d2i[p];
      }
    }
  }
  const double h2 = s.hbar() * s.hbar();
  std::vector<double> q(size, 0.0);
  for (std::size_t p = 0; p < size; ++p) {
    if (mask[p]) continue;
    const double w2 = re[p] * re[p] + im[p] * im[p];
    double kinetic = 0.0;  // ∂S·M∂S/ħ²
    if (!s.real_valued()) {
      std::vector<double> ds(n);
      for (std::size_t i = 0; i < n; ++i) ds[i] = (re[p] * dim[i][p] - im[p] * dre[i][p]) / w2;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) kinetic += ds[i] * m(i, j) * ds[j];
    }
    q[p] = -0.5 * h2 * ((re[p] * lap_re[p] + im[p] * lap_im[p]) / w2 + kinetic);
  }
  return ScalarField(grid, std::move(q));
}

double mvqp(const PolarState& s, const SymMatrix& m) {
  check_metric(s, m);
  const auto ag = amplitude_gradient(s);
  return 0.5 * s.hbar() * s.hbar() * (ag.g * m.matrix()).trace();
}

Matrix q_matrix(const PolarState& s, const SymMatrix& m) {
  check_metric(s, m);
  return 4.0 * amplitude_gradient(s).g * m.matrix();
}

SymMatrix vnc(const PolarState& s, const SymMatrix& m) {
  check_metric(s, m);
  return SymMatrix::symmetrized(s.hbar() * s.hbar() * amplitude_gradient(s).g);
}

Vector q_matrix_eigenvalues(const Matrix& g, const SymMatrix& m) {
  return gen_eig_spd(SymMatrix::symmetrized(4.0 * g), inverse_spd(m));
}

double mvqp_laplacian_form(const PolarState& s, const SymMatrix& m) {
  const ScalarField q = quantum_potential(s, m);
  return weighted_mean(s, q);
}

Matrix q_matrix_hessian_form(const PolarState& s, const SymMatrix& m) {
  check_metric(s, m);
  const std::size_t n = s.dim();
  const auto h = hessian(s.omega(), kPhysicsOrder);
  const auto g = gradient(s.omega(), kPhysicsOrder);
  Matrix out(static_cast<Idx>(n), static_cast<Idx>(n));
  std::vector<double> buf(s.grid().size());
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      // Ω² ∂²lnΩ² = 2(Ω ∂²Ω − ∂Ω ∂Ωᵀ)
      for (std::size_t i = 0; i < buf.size(); ++i) {
        buf[i] = 2.0 * (s.omega()[i] * h[a][b][i] - g[a][i] * g[b][i]);
      }
      out(static_cast<Idx>(a), static_cast<Idx>(b)) = -integrate(s.grid(), buf);
    }
  }
  return out * m.matrix();
}

QpReport qp_report(const PolarState& s, const SymMatrix& m) {
  check_metric(s, m);
  const auto ag = amplitude_gradient(s);
  const double h2 = s.hbar() * s.hbar();
  QpReport r{quantum_potential(s, m), ag.masked_cells, 0.5 * h2 * (ag.g * m.matrix()).trace(),
             4.0 * ag.g * m.matrix(), SymMatrix::symmetrized(h2 * ag.g), q_matrix_eigenvalues(ag.g, m)};
  const double trace_form = 0.5 * (r.vnc.matrix() * m.matrix()).trace();
  if (std::abs(trace_form - r.mvqp) > 1e-6 * std::abs(r.mvqp)) {
    fail(ErrorCode::NonFiniteField, "⟨Q⟩ and ½Tr[Ṽnc M] disagree");
  }
  const Matrix lhs = 0.25 * h2 * r.q_matrix;
  const Matrix rhs = r.vnc.matrix() * m.matrix();
  if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-6 * std::max(1e-300, rhs.cwiseAbs().maxCoeff())) {
    fail(ErrorCode::NonFiniteField, "(ħ²/4)Q and Ṽnc M disagree");
  }
  return r;
}

}  // namespace qpot
