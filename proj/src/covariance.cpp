#include "qpot/covariance.hpp"

#include <cmath>

namespace qpot {

namespace {

using Idx = Eigen::Index;

Idx ix(std::size_t n) { return static_cast<Idx>(n); }

}  // namespace

CovarianceReport covariance_report(const PolarState& s, const SymMatrix& m) {
  if (m.dim() != s.dim()) fail(ErrorCode::DimensionMismatch, "M order differs from the state");
  const std::size_t n = s.dim(), size = s.grid().size();
  const Grid& grid = s.grid();
  const double hbar = s.hbar();
  const auto ag = amplitude_gradient(s);
  if (ag.masked_mass > 0.05) {
    fail(ErrorCode::NodeDominatedState, "more than 5% of the probability sits on masked cells");
  }
  const Vector mean = position_mean(s);
  const SymMatrix v = position_covariance(s);

  const auto re = s.psi_real();
  const auto im = s.psi_imag();
  std::vector<std::vector<double>> dre(n), dim(n), current(n);
  for (std::size_t k = 0; k < n; ++k) {
    dre[k] = derivative(grid, re, k, kPhysicsOrder);
    dim[k] = s.real_valued() ? std::vector<double>(size, 0.0) : derivative(grid, im, k, kPhysicsOrder);
    current[k].resize(size);
    for (std::size_t i = 0; i < size; ++i) current[k][i] = hbar * (re[i] * dim[k][i] - im[i] * dre[k][i]);
  }

  Vector pc = Vector::Zero(ix(n));
  Matrix vc = Matrix::Zero(ix(n), ix(n));
  Matrix vqp = Matrix::Zero(ix(n), ix(n));
  Matrix pp = Matrix::Zero(ix(n), ix(n));
  std::vector<double> buf(size);
  if (!s.real_valued()) {
    for (std::size_t k = 0; k < n; ++k) pc(ix(k)) = integrate(grid, current[k]);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a; b < n; ++b) {
        // Ω² ∂S_a ∂S_b = j_a j_b / Ω² on unmasked cells.
        for (std::size_t i = 0; i < size; ++i) {
          const double w2 = re[i] * re[i] + im[i] * im[i];
          buf[i] = ag.mask[i] ? 0.0 : current[a][i] * current[b][i] / w2;
        }
        vc(ix(a), ix(b)) = vc(ix(b), ix(a)) = integrate(grid, buf) - pc(ix(a)) * pc(ix(b));
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<double> q(size);
      for (std::size_t i = 0; i < size; ++i) q[i] = grid.coord(i, a) - mean(ix(a));
      for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t i = 0; i < size; ++i) buf[i] = q[i] * current[b][i];
        vqp(ix(a), ix(b)) = integrate(grid, buf);
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      for (std::size_t i = 0; i < size; ++i) buf[i] = dre[a][i] * dre[b][i] + dim[a][i] * dim[b][i];
      pp(ix(a), ix(b)) = pp(ix(b), ix(a)) = hbar * hbar * integrate(grid, buf);
    }
  }
  const SymMatrix vnc_m = SymMatrix::symmetrized(hbar * hbar * ag.g);
  const SymMatrix vc_m = SymMatrix::symmetrized(vc);
  CovarianceReport r{v,
                     SymMatrix::symmetrized(vc_m.matrix() + vnc_m.matrix()),
                     vqp,
                     vc_m,
                     vnc_m,
                     pc,
                     mean,
                     SymMatrix::symmetrized(pp - pc * pc.transpose()),
                     hbar};
  return r;
}

CovarianceReport covariance_report(const GaussianPureState& g) {
  const SymMatrix vnc = gaussian_vnc(g);
  const SymMatrix vc = gaussian_vc(g);
  return CovarianceReport{position_cov(g),
                          SymMatrix::symmetrized(vc.matrix() + vnc.matrix()),
                          position_momentum_cov(g),
                          vc,
                          vnc,
                          g.eta_p,
                          g.eta_q,
                          momentum_cov(g),
                          g.hbar};
}

double hermitian_min_eigenvalue(const CMatrix& h) {
  const Idx n = h.rows();
  Matrix emb(2 * n, 2 * n);
  const Matrix a = h.real(), b = h.imag();
  emb << a, -b, b, a;
  return sym_eig(SymMatrix::symmetrized(emb)).values(0);
}

RsurResult rsur_check(const CovarianceReport& r, double hbar) {
  const Idx n = ix(r.V.dim());
  const CMatrix vinv = inverse_spd(r.V).matrix().cast<std::complex<double>>();
  CMatrix b = r.Vqp.cast<std::complex<double>>();
  b += std::complex<double>(0.0, 0.5 * hbar) * CMatrix::Identity(n, n);
  CMatrix schur = r.Vt.matrix().cast<std::complex<double>>() - b.adjoint() * vinv * b;
  schur = 0.5 * (schur + schur.adjoint()).eval();
  const double lmin = hermitian_min_eigenvalue(schur);
  const double scale = r.Vt.matrix().norm();
  return RsurResult{schur, lmin, lmin >= -1e-8 * scale};
}

Theorem4Result theorem4_check(const CovarianceReport& r, double mvqp, double mass, double hbar) {
  if (r.V.dim() != 1) fail(ErrorCode::WrongDimension, "the Theorem-4 chain is stated for one degree of freedom");
  const double dq2 = r.V(0, 0);
  const double h2 = hbar * hbar;
  Theorem4Result t;
  t.vnc_dq2 = r.Vnc(0, 0) * dq2;
  t.mvqp_dq2 = mvqp * dq2;
  t.delta = r.Vc(0, 0) * dq2 - r.Vqp(0, 0) * r.Vqp(0, 0);
  t.delta_scale = r.Vt(0, 0) * dq2;
  t.vnc_pass = t.vnc_dq2 - 0.25 * h2 >= -1e-6 * 0.25 * h2;
  t.mvqp_pass = t.mvqp_dq2 - h2 / (8.0 * mass) >= -1e-6 * h2 / (8.0 * mass);
  t.delta_pass = t.delta >= -1e-8 * t.delta_scale;
  t.pass = t.vnc_pass && t.mvqp_pass && t.delta_pass;
  return t;
}

MinCorrelation min_quantum_correlation(const CovarianceReport& r, const SymMatrix& m) {
  if (m.dim() != r.Vnc.dim()) fail(ErrorCode::DimensionMismatch, "M order differs from the report");
  const double trace = (r.Vnc.matrix() * m.matrix()).trace();
  const Vector ev = gen_eig_spd(r.Vnc, inverse_spd(m));
  const double lmax = ev(ev.size() - 1);
  return MinCorrelation{trace, lmax, trace >= lmax - 1e-10 * std::abs(trace)};
}

NoClassicalCorrelation no_classical_corr_check(const CovarianceReport& r, double hbar, const SymMatrix& m) {
  if (r.Vc.matrix().norm() >= 1e-6 * r.Vt.matrix().norm()) {
    fail(ErrorCode::ClassicalCorrelationsPresent, "Ṽc is not negligible; the relation needs Ṽc = 0");
  }
  if (m.dim() != r.V.dim()) fail(ErrorCode::DimensionMismatch, "M order differs from the report");
  const double q = 0.25 * hbar * hbar;
  const Vector ev = gen_eig_spd(r.Vnc, inverse_spd(r.V));
  const double lhs = q * (inverse_spd(r.V).matrix() * m.matrix()).trace();
  const double rhs = (r.Vnc.matrix() * m.matrix()).trace();
  const double tol = 1e-6 * q;
  return NoClassicalCorrelation{ev(0), lhs, rhs, ev(0) >= q - tol && lhs <= rhs + 1e-6 * std::abs(rhs)};
}

double classical_schur_gap(const CovarianceReport& r) {
  const Matrix d = r.Vc.matrix() - r.Vqp.transpose() * inverse_spd(r.V).matrix() * r.Vqp;
  return sym_eig(SymMatrix::symmetrized(d)).values(0);
}

IndependentBound independent_df_bound(const std::vector<PolarState>& states, const std::vector<double>& masses) {
  if (states.size() != masses.size() || states.empty()) {
    fail(ErrorCode::DimensionMismatch, "need one mass per state");
  }
  IndependentBound out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const PolarState& s = states[i];
    if (s.dim() != 1) fail(ErrorCode::WrongDimension, "independent components must be 1-DF");
    if (!(masses[i] > 0.0)) fail(ErrorCode::ArgumentOutOfDomain, "masses must be positive");
    const double dq2 = position_covariance(s)(0, 0);
    out.bound += s.hbar() * s.hbar() / (8.0 * masses[i] * dq2);
    out.mvqp_sum += mvqp(s, SymMatrix::scalar(1.0 / masses[i]));
  }
  out.pass = out.mvqp_sum >= out.bound - 1e-6 * out.mvqp_sum;
  return out;
}

}  // namespace qpot
