#include "qpot/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qpot {

namespace {

using Idx = Eigen::Index;

Idx ix(std::size_t n) { return static_cast<Idx>(n); }

double wrap_pi(double x) { return std::remainder(x, 2.0 * std::numbers::pi); }

double det_arg(const SymplecticMatrix& s) {
  const CMatrix z = s.a().cast<std::complex<double>>() +
                    std::complex<double>(0.0, 1.0) * s.b().cast<std::complex<double>>();
  return std::arg(z.partialPivLu().determinant());
}

}  // namespace

Matrix symplectic_form(std::size_t n) {
  Matrix j = Matrix::Zero(ix(2 * n), ix(2 * n));
  j.topRightCorner(ix(n), ix(n)).setIdentity();
  j.bottomLeftCorner(ix(n), ix(n)) = -Matrix::Identity(ix(n), ix(n));
  return j;
}

// QuadraticHamiltonian ------------------------------------------------------

QuadraticHamiltonian::QuadraticHamiltonian(SymMatrix m, Matrix c, SymMatrix l, Vector xi_p_in,
                                           Vector xi_q_in, double h0)
    : M(std::move(m)), C(std::move(c)), L(std::move(l)), xi_p(std::move(xi_p_in)),
      xi_q(std::move(xi_q_in)), H0(h0) {
  const Idx n = ix(M.dim());
  if (C.rows() != n || C.cols() != n || ix(L.dim()) != n || xi_p.size() != n || xi_q.size() != n) {
    fail(ErrorCode::DimensionMismatch, "Hamiltonian blocks have inconsistent sizes");
  }
  cholesky_lower(M);  // kinetic matrix must be SPD
}

Matrix QuadraticHamiltonian::block() const {
  const Idx n = ix(dim());
  Matrix h(2 * n, 2 * n);
  h << L.matrix(), C, C.transpose(), M.matrix();
  return h;
}

QuadraticHamiltonian QuadraticHamiltonian::oscillator(std::span<const double> nu) {
  const Idx n = ix(nu.size());
  const SymMatrix m = SymMatrix::diagonal(nu);
  return QuadraticHamiltonian(m, Matrix::Zero(n, n), m, Vector::Zero(n), Vector::Zero(n));
}

QuadraticHamiltonian QuadraticHamiltonian::inverted(double nu) {
  return QuadraticHamiltonian(SymMatrix::scalar(nu), Matrix::Zero(1, 1), SymMatrix::scalar(-nu),
                              Vector::Zero(1), Vector::Zero(1));
}

// SymplecticMatrix ------------------------------------------------------------

double SymplecticMatrix::constraint_residual(const Matrix& s) {
  const Idx n = s.rows() / 2;
  const Matrix a = s.topLeftCorner(n, n), b = s.topRightCorner(n, n);
  const Matrix c = s.bottomLeftCorner(n, n), d = s.bottomRightCorner(n, n);
  const Matrix id = Matrix::Identity(n, n);
  auto asym = [](const Matrix& x) { return (x - x.transpose()).cwiseAbs().maxCoeff(); };
  double r = 0.0;
  r = std::max(r, (a * d.transpose() - b * c.transpose() - id).cwiseAbs().maxCoeff());
  r = std::max(r, (a.transpose() * d - c.transpose() * b - id).cwiseAbs().maxCoeff());
  r = std::max(r, asym(a.transpose() * c));
  r = std::max(r, asym(a * b.transpose()));
  r = std::max(r, asym(c * d.transpose()));
  r = std::max(r, asym(b.transpose() * d));
  const Matrix j = symplectic_form(static_cast<std::size_t>(n));
  r = std::max(r, (s.transpose() * j * s - j).cwiseAbs().maxCoeff());
  return r;
}

SymplecticMatrix::SymplecticMatrix(Matrix s) : s_(std::move(s)) {
  if (s_.rows() != s_.cols() || s_.rows() % 2 != 0 || s_.rows() == 0) {
    fail(ErrorCode::DimensionMismatch, "symplectic matrix must be 2n×2n");
  }
  if (!s_.allFinite()) fail(ErrorCode::NonFiniteField, "symplectic matrix has non-finite entries");
  const double scale = std::max(1.0, s_.cwiseAbs().maxCoeff());
  const double r = constraint_residual(s_);
  if (r > 1e-10 * scale * scale) {
    fail(ErrorCode::NotSymplectic, "constraint residual " + std::to_string(r));
  }
}

SymplecticMatrix SymplecticMatrix::identity(std::size_t n) {
  return SymplecticMatrix(Matrix::Identity(ix(2 * n), ix(2 * n)));
}

SymplecticMatrix SymplecticMatrix::from_blocks(const Matrix& a, const Matrix& b, const Matrix& c,
                                               const Matrix& d) {
  const Idx n = a.rows();
  Matrix s(2 * n, 2 * n);
  s << a, b, c, d;
  return SymplecticMatrix(std::move(s));
}

Matrix SymplecticMatrix::a() const { return s_.topLeftCorner(s_.rows() / 2, s_.rows() / 2); }
Matrix SymplecticMatrix::b() const { return s_.topRightCorner(s_.rows() / 2, s_.rows() / 2); }
Matrix SymplecticMatrix::c() const { return s_.bottomLeftCorner(s_.rows() / 2, s_.rows() / 2); }
Matrix SymplecticMatrix::d() const { return s_.bottomRightCorner(s_.rows() / 2, s_.rows() / 2); }

SymplecticMatrix SymplecticMatrix::operator*(const SymplecticMatrix& o) const {
  if (o.dim() != dim()) fail(ErrorCode::DimensionMismatch, "symplectic product of different orders");
  return SymplecticMatrix(s_ * o.s_);
}

// Exponential ---------------------------------------------------------------

Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) fail(ErrorCode::DimensionMismatch, "expm needs a square matrix");
  if (!a.allFinite()) fail(ErrorCode::ExpDivergence, "expm argument is not finite");
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  if (squarings > 60) fail(ErrorCode::ExpDivergence, "‖A‖ too large for scaling and squaring");
  const Matrix x = a / std::ldexp(1.0, squarings);
  const Idx n = a.rows();
  constexpr int p = 6;
  Matrix num = Matrix::Identity(n, n), den = Matrix::Identity(n, n), pw = Matrix::Identity(n, n);
  double coef = 1.0;
  for (int k = 1; k <= p; ++k) {
    coef *= static_cast<double>(p - k + 1) / (k * (2.0 * p - k + 1));
    pw = pw * x;
    num += coef * pw;
    den += (k % 2 == 0 ? coef : -coef) * pw;
  }
  Matrix r = den.partialPivLu().solve(num);
  for (int i = 0; i < squarings; ++i) r = r * r;
  if (!r.allFinite()) fail(ErrorCode::ExpDivergence, "matrix exponential overflowed");
  return r;
}

namespace {

Matrix reproject(Matrix s) {
  const Matrix j = symplectic_form(static_cast<std::size_t>(s.rows() / 2));
  for (int it = 0; it < 3; ++it) {
    const Matrix e = s.transpose() * j * s - j;
    if (e.cwiseAbs().maxCoeff() <= 1e-10) break;
    s = s * (Matrix::Identity(s.rows(), s.cols()) + 0.5 * j * e);
  }
  return s;
}

Matrix generator(const QuadraticHamiltonian& h) { return symplectic_form(h.dim()) * h.block(); }

}  // namespace

SymplecticMatrix symplectic_propagator(const QuadraticHamiltonian& h, double t) {
  return SymplecticMatrix(reproject(expm(generator(h) * t)));
}

// Gaussian states ---------------------------------------------------------------

GaussianPureState::GaussianPureState(SymplecticMatrix s, Vector eq, Vector ep, double h)
    : S(std::move(s)), eta_q(std::move(eq)), eta_p(std::move(ep)), hbar(h) {
  const Idx n = ix(S.dim());
  if (eta_q.size() != n || eta_p.size() != n) fail(ErrorCode::DimensionMismatch, "mean vectors");
  if (!(hbar > 0.0)) fail(ErrorCode::ArgumentOutOfDomain, "hbar must be > 0");
  arg_det = det_arg(S);
}

GaussianPureState coherent_state(std::span<const double> eta_q, std::span<const double> eta_p,
                                 double hbar) {
  if (eta_q.size() != eta_p.size()) fail(ErrorCode::DimensionMismatch, "mean vectors");
  const Idx n = ix(eta_q.size());
  return GaussianPureState(SymplecticMatrix::identity(eta_q.size()),
                           Eigen::Map<const Vector>(eta_q.data(), n),
                           Eigen::Map<const Vector>(eta_p.data(), n), hbar);
}

GaussianPureState squeezed_state(std::span<const double> a_diag, double hbar) {
  const Idx n = ix(a_diag.size());
  Matrix a = Matrix::Zero(n, n), d = Matrix::Zero(n, n);
  for (Idx i = 0; i < n; ++i) {
    if (a_diag[static_cast<std::size_t>(i)] == 0.0) fail(ErrorCode::SingularBlock, "squeeze factor 0");
    a(i, i) = a_diag[static_cast<std::size_t>(i)];
    d(i, i) = 1.0 / a(i, i);
  }
  return GaussianPureState(SymplecticMatrix::from_blocks(a, Matrix::Zero(n, n), Matrix::Zero(n, n), d),
                           Vector::Zero(n), Vector::Zero(n), hbar);
}

CMatrix sigma_matrix(const SymplecticMatrix& s) {
  const Matrix a = s.a(), b = s.b(), c = s.c(), d = s.d();
  const Matrix g = a * a.transpose() + b * b.transpose();
  const auto lu = g.fullPivLu();
  if (!lu.isInvertible() || lu.rcond() < 1e-14) fail(ErrorCode::SingularBlock, "aaᵀ + bbᵀ is singular");
  const Matrix ginv = lu.inverse();
  const Idx n = a.rows();
  const Matrix re = ginv;
  const Matrix im = -(c * a.transpose() + d * b.transpose()) * ginv;
  CMatrix sigma(n, n);
  sigma.real() = 0.5 * (re + re.transpose());
  sigma.imag() = 0.5 * (im + im.transpose());
  return sigma;
}

SymMatrix position_cov(const GaussianPureState& g) {
  const Matrix a = g.S.a(), b = g.S.b();
  return SymMatrix::symmetrized(0.5 * g.hbar * (a * a.transpose() + b * b.transpose()));
}

SymMatrix momentum_cov(const GaussianPureState& g) {
  const Matrix c = g.S.c(), d = g.S.d();
  return SymMatrix::symmetrized(0.5 * g.hbar * (c * c.transpose() + d * d.transpose()));
}

Matrix position_momentum_cov(const GaussianPureState& g) {
  const Matrix a = g.S.a(), b = g.S.b(), c = g.S.c(), d = g.S.d();
  return 0.5 * g.hbar * (a * c.transpose() + b * d.transpose());
}

SymMatrix gaussian_vnc(const GaussianPureState& g) {
  const SymMatrix vinv = inverse_spd(position_cov(g));
  return SymMatrix::symmetrized(0.25 * g.hbar * g.hbar * vinv.matrix());
}

SymMatrix gaussian_vc(const GaussianPureState& g) {
  const Matrix im = sigma_matrix(g.S).imag();
  return SymMatrix::symmetrized(im * position_cov(g).matrix() * im);
}

GaussianPureState evolve(const GaussianPureState& g, const QuadraticHamiltonian& h, double t) {
  if (h.dim() != g.dim()) fail(ErrorCode::DimensionMismatch, "state and Hamiltonian orders differ");
  const std::size_t n = g.dim();
  const Idx n2 = ix(2 * n);
  const Matrix jh = generator(h);
  Vector xi(n2);
  xi << h.xi_q, h.xi_p;
  // exp([[JH, Jξ], [0, 0]] t) carries ∫₀ᵗ S_{t'} dt' Jξ in its last column.
  Matrix aug = Matrix::Zero(n2 + 1, n2 + 1);
  aug.topLeftCorner(n2, n2) = jh;
  aug.topRightCorner(n2, 1) = symplectic_form(n) * xi;
  const Matrix e = expm(aug * t);
  const SymplecticMatrix st(reproject(e.topLeftCorner(n2, n2)));
  Vector eta(n2);
  eta << g.eta_q, g.eta_p;
  const Vector eta_t = st.matrix() * eta + e.topRightCorner(n2, 1);

  GaussianPureState out(st * g.S, eta_t.head(ix(n)), eta_t.tail(ix(n)), g.hbar);

  // Follow Arg det(a + ib) along the path so the global phase stays continuous.
  const double rate = jh.cwiseAbs().colwise().sum().maxCoeff();
  int steps = std::max(1, static_cast<int>(std::ceil(4.0 * rate * std::abs(t) * static_cast<double>(n))));
  for (int attempt = 0; attempt < 12; ++attempt, steps *= 2) {
    double arg = g.arg_det;
    double prev = det_arg(g.S);
    bool ok = true;
    for (int k = 1; k <= steps && ok; ++k) {
      const double tk = t * k / steps;
      const SymplecticMatrix sk = k == steps ? out.S : symplectic_propagator(h, tk) * g.S;
      const double cur = det_arg(sk);
      const double inc = wrap_pi(cur - prev);
      if (std::abs(inc) >= 0.25 * std::numbers::pi) ok = false;
      arg += inc;
      prev = cur;
    }
    if (ok) {
      out.arg_det = arg;
      return out;
    }
  }
  fail(ErrorCode::ExpDivergence, "could not resolve the branch of Arg det(a + ib)");
}

double gaussian_qp(const GaussianPureState& g, const SymMatrix& m, std::span<const double> q) {
  if (m.dim() != g.dim() || q.size() != g.dim()) fail(ErrorCode::DimensionMismatch, "M or q order");
  const Matrix w = inverse_spd(position_cov(g)).matrix();
  const Vector d = Eigen::Map<const Vector>(q.data(), ix(q.size())) - g.eta_q;
  const double h2 = g.hbar * g.hbar;
  return 0.25 * h2 * (w * m.matrix()).trace() - 0.125 * h2 * d.dot(w * m.matrix() * w * d);
}

double gaussian_mvqp(const GaussianPureState& g, const SymMatrix& m) {
  if (m.dim() != g.dim()) fail(ErrorCode::DimensionMismatch, "M order");
  const Matrix w = inverse_spd(position_cov(g)).matrix();
  return 0.125 * g.hbar * g.hbar * (w * m.matrix()).trace();
}

PolarState to_polar(const GaussianPureState& g, const Grid& grid) {
  const std::size_t n = g.dim();
  if (grid.dim() != n) fail(ErrorCode::DimensionMismatch, "grid and state orders differ");
  const SymMatrix v = position_cov(g);
  for (std::size_t k = 0; k < n; ++k) {
    const Axis& ax = grid.axis(k);
    const double sigma = std::sqrt(v(k, k));
    const double c = g.eta_q(ix(k));
    const double slack = 1e-9 * (ax.upper - ax.lower);
    if (ax.lower > c - 8.0 * sigma + slack || ax.upper < c + 8.0 * sigma - slack) {
      fail(ErrorCode::BoxTooSmall, "to_polar: box must cover ±8σ on axis " + std::to_string(k));
    }
  }
  const CMatrix sigma = sigma_matrix(g.S);
  const Matrix re = sigma.real(), im = sigma.imag();
  const double norm = std::pow(re.determinant() / std::pow(std::numbers::pi * g.hbar, static_cast<double>(n)), 0.25);
  const double constant = -0.5 * g.eta_q.dot(g.eta_p) - 0.5 * g.hbar * g.arg_det;
  std::vector<double> omega(grid.size()), phase(grid.size());
  std::array<double, 3> pt{};
  Vector q(ix(n));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.point(i, std::span<double>(pt.data(), n));
    for (std::size_t k = 0; k < n; ++k) q(ix(k)) = pt[k];
    const Vector d = q - g.eta_q;
    omega[i] = norm * std::exp(-0.5 * d.dot(re * d) / g.hbar);
    phase[i] = -0.5 * d.dot(im * d) + g.eta_p.dot(q) + constant;
  }
  return PolarState(ScalarField(grid, std::move(omega)), ScalarField(grid, std::move(phase)), g.hbar, false);
}

}  // namespace qpot
