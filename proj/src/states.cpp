#include "qpot/states.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "qpot/specfun.hpp"

namespace qpot {

namespace {

bool on_boundary(const Grid& g, std::size_t flat) {
  const auto idx = g.unravel(flat);
  for (std::size_t k = 0; k < g.dim(); ++k) {
    if (idx[k] == 0 || idx[k] + 1 == g.axis(k).count) return true;
  }
  return false;
}

void require_box(const Grid& g, std::size_t k, double lo, double hi, const char* what) {
  const Axis& a = g.axis(k);
  const double slack = 1e-9 * (a.upper - a.lower);
  if (a.lower > lo + slack || a.upper < hi - slack) {
    std::ostringstream os;
    os << what << ": axis " << k << " must cover [" << lo << ", " << hi << "]";
    fail(ErrorCode::BoxTooSmall, os.str());
  }
}

double wrap_pi(double x) {
  x = std::remainder(x, 2.0 * std::numbers::pi);
  return x;
}

PolarState from_real_amplitude(const Grid& grid, std::vector<double> psi, double hbar) {
  std::vector<double> omega(psi.size()), phase(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    omega[i] = std::abs(psi[i]);
    phase[i] = psi[i] < 0.0 ? std::numbers::pi * hbar : 0.0;
  }
  return PolarState(ScalarField(grid, std::move(omega)), ScalarField(grid, std::move(phase)), hbar,
                    true);
}

}  // namespace

PolarState::PolarState(ScalarField omega, ScalarField phase, double hbar, bool real_valued)
    : omega_(std::move(omega)), phase_(std::move(phase)), hbar_(hbar), real_valued_(real_valued) {
  if (!(omega_.grid() == phase_.grid())) fail(ErrorCode::GridMismatch, "Ω and S grids differ");
  if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) fail(ErrorCode::ArgumentOutOfDomain, "hbar must be > 0");
  const auto w = omega_.values();
  for (double v : w) {
    if (v < 0.0) fail(ErrorCode::ArgumentOutOfDomain, "Ω must be nonnegative");
    max_omega_ = std::max(max_omega_, v);
  }
  const auto rho = density();
  const double norm = integrate(grid(), rho);
  if (std::abs(norm - 1.0) > 1e-6) {
    fail(ErrorCode::NotNormalized, "∫Ω² = " + std::to_string(norm));
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] >= 1e-6 * max_omega_ && on_boundary(grid(), i)) {
      fail(ErrorCode::BoxTooSmall, "Ω does not vanish on the grid boundary");
    }
  }
}

std::vector<double> PolarState::density() const {
  std::vector<double> r(omega_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = omega_[i] * omega_[i];
  return r;
}

std::vector<double> PolarState::psi_real() const {
  std::vector<double> r(omega_.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = real_valued_ ? (phase_[i] > 0.5 * std::numbers::pi * hbar_ ? -omega_[i] : omega_[i])
                        : omega_[i] * std::cos(phase_[i] / hbar_);
  }
  return r;
}

std::vector<double> PolarState::psi_imag() const {
  std::vector<double> r(omega_.size(), 0.0);
  if (real_valued_) return r;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = omega_[i] * std::sin(phase_[i] / hbar_);
  return r;
}

TestFunction make_test_function(const Grid& grid, std::string label,
                                std::function<double(std::span<const double>)> f) {
  return TestFunction{ScalarField::sample(grid, f), std::move(label)};
}

PolarState polar_decompose(const ScalarField& re, const ScalarField& im, double hbar) {
  if (!(re.grid() == im.grid())) fail(ErrorCode::GridMismatch, "re and im grids differ");
  const Grid& g = re.grid();
  const std::size_t n = g.size();
  std::vector<double> omega(n), raw(n);
  bool real = true;
  for (std::size_t i = 0; i < n; ++i) {
    omega[i] = std::hypot(re[i], im[i]);
    raw[i] = std::atan2(im[i], re[i]);
    if (im[i] != 0.0) real = false;
  }
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = omega[i] * omega[i];
  const double norm = integrate(g, sq);
  if (std::abs(norm - 1.0) > 1e-6) fail(ErrorCode::NotNormalized, "∫|ψ|² = " + std::to_string(norm));
  if (real) {
    std::vector<double> psi(re.values().begin(), re.values().end());
    return from_real_amplitude(g, std::move(psi), hbar);
  }

  const std::size_t start = static_cast<std::size_t>(
      std::max_element(omega.begin(), omega.end()) - omega.begin());
  const double wmax = omega[start];
  std::vector<double> phase(n, 0.0);
  std::vector<char> done(n, 0);
  phase[start] = raw[start];
  done[start] = 1;

  auto step = [&](std::size_t from, std::size_t to) {
    const double d = wrap_pi(raw[to] - raw[from]);
    if (std::abs(d) > 0.5 * std::numbers::pi && omega[to] > kUnwrapGuard * wmax &&
        omega[from] > kUnwrapGuard * wmax) {
      fail(ErrorCode::UnwrapFailure, "phase jump above π/2 between well-populated neighbours");
    }
    phase[to] = phase[from] + d;
    done[to] = 1;
  };

  // Unwrap along axis 0 through the start point, then sweep each later axis
  // outward from every point already fixed.
  const auto s_idx = g.unravel(start);
  for (std::size_t k = 0; k < g.dim(); ++k) {
    const std::size_t stride = g.stride(k);
    const std::size_t cnt = g.axis(k).count;
    std::vector<std::size_t> seeds;
    for (std::size_t i = 0; i < n; ++i) {
      if (!done[i]) continue;
      const auto idx = g.unravel(i);
      if (idx[k] == s_idx[k]) seeds.push_back(i);
    }
    for (std::size_t seed : seeds) {
      const std::size_t pos = g.unravel(seed)[k];
      for (std::size_t j = pos + 1; j < cnt; ++j) step(seed + (j - 1 - pos) * stride, seed + (j - pos) * stride);
      for (std::size_t j = pos; j-- > 0;) step(seed - (pos - j - 1) * stride, seed - (pos - j) * stride);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    phase[i] = omega[i] < 1e-10 * wmax ? 0.0 : hbar * phase[i];
  }
  return PolarState(ScalarField(g, std::move(omega)), ScalarField(g, std::move(phase)), hbar, false);
}

PolarState ho_eigenstate(int n, double dq0, const Grid& grid, double hbar) {
  if (grid.dim() != 1) fail(ErrorCode::DimensionMismatch, "HO eigenstates are 1-DF");
  if (n < 0 || n > 200) fail(ErrorCode::DegreeOutOfRange, "HO level must lie in 0..200");
  if (!(dq0 > 0.0)) fail(ErrorCode::ArgumentOutOfDomain, "Δq₀ must be positive");
  const double half = (8.0 + 2.0 * std::sqrt(static_cast<double>(n))) * dq0;
  require_box(grid, 0, -half, half, "ho_eigenstate");
  const double scale = 1.0 / (std::pow(2.0, 0.25) * std::sqrt(dq0));
  std::vector<double> psi(grid.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    psi[i] = scale * hermite_function(n, grid.coord(i, 0) / (std::numbers::sqrt2 * dq0));
  }
  return from_real_amplitude(grid, std::move(psi), hbar);
}

Grid ho_recommended_grid(int n, double dq0, std::size_t points) {
  const double half = (8.0 + 2.0 * std::sqrt(static_cast<double>(std::max(n, 0)))) * dq0;
  return Grid::line(-half, half, points);
}

PolarState poschl_teller_state(int lambda, int mu, const Grid& grid, double hbar) {
  if (grid.dim() != 1) fail(ErrorCode::DimensionMismatch, "Pöschl–Teller states are 1-DF");
  if (mu < 1 || lambda < mu || lambda > 100) fail(ErrorCode::InvalidOrder, "need 1 <= mu <= lambda <= 100");
  require_box(grid, 0, -25.0, 25.0, "poschl_teller_state");
  std::vector<double> psi(grid.size());
  const double amp = std::sqrt(static_cast<double>(mu));
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double q = grid.coord(i, 0);
    psi[i] = amp * assoc_legendre_normalized(lambda, mu, std::tanh(q), 1.0 / std::cosh(q));
  }
  std::vector<double> sq(psi.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = psi[i] * psi[i];
  const double norm = integrate(grid, sq);
  if (std::abs(norm - 1.0) > 1e-8) {
    fail(ErrorCode::NotNormalized, "Pöschl–Teller norm " + std::to_string(norm) + "; refine the grid");
  }
  return from_real_amplitude(grid, std::move(psi), hbar);
}

Grid pt_recommended_grid(std::size_t points) { return Grid::line(-25.0, 25.0, points); }

namespace {

void check_gaussian_inputs(const SymMatrix& v, std::span<const double> eta_q, const Grid& grid) {
  if (v.dim() != grid.dim() || eta_q.size() != grid.dim()) {
    fail(ErrorCode::DimensionMismatch, "V, η and grid dimensions differ");
  }
  for (std::size_t k = 0; k < grid.dim(); ++k) {
    const double sigma = std::sqrt(std::max(v(k, k), 0.0));
    require_box(grid, k, eta_q[k] - 8.0 * sigma, eta_q[k] + 8.0 * sigma, "gaussian");
  }
}

}  // namespace

PolarState gaussian_wavepacket(const SymMatrix& v, std::span<const double> eta_q,
                               std::span<const double> eta_p, const Matrix& chirp,
                               const Grid& grid, double hbar) {
  check_gaussian_inputs(v, eta_q, grid);
  const std::size_t n = grid.dim();
  if (!eta_p.empty() && eta_p.size() != n) fail(ErrorCode::DimensionMismatch, "η_p dimension");
  const bool has_chirp = chirp.size() != 0;
  if (has_chirp && (static_cast<std::size_t>(chirp.rows()) != n || chirp.rows() != chirp.cols())) {
    fail(ErrorCode::DimensionMismatch, "chirp dimension");
  }
  const SymMatrix vinv = inverse_spd(v);
  const double det = v.matrix().determinant();
  const double amp = std::pow(2.0 * std::numbers::pi, -0.25 * static_cast<double>(n)) * std::pow(det, -0.25);
  std::vector<double> omega(grid.size()), phase(grid.size());
  const bool complex_phase = has_chirp || (!eta_p.empty() && std::any_of(eta_p.begin(), eta_p.end(),
                                                                        [](double p) { return p != 0.0; }));
  Vector d(static_cast<Eigen::Index>(n)), q(static_cast<Eigen::Index>(n));
  std::array<double, 3> pt{};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.point(i, std::span<double>(pt.data(), n));
    for (std::size_t k = 0; k < n; ++k) {
      q(static_cast<Eigen::Index>(k)) = pt[k];
      d(static_cast<Eigen::Index>(k)) = pt[k] - eta_q[k];
    }
    omega[i] = amp * std::exp(-0.25 * d.dot(vinv.matrix() * d));
    double s = 0.0;
    if (!eta_p.empty()) {
      for (std::size_t k = 0; k < n; ++k) s += eta_p[k] * pt[k];
    }
    if (has_chirp) s += 0.5 * d.dot(chirp * d);
    phase[i] = s;
  }
  return PolarState(ScalarField(grid, std::move(omega)), ScalarField(grid, std::move(phase)), hbar,
                    !complex_phase);
}

PolarState gaussian_polar(const SymMatrix& v, std::span<const double> eta_q, const Grid& grid,
                          double hbar) {
  return gaussian_wavepacket(v, eta_q, {}, Matrix(), grid, hbar);
}

Grid gaussian_recommended_grid(const SymMatrix& v, std::span<const double> eta_q,
                               std::size_t points, double half_sigmas) {
  std::vector<Axis> axes;
  for (std::size_t k = 0; k < v.dim(); ++k) {
    const double sigma = std::sqrt(v(k, k));
    const double c = eta_q.empty() ? 0.0 : eta_q[k];
    axes.push_back(Axis{c - half_sigmas * sigma, c + half_sigmas * sigma, points});
  }
  return Grid(std::move(axes));
}

double weighted_mean(const PolarState& s, const ScalarField& f) {
  if (!(s.grid() == f.grid())) fail(ErrorCode::GridMismatch, "state and function grids differ");
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = s.omega()[i] * s.omega()[i] * f[i];
  return integrate(s.grid(), v);
}

double weighted_cov(const PolarState& s, const ScalarField& f, const ScalarField& g) {
  if (!(s.grid() == f.grid()) || !(s.grid() == g.grid())) {
    fail(ErrorCode::GridMismatch, "state and function grids differ");
  }
  const double mf = weighted_mean(s, f);
  const double mg = weighted_mean(s, g);
  // Centred form avoids cancellation in ⟨fg⟩ − ⟨f⟩⟨g⟩.
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = s.omega()[i] * s.omega()[i] * (f[i] - mf) * (g[i] - mg);
  }
  return integrate(s.grid(), v);
}

Vector position_mean(const PolarState& s) {
  Vector m(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t k = 0; k < s.dim(); ++k) {
    m(static_cast<Eigen::Index>(k)) = weighted_mean(s, ScalarField::coordinate(s.grid(), k));
  }
  return m;
}

SymMatrix position_covariance(const PolarState& s) {
  const std::size_t n = s.dim();
  std::vector<ScalarField> q;
  for (std::size_t k = 0; k < n; ++k) q.push_back(ScalarField::coordinate(s.grid(), k));
  Matrix v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double c = weighted_cov(s, q[i], q[j]);
      v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c;
      v(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = c;
    }
  }
  return SymMatrix(v);
}

// CSV -----------------------------------------------------------------------

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "cannot parse " + what + " from '" + s + "'");
  }
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && s[b] == ' ') ++b;
  return s.substr(b);
}

}  // namespace

PolarState read_state_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) fail(ErrorCode::ParseError, "state CSV is empty");
  const auto cols = split(trim(header), ',');
  if (cols.size() < 4) fail(ErrorCode::ParseError, "header needs q columns, re, im and hbar");
  const std::size_t n = cols.size() - 3;
  if (n > 3) fail(ErrorCode::DimensionUnsupported, "at most 3 coordinate columns");
  std::vector<Axis> axes;
  for (std::size_t k = 0; k < n; ++k) {
    const std::string& c = cols[k];
    const std::string name = "q" + std::to_string(k + 1) + "(";
    if (c.rfind(name, 0) != 0 || c.back() != ')') {
      fail(ErrorCode::ParseError, "column " + std::to_string(k + 1) + " must read " + name + "lo:hi:count)");
    }
    const auto parts = split(c.substr(name.size(), c.size() - name.size() - 1), ':');
    if (parts.size() != 3) fail(ErrorCode::ParseError, "axis spec '" + c + "' must be lo:hi:count");
    const double lo = parse_double(parts[0], "lower bound of " + c);
    const double hi = parse_double(parts[1], "upper bound of " + c);
    const double cnt = parse_double(parts[2], "point count of " + c);
    if (cnt < 16 || cnt != std::floor(cnt)) fail(ErrorCode::ParseError, "point count of " + c + " must be an integer >= 16");
    axes.push_back(Axis{lo, hi, static_cast<std::size_t>(cnt)});
  }
  if (trim(cols[n]) != "re" || trim(cols[n + 1]) != "im") {
    fail(ErrorCode::ParseError, "columns after the coordinates must be 're,im'");
  }
  const std::string hb = trim(cols[n + 2]);
  if (hb.rfind("hbar=", 0) != 0) fail(ErrorCode::ParseError, "last header field must be hbar=<value>");
  const double hbar = parse_double(hb.substr(5), "hbar");
  const Grid grid(std::move(axes));

  std::vector<double> re(grid.size()), im(grid.size());
  std::string line;
  std::size_t row = 0;
  std::array<double, 3> expect{};
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (row >= grid.size()) fail(ErrorCode::ParseError, "more data rows than grid points");
    const auto f = split(line, ',');
    if (f.size() != n + 2) {
      fail(ErrorCode::ParseError, "row " + std::to_string(row + 2) + " needs " + std::to_string(n + 2) + " fields");
    }
    grid.point(row, std::span<double>(expect.data(), n));
    for (std::size_t k = 0; k < n; ++k) {
      const double q = parse_double(f[k], "q" + std::to_string(k + 1) + " on row " + std::to_string(row + 2));
      if (std::abs(q - expect[k]) > 1e-6 * grid.axis(k).spacing()) {
        fail(ErrorCode::ParseError, "row " + std::to_string(row + 2) + " is off the declared grid");
      }
    }
    re[row] = parse_double(f[n], "re on row " + std::to_string(row + 2));
    im[row] = parse_double(f[n + 1], "im on row " + std::to_string(row + 2));
    ++row;
  }
  if (row != grid.size()) fail(ErrorCode::ParseError, "expected " + std::to_string(grid.size()) + " data rows");
  return polar_decompose(ScalarField(grid, std::move(re)), ScalarField(grid, std::move(im)), hbar);
}

PolarState read_state_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::IoError, "cannot open " + path);
  return read_state_csv(f);
}

void write_state_csv(std::ostream& out, const PolarState& s) {
  const Grid& g = s.grid();
  out << std::setprecision(17);
  for (std::size_t k = 0; k < g.dim(); ++k) {
    const Axis& a = g.axis(k);
    out << 'q' << k + 1 << '(' << a.lower << ':' << a.upper << ':' << a.count << "),";
  }
  out << "re,im,hbar=" << s.hbar() << '\n';
  const auto re = s.psi_real();
  const auto im = s.psi_imag();
  std::array<double, 3> q{};
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.point(i, std::span<double>(q.data(), g.dim()));
    for (std::size_t k = 0; k < g.dim(); ++k) out << q[k] << ',';
    out << re[i] << ',' << im[i] << '\n';
  }
}

}  // namespace qpot
