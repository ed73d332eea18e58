#include "qpot/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qpot {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NonFiniteField: return "NonFiniteField";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::ArgumentOutOfDomain: return "ArgumentOutOfDomain";
    case ErrorCode::OrderOutOfRange: return "OrderOutOfRange";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::UnwrapFailure: return "UnwrapFailure";
    case ErrorCode::BoxTooSmall: return "BoxTooSmall";
    case ErrorCode::NotSymplectic: return "NotSymplectic";
    case ErrorCode::ExpDivergence: return "ExpDivergence";
    case ErrorCode::SingularBlock: return "SingularBlock";
    case ErrorCode::DegenerateTestFunction: return "DegenerateTestFunction";
    case ErrorCode::NodeDominatedState: return "NodeDominatedState";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::ClassicalCorrelationsPresent: return "ClassicalCorrelationsPresent";
    case ErrorCode::DimensionUnsupported: return "DimensionUnsupported";
    case ErrorCode::MaskDominated: return "MaskDominated";
    case ErrorCode::PhaseMissing: return "PhaseMissing";
    case ErrorCode::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorCode::InvalidMixture: return "InvalidMixture";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

// Grid -----------------------------------------------------------------------

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 3) {
    fail(ErrorCode::DimensionUnsupported,
         "grid dimension must be 1..3, got " + std::to_string(axes_.size()));
  }
  for (const auto& a : axes_) {
    if (a.count < 16) fail(ErrorCode::InvalidGrid, "each axis needs at least 16 points");
    if (!std::isfinite(a.lower) || !std::isfinite(a.upper) || !(a.upper > a.lower)) {
      fail(ErrorCode::InvalidGrid, "axis bounds must be finite with upper > lower");
    }
  }
  size_ = 1;
  for (std::size_t k = axes_.size(); k-- > 0;) {
    strides_[k] = size_;
    size_ *= axes_[k].count;
  }
}

Grid Grid::line(double lower, double upper, std::size_t count) {
  return Grid({Axis{lower, upper, count}});
}

Grid Grid::cube(std::size_t dim, double half_width, std::size_t count) {
  return Grid(std::vector<Axis>(dim, Axis{-half_width, half_width, count}));
}

std::array<std::size_t, 3> Grid::unravel(std::size_t flat) const {
  std::array<std::size_t, 3> idx{};
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    idx[k] = flat / strides_[k];
    flat %= strides_[k];
  }
  return idx;
}

double Grid::coord(std::size_t flat, std::size_t k) const {
  return axes_[k].coord((flat / strides_[k]) % axes_[k].count);
}

void Grid::point(std::size_t flat, std::span<double> out) const {
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    out[k] = axes_[k].coord(flat / strides_[k]);
    flat %= strides_[k];
  }
}

// ScalarField ----------------------------------------------------------------

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    fail(ErrorCode::GridMismatch, "field length does not match grid size");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) fail(ErrorCode::NonFiniteField, "field contains NaN or Inf");
  }
}

ScalarField ScalarField::zeros(const Grid& grid) {
  return ScalarField(grid, std::vector<double>(grid.size(), 0.0));
}

ScalarField ScalarField::coordinate(const Grid& grid, std::size_t k) {
  if (k >= grid.dim()) fail(ErrorCode::DimensionMismatch, "coordinate index out of range");
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = grid.coord(i, k);
  return ScalarField(grid, std::move(v));
}

// SymMatrix ------------------------------------------------------------------

SymMatrix::SymMatrix(const Matrix& m) : m_(m) {
  if (m.rows() != m.cols()) fail(ErrorCode::DimensionMismatch, "matrix is not square");
  if (!m.allFinite()) fail(ErrorCode::NonFiniteField, "matrix has non-finite entries");
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    fail(ErrorCode::NotSymmetric, "asymmetry " + std::to_string(asym));
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(std::size_t n) {
  return SymMatrix(Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
  return SymMatrix(m);
}

SymMatrix SymMatrix::symmetrized(const Matrix& m) {
  if (m.rows() != m.cols()) fail(ErrorCode::DimensionMismatch, "matrix is not square");
  return SymMatrix(Matrix(0.5 * (m + m.transpose())));
}

// Quadrature -----------------------------------------------------------------

std::vector<double> simpson_weights(std::size_t count, double h) {
  if (count < 4) fail(ErrorCode::GridTooCoarse, "Simpson needs at least 4 points");
  std::vector<double> w(count, 0.0);
  const std::size_t intervals = count - 1;
  const std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
  for (std::size_t i = 0; i < simpson_end; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  if (simpson_end != intervals) {
    const std::size_t i = simpson_end;
    w[i] += 3.0 * h / 8.0;
    w[i + 1] += 9.0 * h / 8.0;
    w[i + 2] += 9.0 * h / 8.0;
    w[i + 3] += 3.0 * h / 8.0;
  }
  return w;
}

double integrate(const Grid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) fail(ErrorCode::GridMismatch, "sample count mismatch");
  std::array<std::vector<double>, 3> w;
  for (std::size_t k = 0; k < grid.dim(); ++k) {
    w[k] = simpson_weights(grid.axis(k).count, grid.axis(k).spacing());
  }
  double total = 0.0;
  if (grid.dim() == 1) {
    for (std::size_t i = 0; i < values.size(); ++i) total += w[0][i] * values[i];
  } else if (grid.dim() == 2) {
    const std::size_t n1 = grid.axis(1).count;
    for (std::size_t i = 0; i < grid.axis(0).count; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n1; ++j) row += w[1][j] * values[i * n1 + j];
      total += w[0][i] * row;
    }
  } else {
    const std::size_t n1 = grid.axis(1).count, n2 = grid.axis(2).count;
    for (std::size_t i = 0; i < grid.axis(0).count; ++i) {
      double plane = 0.0;
      for (std::size_t j = 0; j < n1; ++j) {
        double row = 0.0;
        const double* p = values.data() + (i * n1 + j) * n2;
        for (std::size_t k = 0; k < n2; ++k) row += w[2][k] * p[k];
        plane += w[1][j] * row;
      }
      total += w[0][i] * plane;
    }
  }
  if (!std::isfinite(total)) fail(ErrorCode::NonFiniteField, "integral is not finite");
  return total;
}

double integrate(const ScalarField& f) { return integrate(f.grid(), f.values()); }

double integrate_product(const ScalarField& f, const ScalarField& g) {
  if (!(f.grid() == g.grid())) fail(ErrorCode::GridMismatch, "fields live on different grids");
  std::vector<double> prod(f.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = f[i] * g[i];
  return integrate(f.grid(), prod);
}

// Finite differences ---------------------------------------------------------

std::vector<double> fd_weights(int deriv, std::span<const double> offsets) {
  // Fornberg (1988), evaluated at x0 = 0.
  const int n = static_cast<int>(offsets.size()) - 1;
  if (n < deriv) fail(ErrorCode::GridTooCoarse, "stencil too small for derivative order");
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n + 1),
                                     std::vector<double>(static_cast<std::size_t>(deriv + 1), 0.0));
  double c1 = 1.0;
  double c4 = offsets[0];
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, deriv);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = offsets[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j) {
      const double c3 = offsets[static_cast<std::size_t>(i)] - offsets[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> out(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) out[static_cast<std::size_t>(i)] = c[i][deriv];
  return out;
}

namespace {

struct Stencils {
  int half = 0;
  std::vector<double> central;             // offsets -half..half
  std::vector<std::vector<double>> edge;   // edge[r]: point r from the lower edge
  std::size_t width = 0;                   // points in a one-sided stencil
};

Stencils make_stencils(int order) {
  if (order != 2 && order != 4 && order != 6 && order != 8) {
    fail(ErrorCode::InvalidOrder, "difference order must be 2, 4, 6 or 8");
  }
  Stencils s;
  s.half = order / 2;
  std::vector<double> off;
  for (int j = -s.half; j <= s.half; ++j) off.push_back(j);
  s.central = fd_weights(1, off);
  s.width = static_cast<std::size_t>(order + 1);
  for (int r = 0; r < s.half; ++r) {
    std::vector<double> o;
    for (std::size_t j = 0; j < s.width; ++j) o.push_back(static_cast<double>(j) - r);
    s.edge.push_back(fd_weights(1, o));
  }
  return s;
}

// Differentiate one strided line of n samples.
void diff_line(const Stencils& s, const double* in, double* out, std::size_t n,
               std::size_t stride, double inv_h) {
  const std::size_t half = static_cast<std::size_t>(s.half);
  for (std::size_t i = half; i + half < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < s.central.size(); ++j) {
      acc += s.central[j] * in[(i - half + j) * stride];
    }
    out[i * stride] = acc * inv_h;
  }
  for (std::size_t r = 0; r < half; ++r) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t j = 0; j < s.width; ++j) {
      lo += s.edge[r][j] * in[j * stride];
      hi += s.edge[r][j] * in[(n - 1 - j) * stride];
    }
    out[r * stride] = lo * inv_h;
    out[(n - 1 - r) * stride] = -hi * inv_h;
  }
}

}  // namespace

std::vector<double> derivative(const Grid& grid, std::span<const double> values,
                               std::size_t axis, int order) {
  if (axis >= grid.dim()) fail(ErrorCode::DimensionMismatch, "axis out of range");
  if (values.size() != grid.size()) fail(ErrorCode::GridMismatch, "sample count mismatch");
  const Stencils s = make_stencils(order);
  const std::size_t n = grid.axis(axis).count;
  if (n < std::max<std::size_t>(5, s.width)) {
    fail(ErrorCode::GridTooCoarse, "too few points for the requested stencil");
  }
  const std::size_t stride = grid.stride(axis);
  const double inv_h = 1.0 / grid.axis(axis).spacing();
  std::vector<double> out(values.size());
  const std::size_t block = stride * n;
  for (std::size_t base = 0; base < values.size(); base += block) {
    for (std::size_t off = 0; off < stride; ++off) {
      diff_line(s, values.data() + base + off, out.data() + base + off, n, stride, inv_h);
    }
  }
  return out;
}

ScalarField derivative(const ScalarField& f, std::size_t axis, int order) {
  return ScalarField(f.grid(), derivative(f.grid(), f.values(), axis, order));
}

std::vector<ScalarField> gradient(const ScalarField& f, int order) {
  std::vector<ScalarField> g;
  g.reserve(f.grid().dim());
  for (std::size_t k = 0; k < f.grid().dim(); ++k) g.push_back(derivative(f, k, order));
  return g;
}

std::vector<std::vector<ScalarField>> hessian(const ScalarField& f, int order) {
  const auto g = gradient(f, order);
  const std::size_t n = f.grid().dim();
  std::vector<std::vector<std::vector<double>>> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) raw[i].push_back(derivative(f.grid(), g[i].values(), j, order));
  }
  std::vector<std::vector<ScalarField>> h(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> v(f.size());
      for (std::size_t p = 0; p < v.size(); ++p) v[p] = 0.5 * (raw[i][j][p] + raw[j][i][p]);
      h[i].emplace_back(f.grid(), std::move(v));
    }
  }
  return h;
}

// Linear algebra -------------------------------------------------------------

SymEigen sym_eig(const SymMatrix& sym) {
  Matrix a = sym.matrix();
  const Eigen::Index n = a.rows();
  Matrix v = Matrix::Identity(n, n);
  const double norm = a.norm();
  auto off_norm = [&]() {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  for (int sweep = 0; sweep < 100 && norm > 0.0 && off_norm() >= 1e-13 * norm; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) < a(j, j); });
  SymEigen out{Vector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

Matrix cholesky_lower(const SymMatrix& b) {
  const Matrix& m = b.matrix();
  const Eigen::Index n = m.rows();
  Matrix l = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = m(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > 0.0)) fail(ErrorCode::NotPositiveDefinite, "Cholesky pivot is not positive");
    l(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      l(i, j) = (m(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
    }
  }
  return l;
}

Vector gen_eig_spd(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) fail(ErrorCode::DimensionMismatch, "pencil dimensions differ");
  const Matrix g = cholesky_lower(b);
  const auto lower = g.triangularView<Eigen::Lower>();
  const Matrix x = lower.solve(a.matrix());                 // G⁻¹A
  const Matrix c = lower.solve(x.transpose()).transpose();  // G⁻¹AG⁻ᵀ
  return sym_eig(SymMatrix::symmetrized(c)).values;
}

SymMatrix inverse_spd(const SymMatrix& a) {
  const Matrix g = cholesky_lower(a);
  const Eigen::Index n = g.rows();
  const Matrix ginv = g.triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n));
  return SymMatrix::symmetrized(ginv.transpose() * ginv);
}

}  // namespace qpot
