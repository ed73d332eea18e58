#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qpot/error.hpp"

namespace qpot {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// One uniform axis: `count` points from `lower` to `upper` inclusive.
struct Axis {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;

  double spacing() const { return (upper - lower) / static_cast<double>(count - 1); }
  double coord(std::size_t i) const { return lower + spacing() * static_cast<double>(i); }
  bool operator==(const Axis&) const = default;
};

/**
 * Tensor-product grid in 1 to 3 dimensions.
 *
 * Flat indices are row-major: the last axis varies fastest.
 */
class Grid {
 public:
  explicit Grid(std::vector<Axis> axes);

  static Grid line(double lower, double upper, std::size_t count);
  static Grid cube(std::size_t dim, double half_width, std::size_t count);

  std::size_t dim() const { return axes_.size(); }
  std::size_t size() const { return size_; }
  const Axis& axis(std::size_t k) const { return axes_.at(k); }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t stride(std::size_t k) const { return strides_[k]; }

  std::array<std::size_t, 3> unravel(std::size_t flat) const;
  double coord(std::size_t flat, std::size_t k) const;
  void point(std::size_t flat, std::span<double> out) const;

  bool operator==(const Grid& other) const { return axes_ == other.axes_; }

 private:
  std::vector<Axis> axes_;
  std::array<std::size_t, 3> strides_{};
  std::size_t size_ = 0;
};

/// Real samples on a grid. Values are checked finite on construction.
class ScalarField {
 public:
  ScalarField(Grid grid, std::vector<double> values);

  static ScalarField zeros(const Grid& grid);
  static ScalarField coordinate(const Grid& grid, std::size_t k);

  template <class F>
  static ScalarField sample(const Grid& grid, F&& f) {
    std::vector<double> v(grid.size());
    std::array<double, 3> q{};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      grid.point(i, std::span<double>(q.data(), grid.dim()));
      v[i] = f(std::span<const double>(q.data(), grid.dim()));
    }
    return ScalarField(grid, std::move(v));
  }

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Square symmetric matrix; asymmetry above 1e-12 relative is rejected.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(std::span<const double> d);
  static SymMatrix scalar(double s) { return diagonal(std::span<const double>(&s, 1)); }
  /// Symmetrizes (m + mᵀ)/2 without the asymmetry check.
  static SymMatrix symmetrized(const Matrix& m);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  Matrix m_;
};

// Quadrature ---------------------------------------------------------------

/// Composite Simpson weights for `count` points with spacing h.
/// An odd interval count closes with Simpson's 3/8 rule on the last three.
std::vector<double> simpson_weights(std::size_t count, double h);

/// Tensor-product Simpson integral of a field.
double integrate(const ScalarField& f);

/// Integral of raw samples laid out on `grid`.
double integrate(const Grid& grid, std::span<const double> values);

/// ∫ f g over the grid.
double integrate_product(const ScalarField& f, const ScalarField& g);

// Finite differences ---------------------------------------------------------

/// Fornberg weights for derivative `deriv` at 0 from the given stencil offsets.
std::vector<double> fd_weights(int deriv, std::span<const double> offsets);

/// First derivative along one axis. Central stencil of the given order in the
/// interior and one-sided stencils of the same order at the edges.
std::vector<double> derivative(const Grid& grid, std::span<const double> values,
                               std::size_t axis, int order = 4);
ScalarField derivative(const ScalarField& f, std::size_t axis, int order = 4);

std::vector<ScalarField> gradient(const ScalarField& f, int order = 4);

/// Second-derivative tensor; the returned nested vector is symmetric.
std::vector<std::vector<ScalarField>> hessian(const ScalarField& f, int order = 4);

// Linear algebra -------------------------------------------------------------

struct SymEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns, orthonormal
};

/// Cyclic Jacobi eigensolver.
SymEigen sym_eig(const SymMatrix& a);

/// Lower Cholesky factor; throws NotPositiveDefinite.
Matrix cholesky_lower(const SymMatrix& b);

/// Eigenvalues of A x = λ B x with B SPD, ascending.
Vector gen_eig_spd(const SymMatrix& a, const SymMatrix& b);

SymMatrix inverse_spd(const SymMatrix& a);

}  // namespace qpot
