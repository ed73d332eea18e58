#pragma once

#include <doctest.h>

#include <cmath>
#include <random>

#include "qpot/error.hpp"
#include "qpot/numerics.hpp"

namespace qpot::test {

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

/// Random SPD matrix with eigenvalues in [lo, hi].
inline SymMatrix random_spd(std::mt19937_64& rng, std::size_t n, double lo = 0.3, double hi = 2.0) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  const Eigen::HouseholderQR<Matrix> qr(a);
  const Matrix q = qr.householderQ();
  Vector d(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = u(rng);
  return SymMatrix::symmetrized(q * d.asDiagonal() * q.transpose());
}

}  // namespace qpot::test

#define CHECK_THROWS_CODE(expr, ec)                         \
  do {                                                      \
    bool caught_ = false;                                   \
    try {                                                   \
      (void)(expr);                                         \
    } catch (const ::qpot::Error& e_) {                     \
      caught_ = true;                                       \
      CHECK_MESSAGE(e_.code() == (ec), e_.what());          \
    }                                                       \
    CHECK_MESSAGE(caught_, "expected an error: " #ec);      \
  } while (0)
