#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpot/gaussian.hpp"
#include "qpot/mixed.hpp"
#include "qpot/states.hpp"

namespace qpot {

/// Parameters naming a built-in state. Unset fields take per-state defaults.
struct StateSpec {
  std::string name = "ho";  // ho, pt, gaussian, coherent, squeezed, inverted, free, thermal
  int n = 0;
  int lambda = 1;
  int mu = 1;
  double beta_hnu = 1.0;
  int k = 0;  // thermal truncation, ≤ 0 adaptive
  std::size_t dim = 1;
  std::vector<double> vdiag;
  double a = 2.0;
  double t = 0.0;
  double mass = 1.0;
  double nu = 1.0;
  double hbar = 1.0;
  std::size_t grid_points = 0;  // 0 picks the state's default
  double grid_box = 0.0;        // half-width; 0 picks the recommended box
};

/// A pure state together with the metric of its Hamiltonian and closed forms when known.
struct BuiltinState {
  std::string name;
  PolarState state;
  SymMatrix metric;  // M in ½p·Mp
  double mass = 1.0;
  std::optional<GaussianPureState> gaussian;
  std::optional<double> analytic_mvqp;
};

BuiltinState make_builtin(const StateSpec& spec);
/// Throws InvalidMixture unless spec.name is "thermal".
MixedState make_thermal(const StateSpec& spec);

/// The states every property suite runs over.
std::vector<BuiltinState> builtin_catalog(double hbar = 1.0);
/// The 1-DF members of the catalog.
std::vector<BuiltinState> builtin_catalog_1d(double hbar = 1.0);

}  // namespace qpot
