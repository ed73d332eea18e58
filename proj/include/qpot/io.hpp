#pragma once

#include <istream>
#include <string>

#include "json.hpp"

#include "qpot/covariance.hpp"
#include "qpot/mixed.hpp"
#include "qpot/qpotential.hpp"

namespace qpot {

using json = nlohmann::ordered_json;

json to_json(const Matrix& m);
json to_json(const Vector& v);
json to_json(const SymMatrix& m);
/// Scalars and matrices only; the Q field is summarized by its masked-cell count.
json to_json(const QpReport& r);
json to_json(const CovarianceReport& r);
json to_json(const RsurResult& r);
json to_json(const Theorem4Result& r);

/**
 * Mixture description:
 *   {"hbar": 1, "grid": {"lower": -10, "upper": 10, "points": 513},
 *    "components": [{"weight": 0.5, "type": "ho", "n": 0, "dq0": 0.7071},
 *                   {"weight": 0.5, "type": "gaussian", "variance": 0.5, "mean": 0, "momentum": 1}]}
 * Types: ho (n, dq0), pt (lambda, mu), gaussian (variance, mean, momentum, chirp).
 */
MixedState read_mixture_json(std::istream& in);
MixedState read_mixture_json_file(const std::string& path);

}  // namespace qpot
