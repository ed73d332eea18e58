#include "qpot/io.hpp"

#include <fstream>

namespace qpot {

namespace {

template <typename T>
T field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail(ErrorCode::ParseError, where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::ParseError, where + ": field '" + key + "' has the wrong type");
  }
}

template <typename T>
T field_or(const json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? field<T>(j, key, where) : fallback;
}

}  // namespace

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const SymMatrix& m) { return to_json(m.matrix()); }

json to_json(const QpReport& r) {
  return json{{"mvqp", r.mvqp},
              {"masked_cells", r.masked_cells},
              {"q_matrix", to_json(r.q_matrix)},
              {"vnc", to_json(r.vnc)},
              {"q_matrix_eigenvalues", to_json(r.eigenvalues)}};
}

json to_json(const CovarianceReport& r) {
  json j{{"V", to_json(r.V)},     {"Vt", to_json(r.Vt)},       {"Vqp", to_json(r.Vqp)},
         {"Vc", to_json(r.Vc)},   {"Vnc", to_json(r.Vnc)},     {"p_mean", to_json(r.pc)},
         {"q_mean", to_json(r.q_mean)}, {"hbar", r.hbar}};
  if (r.vt_direct) j["Vt_direct"] = to_json(*r.vt_direct);
  return j;
}

json to_json(const RsurResult& r) {
  return json{{"min_eigenvalue", r.min_eigenvalue}, {"pass", r.pass}};
}

json to_json(const Theorem4Result& r) {
  return json{{"vnc_dq2", r.vnc_dq2},     {"mvqp_dq2", r.mvqp_dq2},      {"delta", r.delta},
              {"delta_scale", r.delta_scale}, {"vnc_pass", r.vnc_pass}, {"mvqp_pass", r.mvqp_pass},
              {"delta_pass", r.delta_pass}, {"pass", r.pass}};
}

MixedState read_mixture_json(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, std::string("mixture: ") + e.what());
  }
  const double hbar = field_or<double>(doc, "hbar", 1.0, "mixture");
  if (!doc.contains("grid")) fail(ErrorCode::ParseError, "mixture: missing field 'grid'");
  const json& g = doc["grid"];
  const Grid grid = Grid::line(field<double>(g, "lower", "grid"), field<double>(g, "upper", "grid"),
                               field<std::size_t>(g, "points", "grid"));
  if (!doc.contains("components") || !doc["components"].is_array() || doc["components"].empty()) {
    fail(ErrorCode::ParseError, "mixture: 'components' must be a nonempty array");
  }
  std::vector<double> weights;
  std::vector<PolarState> comps;
  std::size_t idx = 0;
  for (const json& c : doc["components"]) {
    const std::string where = "components[" + std::to_string(idx++) + "]";
    weights.push_back(field<double>(c, "weight", where));
    const auto type = field<std::string>(c, "type", where);
    if (type == "ho") {
      comps.push_back(ho_eigenstate(field<int>(c, "n", where), field_or<double>(c, "dq0", std::sqrt(hbar / 2.0), where),
                                    grid, hbar));
    } else if (type == "pt") {
      comps.push_back(poschl_teller_state(field<int>(c, "lambda", where), field<int>(c, "mu", where), grid, hbar));
    } else if (type == "gaussian") {
      const double v = field<double>(c, "variance", where);
      const double mean = field_or<double>(c, "mean", 0.0, where);
      const double p = field_or<double>(c, "momentum", 0.0, where);
      Matrix chirp(1, 1);
      chirp(0, 0) = field_or<double>(c, "chirp", 0.0, where);
      comps.push_back(gaussian_wavepacket(SymMatrix::scalar(v), std::span<const double>(&mean, 1),
                                          std::span<const double>(&p, 1), chirp, grid, hbar));
    } else {
      fail(ErrorCode::ParseError, where + ": unknown type '" + type + "'");
    }
  }
  return MixedState(std::move(weights), std::move(comps));
}

MixedState read_mixture_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  return read_mixture_json(in);
}

}  // namespace qpot
