#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qpot/bounds.hpp"
#include "qpot/covariance.hpp"
#include "qpot/specfun.hpp"

namespace qpot::cli {

namespace {

using Idx = Eigen::Index;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

double single_value(const std::string& text, const char* flag, double fallback) {
  if (text.empty()) return fallback;
  const auto v = parse_values(text);
  if (v.size() != 1) fail(ErrorCode::ParseError, std::string(flag) + " takes a single value for this command");
  return v.front();
}

int as_int(double x, const char* flag) {
  if (x != std::round(x)) fail(ErrorCode::ParseError, std::string(flag) + " must be an integer");
  return static_cast<int>(x);
}

StateSpec resolved_spec(const RunConfig& cfg) {
  StateSpec s = cfg.state;
  s.name = cfg.state_arg;
  s.n = as_int(single_value(cfg.n_arg, "--n", s.n), "--n");
  s.mu = as_int(single_value(cfg.mu_arg, "--mu", s.mu), "--mu");
  s.t = single_value(cfg.t_arg, "--t", s.t);
  s.beta_hnu = single_value(cfg.beta_arg, "--beta-hnu", s.beta_hnu);
  return s;
}

bool is_mixed(const RunConfig& cfg) { return cfg.state_arg == "thermal" || ends_with(cfg.state_arg, ".json"); }

BuiltinState load_pure(const RunConfig& cfg) {
  if (ends_with(cfg.state_arg, ".csv")) {
    PolarState s = read_state_csv(cfg.state_arg);
    const std::vector<double> m(s.dim(), 1.0 / cfg.state.mass);
    return BuiltinState{cfg.state_arg, std::move(s), SymMatrix::diagonal(m), cfg.state.mass, std::nullopt,
                        std::nullopt};
  }
  return make_builtin(resolved_spec(cfg));
}

MixedState load_mixed(const RunConfig& cfg) {
  if (cfg.state_arg == "thermal") return make_thermal(resolved_spec(cfg));
  return read_mixture_json_file(cfg.state_arg);
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Check bound_check(std::string name, double value, double limit) {
  // Passes when value ≤ limit.
  return Check{std::move(name), limit - value, value <= limit, "", false};
}

/// How theorem2_bound relates to the true maximum of the bound functional.
std::string theorem2_status(const BuiltinState& b) {
  if (b.state.dim() == 1) return "saturated";
  if (b.gaussian) return "exact";
  return "extremal candidate";
}

Check skipped(std::string name, std::string reason) { return Check{std::move(name), 0.0, true, std::move(reason), true}; }

json checks_json(const std::vector<Check>& checks) {
  json arr = json::array();
  for (const auto& c : checks) {
    json j{{"name", c.name}, {"margin", c.margin}, {"pass", c.pass}};
    if (c.skipped) j["skipped"] = true;
    if (!c.note.empty()) j["note"] = c.note;
    arr.push_back(std::move(j));
  }
  return arr;
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, rows);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", rows);
  } else if (j.is_number_float()) {
    rows.emplace_back(prefix, fmt(j.get<double>()));
  } else if (j.is_string()) {
    rows.emplace_back(prefix, j.get<std::string>());
  } else {
    rows.emplace_back(prefix, j.dump());
  }
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) fail(ErrorCode::IoError, "cannot write " + cfg.out);
  f << text;
}

std::string as_key_value_csv(const json& j) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  std::ostringstream s;
  s << "key,value\n";
  for (const auto& [k, v] : rows) s << k << ',' << v << '\n';
  return s.str();
}

/// Table output: CSV with a header row, or a JSON array of row objects.
std::string table(const RunConfig& cfg, const std::vector<std::string>& cols,
                  const std::vector<std::vector<double>>& rows) {
  if (cfg.format == Format::Csv) {
    std::ostringstream s;
    for (std::size_t c = 0; c < cols.size(); ++c) s << (c ? "," : "") << cols[c];
    s << '\n';
    for (const auto& r : rows) {
      for (std::size_t c = 0; c < r.size(); ++c) s << (c ? "," : "") << fmt(r[c]);
      s << '\n';
    }
    return s.str();
  }
  json arr = json::array();
  for (const auto& r : rows) {
    json o = json::object();
    for (std::size_t c = 0; c < cols.size(); ++c) o[cols[c]] = r[c];
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

int finish_checks(const RunConfig& cfg, const std::string& state, const std::vector<Check>& checks,
                  std::ostream& out) {
  const bool all = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  if (cfg.format == Format::Csv) {
    std::ostringstream s;
    s << "name,margin,pass,note\n";
    for (const auto& c : checks) {
      s << c.name << ',' << fmt(c.margin) << ',' << (c.pass ? "true" : "false") << ','
        << (c.skipped ? "skipped: " + c.note : c.note) << '\n';
    }
    emit(cfg, s.str(), out);
  } else {
    json doc{{"command", "verify"}, {"state", state}, {"checks", checks_json(checks)}, {"pass", all}};
    emit(cfg, doc.dump(2) + "\n", out);
  }
  return all ? 0 : 1;
}

double thermal_closed_form(double x, double nu, double hbar) {
  const double dq02 = hbar / 2.0;
  return hbar * hbar * nu / (8.0 * dq02 * std::tanh(0.5 * x));
}

}  // namespace

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> parse_values(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "cannot parse '" + s + "' in '" + text + "'");
    }
    if (used != s.size()) fail(ErrorCode::ParseError, "cannot parse '" + s + "' in '" + text + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() == 2) {
      const double a = number(parts[0]), b = number(parts[1]);
      if (a != std::round(a) || b != std::round(b) || b < a) fail(ErrorCode::ParseError, "bad range '" + text + "'");
      for (double v = a; v <= b; v += 1.0) out.push_back(v);
    } else if (parts.size() == 3) {
      const double a = number(parts[0]), b = number(parts[1]);
      const double c = number(parts[2]);
      if (c < 1 || c != std::round(c)) fail(ErrorCode::ParseError, "bad count in '" + text + "'");
      const int count = static_cast<int>(c);
      for (int i = 0; i < count; ++i) out.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
    } else {
      fail(ErrorCode::ParseError, "bad range '" + text + "'");
    }
    return out;
  }
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
  if (out.empty()) fail(ErrorCode::ParseError, "empty list");
  return out;
}

std::vector<Check> verify_pure(const BuiltinState& b, std::uint64_t seed) {
  const PolarState& s = b.state;
  const SymMatrix& m = b.metric;
  const double hbar = s.hbar();
  const double q = mvqp(s, m);
  std::vector<Check> out;

  if (b.analytic_mvqp) {
    out.push_back(bound_check("mvqp_closed_form", rel_err(q, *b.analytic_mvqp), 1e-6));
  } else {
    out.push_back(skipped("mvqp_closed_form", "no closed form for this state"));
  }
  const auto rep = qp_report(s, m);
  out.push_back(bound_check("mvqp_second_derivative_form", rel_err(mvqp_laplacian_form(s, m), q), 1e-5));
  out.push_back(bound_check("q_matrix_trace", rel_err(0.25 * rep.q_matrix.trace() * hbar * hbar / 2.0, q), 1e-8));

  RandomTestFunctionGenerator gen(seed);
  const BoundContext ctx(s, m);
  double min_slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 200; ++i) min_slack = std::min(min_slack, ctx.evaluate(gen.next(s)).slack);
  out.push_back(Check{"theorem1_random_t0", min_slack + 1e-6 * q, min_slack >= -1e-6 * q, "200 seeded T0", false});

  const double t2 = theorem2_bound(s, m);
  out.push_back(bound_check("theorem2_bound", t2, q * (1.0 + 1e-6)));
  out.back().note = theorem2_status(b);
  if (s.dim() == 1) out.push_back(bound_check("theorem2_saturation_1df", rel_err(t2, q), 1e-5));

  const auto lb = linear_bound(s, m);
  out.push_back(bound_check("linear_bound", lb.upper, q * (1.0 + 1e-6)));

  const auto cov = covariance_report(s, m);
  const Idx n = static_cast<Idx>(s.dim());
  if (b.gaussian) {
    if (s.dim() == 1) out.push_back(bound_check("linear_bound_equality_gaussian", rel_err(lb.upper, q), 1e-6));
    const Matrix grid_prod = cov.V.matrix() * cov.Vnc.matrix() - 0.25 * hbar * hbar * Matrix::Identity(n, n);
    out.push_back(bound_check("v_vnc_identity_grid", grid_prod.cwiseAbs().maxCoeff() / (0.25 * hbar * hbar), 1e-5));
    const auto ga = covariance_report(*b.gaussian);
    const Matrix an_prod = ga.V.matrix() * ga.Vnc.matrix() - 0.25 * hbar * hbar * Matrix::Identity(n, n);
    out.push_back(bound_check("v_vnc_identity_closed_form", an_prod.cwiseAbs().maxCoeff() / (0.25 * hbar * hbar), 1e-8));
  }

  const auto mc = min_quantum_correlation(cov, m);
  out.push_back(Check{"min_quantum_correlation", mc.trace - mc.lambda_max, mc.pass, "", false});
  const auto rs = rsur_check(cov, hbar);
  out.push_back(Check{"rsur", rs.min_eigenvalue + 1e-8 * cov.Vt.matrix().norm(), rs.pass, "", false});
  if (cov.vt_direct) {
    out.push_back(bound_check("momentum_split",
                              (cov.Vt.matrix() - cov.vt_direct->matrix()).norm() / cov.Vt.matrix().norm(), 1e-5));
  }

  if (s.dim() == 1) {
    const double mass = 1.0 / m(0, 0);
    const auto t4 = theorem4_check(cov, q, mass, hbar);
    out.push_back(Check{"vnc_uncertainty_1df", t4.vnc_dq2 - (1.0 - 1e-6) * 0.25 * hbar * hbar, t4.vnc_pass, "", false});
    out.push_back(Check{"mvqp_uncertainty_1df", t4.mvqp_dq2 - (1.0 - 1e-6) * hbar * hbar / (8.0 * mass), t4.mvqp_pass, "", false});
    out.push_back(Check{"classical_delta_1df", t4.delta + 1e-8 * t4.delta_scale, t4.delta_pass, "", false});
    out.push_back(Check{"vnc_uncertainty_implies_rsur", 0.0, !t4.vnc_pass || rs.pass, "", false});
  } else {
    out.push_back(skipped("theorem4_chain", "stated for one degree of freedom"));
  }

  if (cov.Vc.matrix().norm() < 1e-6 * cov.Vt.matrix().norm()) {
    const auto nc = no_classical_corr_check(cov, hbar, m);
    out.push_back(Check{"no_classical_correlation", nc.min_eigenvalue - (1.0 - 1e-6) * 0.25 * hbar * hbar, nc.pass, "", false});
  } else {
    out.push_back(skipped("no_classical_correlation", "state carries classical correlations"));
  }
  return out;
}

std::vector<Check> verify_mixed(const MixedState& ms, double nu, std::optional<double> beta_hnu) {
  std::vector<Check> out;
  const std::size_t n = ms.dim();
  const SymMatrix m = SymMatrix::diagonal(std::vector<double>(n, nu));

  const auto t3 = theorem3_bound(ms, m);
  out.push_back(Check{"theorem3_chain", t3.mixed_mvqp - t3.bound, t3.pass, "", false});
  const auto mc = mixed_min_correlation(ms, m);
  out.push_back(Check{"mixed_min_correlation", mc.trace - mc.weighted_lambda, mc.pass, "", false});
  const auto dec = vnc_convex_decomposition(ms, m);
  const double dmin = sym_eig(dec.delta).values(0);
  const double dscale = std::max(dec.total.matrix().trace(), 1e-300);
  out.push_back(Check{"delta_vnc_psd", dmin + 1e-8 * dscale, dmin >= -1e-8 * dscale, "", false});

  if (n == 1) {
    const auto d = assemble_density(ms);
    const double dv = density_vnc(d);
    out.push_back(bound_check("convex_total_vs_density", rel_err(dec.total(0, 0), dv), 1e-4));
    const auto off = offdiagonal_amplitude_derivative(d);
    const auto half = half_diagonal_derivative(d);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < off.size(); ++i) {
      worst = std::max(worst, std::abs(off[i] - half[i]));
      scale = std::max(scale, std::abs(half[i]));
    }
    out.push_back(bound_check("half_diagonal_derivative", worst / std::max(scale, 1e-300), 1e-5));
    const auto dphase = mixed_phase_gradient(d);
    const auto diag = d.diagonal();
    std::vector<double> w(diag.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = diag[i] * dphase[i];
    const double lhs = integrate(d.grid(), w);
    double rhs = 0.0;
    for (std::size_t k = 0; k < ms.size(); ++k) {
      rhs += ms.weights[k] * covariance_report(ms.components[k], m).pc(0);
    }
    out.push_back(bound_check("mean_phase_gradient", std::abs(lhs - rhs), 1e-6));

    if (beta_hnu) {
      const double exact = thermal_closed_form(*beta_hnu, nu, ms.hbar);
      out.push_back(bound_check("thermal_mvqp", rel_err(mixed_mvqp(d, nu), exact), 1e-3));
      double var = 0.0;
      for (std::size_t k = 0; k < ms.size(); ++k) var += ms.weights[k] * position_covariance(ms.components[k])(0, 0);
      const double var_exact = 0.5 * ms.hbar / std::tanh(0.5 * *beta_hnu);
      out.push_back(bound_check("thermal_variance", rel_err(var, var_exact), 1e-4));
      double vc = 0.0;
      for (const auto& c : ms.components) vc = std::max(vc, std::abs(covariance_report(c, m).Vc(0, 0)));
      out.push_back(bound_check("thermal_classical_covariance", vc, 1e-8));
      out.push_back(bound_check("thermal_delta_vnc", std::abs(dec.delta(0, 0)), 1e-8));
    }
  } else {
    out.push_back(skipped("density_grid_checks", "density grids are 1-DF only"));
  }
  return out;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (is_mixed(cfg)) {
    const auto ms = load_mixed(cfg);
    std::optional<double> beta;
    if (cfg.state_arg == "thermal") beta = resolved_spec(cfg).beta_hnu;
    return finish_checks(cfg, cfg.state_arg, verify_mixed(ms, cfg.state_arg == "thermal" ? cfg.state.nu : 1.0 / cfg.state.mass, beta),
                         out);
  }
  const auto b = load_pure(cfg);
  return finish_checks(cfg, b.name, verify_pure(b, cfg.seed), out);
}

int cmd_report(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  json doc;
  if (is_mixed(cfg)) {
    const auto ms = load_mixed(cfg);
    const double nu = cfg.state_arg == "thermal" ? cfg.state.nu : 1.0 / cfg.state.mass;
    const SymMatrix m = SymMatrix::diagonal(std::vector<double>(ms.dim(), nu));
    const auto dec = vnc_convex_decomposition(ms, m);
    const auto t3 = theorem3_bound(ms, m);
    doc = json{{"state", cfg.state_arg},
               {"components", ms.size()},
               {"weights", ms.weights},
               {"hbar", ms.hbar},
               {"vnc_convex_sum", to_json(dec.sum_k)},
               {"delta_vnc", to_json(dec.delta)},
               {"vnc_total", to_json(dec.total)},
               {"mixed_mvqp", t3.mixed_mvqp},
               {"convex_mvqp", t3.convex_mvqp},
               {"theorem3_bound", t3.bound}};
    if (ms.dim() == 1) {
      const auto d = assemble_density(ms);
      doc["mixed_mvqp_density_grid"] = mixed_mvqp(d, nu);
      doc["vnc_density_grid"] = density_vnc(d);
    }
    if (cfg.state_arg == "thermal") {
      doc["mvqp_closed_form"] = thermal_closed_form(resolved_spec(cfg).beta_hnu, nu, ms.hbar);
    }
  } else {
    const auto b = load_pure(cfg);
    const PolarState& s = b.state;
    const double hbar = s.hbar();
    const auto qp = qp_report(s, b.metric);
    const auto cov = covariance_report(s, b.metric);
    const auto lb = linear_bound(s, b.metric);
    doc = json{{"state", b.name},
               {"dim", s.dim()},
               {"hbar", hbar},
               {"metric", to_json(b.metric)},
               {"quantum_potential", to_json(qp)},
               {"covariance", to_json(cov)},
               {"rsur", to_json(rsur_check(cov, hbar))},
               {"theorem2_bound", theorem2_bound(s, b.metric)},
               {"theorem2_status", theorem2_status(b)},
               {"linear_bound", lb.upper}};
    if (b.analytic_mvqp) doc["mvqp_closed_form"] = *b.analytic_mvqp;
    const Matrix vm = cov.Vnc.matrix() * b.metric.matrix();
    std::vector<double> per_df;
    for (Idx i = 0; i < vm.rows(); ++i) per_df.push_back(0.5 * vm(i, i));
    doc["per_df_mvqp"] = per_df;
    if (s.dim() == 1) {
      const double mass = 1.0 / b.metric(0, 0);
      const auto t4 = theorem4_check(cov, qp.mvqp, mass, hbar);
      doc["theorem4"] = to_json(t4);
      doc["mvqp_uncertainty_saturated"] = rel_err(t4.mvqp_dq2, hbar * hbar / (8.0 * mass)) <= 1e-6;
    }
    const StateSpec spec = resolved_spec(cfg);
    if (cfg.state_arg == "squeezed") {
      std::vector<double> closed;
      for (std::size_t i = 0; i < s.dim(); ++i) {
        const double a = (i % 2 == 0) ? spec.a : 1.0 / spec.a;
        const double dq2 = 0.5 * hbar * a * a;
        const double c = std::cos(spec.nu * spec.t), sn = std::sin(spec.nu * spec.t);
        closed.push_back(hbar * hbar * spec.nu / (8.0 * dq2) / (c * c + sn * sn / std::pow(a, 4)));
      }
      doc["per_df_mvqp_closed_form"] = closed;
    }
  }
  emit(cfg, cfg.format == Format::Csv ? as_key_value_csv(doc) : doc.dump(2) + "\n", out);
  return 0;
}

int cmd_figure1(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto mus = parse_values(cfg.mu_arg.empty() ? "1:10" : cfg.mu_arg);
  const auto ns = parse_values(cfg.n_arg.empty() ? "1,3,5,7" : cfg.n_arg);
  const double mass = 0.5;  // ħ²/2m = 1
  std::vector<std::vector<double>> rows;
  for (double n : ns) {
    if (as_int(n, "--n") % 2 == 0) err << "warning: L_Q(tanh^n) vanishes for even n = " << n << "\n";
  }
  for (double mu : mus) {
    for (double n : ns) {
      rows.push_back({mu, n, pt_bound_tanh_n(as_int(mu, "--mu"), as_int(n, "--n"), mass, 1.0)});
    }
  }
  emit(cfg, table(cfg, {"mu", "n", "L_Q"}, rows), out);
  return 0;
}

int cmd_figure2(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto mus = parse_values(cfg.mu_arg.empty() ? "1:40" : cfg.mu_arg);
  const double mass = 0.5;
  std::vector<std::vector<double>> rows;
  for (double mu : mus) {
    const int m = as_int(mu, "--mu");
    const double q = pt_mvqp(m, m, mass, 1.0);
    const double lin = 1.0 / (8.0 * mass * pt_position_variance(m));
    rows.push_back({mu, q, lin, q - lin});
  }
  emit(cfg, table(cfg, {"mu", "mvqp", "linear_bound", "difference"}, rows), out);
  return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  std::vector<std::vector<double>> rows;
  if (cfg.state_arg == "thermal") {
    const auto xs = parse_values(cfg.beta_arg.empty() ? "0.5,1,2,8" : cfg.beta_arg);
    RunConfig c = cfg;
    for (double x : xs) {
      c.beta_arg = fmt(x);
      const auto ms = load_mixed(c);
      const SymMatrix m = SymMatrix::scalar(cfg.state.nu);
      const auto t3 = theorem3_bound(ms, m);
      rows.push_back({x, mixed_mvqp(assemble_density(ms), cfg.state.nu),
                      thermal_closed_form(x, cfg.state.nu, ms.hbar), t3.bound});
    }
    emit(cfg, table(cfg, {"beta_hnu", "mvqp", "closed_form", "theorem3_bound"}, rows), out);
    return 0;
  }
  std::string param;
  std::vector<double> values;
  RunConfig c = cfg;
  std::string* slot = nullptr;
  if (cfg.state_arg == "ho") {
    param = "n";
    values = parse_values(cfg.n_arg.empty() ? "0:10" : cfg.n_arg);
    slot = &c.n_arg;
  } else if (cfg.state_arg == "pt") {
    param = "mu";
    values = parse_values(cfg.mu_arg.empty() ? "1:10" : cfg.mu_arg);
    slot = &c.mu_arg;
  } else if (cfg.state_arg == "inverted" || cfg.state_arg == "squeezed" || cfg.state_arg == "free" ||
             cfg.state_arg == "coherent") {
    param = "t";
    values = parse_values(cfg.t_arg.empty() ? "0:1:5" : cfg.t_arg);
    slot = &c.t_arg;
  } else {
    fail(ErrorCode::ParseError, "sweep supports ho, pt, thermal, inverted, squeezed, free and coherent");
  }
  for (double v : values) {
    *slot = fmt(v);
    if (param == "mu") c.state.lambda = as_int(v, "--mu");
    const auto b = load_pure(c);
    rows.push_back({v, mvqp(b.state, b.metric), b.analytic_mvqp.value_or(std::nan("")),
                    linear_bound(b.state, b.metric).upper, theorem2_bound(b.state, b.metric)});
  }
  emit(cfg, table(cfg, {param, "mvqp", "closed_form", "linear_bound", "theorem2_bound"}, rows), out);
  return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum potential bounds: verification suites, reports and figure data"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string vdiag, format;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--state", cfg.state_arg,
                    "ho, pt, gaussian, coherent, squeezed, inverted, free, thermal, a .csv state or a .json mixture");
    sub->add_option("--n", cfg.n_arg, "HO level, or a list for figure1/sweep");
    sub->add_option("--lambda", cfg.state.lambda, "Pöschl–Teller λ");
    sub->add_option("--mu", cfg.mu_arg, "Pöschl–Teller μ, or a list");
    sub->add_option("--beta-hnu", cfg.beta_arg, "ħβν of the thermal state, or a list for sweep");
    sub->add_option("--K", cfg.state.k, "thermal truncation; 0 chooses it");
    sub->add_option("--dim", cfg.state.dim, "degrees of freedom");
    sub->add_option("--vdiag", vdiag, "diagonal of the position covariance, comma separated");
    sub->add_option("--a", cfg.state.a, "squeezing parameter");
    sub->add_option("--t", cfg.t_arg, "evolution time, or a list for sweep");
    sub->add_option("--mass", cfg.state.mass, "mass; the metric is M = 1/m");
    sub->add_option("--nu", cfg.state.nu, "oscillator frequency");
    sub->add_option("--hbar", cfg.state.hbar, "reduced Planck constant");
    sub->add_option("--grid-points", cfg.state.grid_points, "points per axis");
    sub->add_option("--grid-box", cfg.state.grid_box, "half-width of the box");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", cfg.seed, "seed for randomized checks");
  };
  auto* verify = app.add_subcommand("verify", "run the property suite for a state");
  auto* report = app.add_subcommand("report", "print quantum-potential and covariance reports");
  auto* fig1 = app.add_subcommand("figure1", "L_Q(tanh^n q) for Pöschl–Teller ground states");
  auto* fig2 = app.add_subcommand("figure2", "mean quantum potential minus the linear bound");
  auto* sweep = app.add_subcommand("sweep", "evaluate bounds over a parameter list");
  for (auto* sub : {verify, report, fig1, fig2, sweep}) add_common(sub);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (!vdiag.empty()) cfg.state.vdiag = parse_values(vdiag);
    const bool document = verify->parsed() || report->parsed();
    cfg.format = format.empty() ? (document ? Format::Json : Format::Csv) : (format == "csv" ? Format::Csv : Format::Json);
    if (verify->parsed()) return cmd_verify(cfg, out, err);
    if (report->parsed()) return cmd_report(cfg, out, err);
    if (fig1->parsed()) return cmd_figure1(cfg, out, err);
    if (fig2->parsed()) return cmd_figure2(cfg, out, err);
    return cmd_sweep(cfg, out, err);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qpot::cli
