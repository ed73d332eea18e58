#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "qpot/builtin.hpp"
#include "qpot/io.hpp"

namespace qpot::cli {

enum class Command { Verify, Report, Figure1, Figure2, Sweep };
enum class Format { Csv, Json };

/// One command with its state and output settings. List-valued flags keep their raw text.
struct RunConfig {
  Command command = Command::Verify;
  StateSpec state;
  std::string state_arg = "ho";
  std::string n_arg, mu_arg, t_arg, beta_arg;
  std::string out;
  Format format = Format::Json;
  std::uint64_t seed = 1;
};

struct Check {
  std::string name;
  double margin = 0.0;  // ≥ 0 when the check holds
  bool pass = false;
  std::string note;     // reason for a skip, or a detail
  bool skipped = false;
};

/// "a,b,c", "a:b" (integer step) or "a:b:count" (evenly spaced, endpoints included).
std::vector<double> parse_values(const std::string& text);

/// Exit codes: 0 success, 1 a check failed, 2 configuration or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_report(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_figure1(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_figure2(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);

std::vector<Check> verify_pure(const BuiltinState& b, std::uint64_t seed);
std::vector<Check> verify_mixed(const MixedState& ms, double nu, std::optional<double> beta_hnu);

/// Formats with 17 significant digits.
std::string fmt(double x);

}  // namespace qpot::cli
