#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "commands.hpp"
#include "qpot/bounds.hpp"
#include "support.hpp"

using namespace qpot;
using qpot::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> csv_rows(const std::string& text, std::string* header = nullptr) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> r;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) r.push_back(std::stod(cell));
    rows.push_back(r);
  }
  return rows;
}

std::string temp_path(const std::string& name) { return "/tmp/qpot_cli_test_" + name; }

}  // namespace

TEST_CASE("value lists") {
  CHECK(cli::parse_values("1,3,5") == std::vector<double>{1, 3, 5});
  CHECK(cli::parse_values("2:5") == std::vector<double>{2, 3, 4, 5});
  CHECK(cli::parse_values("0:1:5") == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK_THROWS_CODE(cli::parse_values("a,b"), ErrorCode::ParseError);
  CHECK_THROWS_CODE(cli::parse_values("5:1"), ErrorCode::ParseError);
}

TEST_CASE("verify exit codes") {
  const auto ho = call({"verify", "--state", "ho", "--n", "0"});
  CHECK(ho.code == 0);
  const auto doc = json::parse(ho.out);
  CHECK(doc["pass"] == true);
  CHECK(doc["checks"].size() > 10);

  CHECK(call({"verify", "--state", "gaussian", "--dim", "2", "--vdiag", "1,4"}).code == 0);
  CHECK(call({"verify", "--state", "thermal", "--beta-hnu", "1", "--K", "40"}).code == 0);
  CHECK(call({"verify", "--state", "pt", "--lambda", "3", "--mu", "3"}).code == 0);

  CHECK(call({"verify", "--state", "nonsense"}).code == 2);
  CHECK(call({"verify", "--bogus-flag", "1"}).code == 2);
  CHECK(call({"verify", "--format", "xml"}).code == 2);
  CHECK(call({}).code == 2);
  const auto trunc = call({"verify", "--state", "thermal", "--beta-hnu", "0.5", "--K", "3"});
  CHECK(trunc.code == 2);
  CHECK(trunc.err.find("TruncationInsufficient") != std::string::npos);
}

TEST_CASE("verify is deterministic for a fixed seed") {
  const auto a = call({"verify", "--state", "pt", "--lambda", "4", "--mu", "2", "--seed", "7"});
  const auto b = call({"verify", "--state", "pt", "--lambda", "4", "--mu", "2", "--seed", "7"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto csv = call({"verify", "--state", "ho", "--n", "1", "--format", "csv"});
  CHECK(csv.out.rfind("name,margin,pass,note\n", 0) == 0);
}

TEST_CASE("figure1 data") {
  const auto r = call({"figure1"});
  CHECK(r.code == 0);
  std::string header;
  const auto rows = csv_rows(r.out, &header);
  CHECK(header == "mu,n,L_Q");
  CHECK(rows.size() == 40);
  for (const auto& row : rows) {
    CHECK(row[2] > 0.0);
    // n = 1 is the extremizer and dominates the other powers.
    if (row[1] > 1.0) CHECK(row[2] < pt_bound_tanh_n(static_cast<int>(row[0]), 1, 0.5));
  }
  const auto even = call({"figure1", "--n", "2", "--mu", "3"});
  CHECK(even.code == 0);
  CHECK(even.err.find("warning") != std::string::npos);
  CHECK(csv_rows(even.out)[0][2] == 0.0);
}

TEST_CASE("figure2 data") {
  const auto r = call({"figure2", "--mu", "1:60"});
  CHECK(r.code == 0);
  std::string header;
  const auto rows = csv_rows(r.out, &header);
  CHECK(header == "mu,mvqp,linear_bound,difference");
  REQUIRE(rows.size() == 60);
  CHECK(rows[0][3] > 0.0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][3] > 0.0);
    CHECK(rows[i][3] < rows[i - 1][3]);
    CHECK(std::abs(rows[i][1] - rows[i][2] - rows[i][3]) < 1e-12 * rows[i][1]);
  }
  const auto j = call({"figure2", "--mu", "1,2", "--format", "json"});
  CHECK(json::parse(j.out).size() == 2);
}

TEST_CASE("report documents") {
  const auto r = call({"report", "--state", "inverted", "--t", "0.5"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  for (const char* key : {"state", "dim", "quantum_potential", "covariance", "rsur", "theorem2_bound", "linear_bound",
                          "mvqp_closed_form", "per_df_mvqp", "theorem4", "mvqp_uncertainty_saturated"}) {
    CHECK_MESSAGE(doc.contains(key), key);
  }
  CHECK(doc["mvqp_uncertainty_saturated"] == true);
  CHECK(doc["theorem2_status"] == "saturated");
  const auto g2 = json::parse(call({"report", "--state", "gaussian", "--dim", "2", "--vdiag", "1,4"}).out);
  CHECK(g2["theorem2_status"] == "exact");
  const double q = doc["quantum_potential"]["mvqp"];
  CHECK(std::abs(q - doc["mvqp_closed_form"].get<double>()) < 1e-6);

  const auto th = json::parse(call({"report", "--state", "thermal", "--beta-hnu", "1"}).out);
  CHECK(std::abs(th["mixed_mvqp_density_grid"].get<double>() - 0.5409883534346632) < 1e-5);
  const auto kv = call({"report", "--state", "ho", "--format", "csv"});
  CHECK(kv.out.rfind("key,value\n", 0) == 0);
}

TEST_CASE("state and mixture files") {
  const Grid grid = ho_recommended_grid(1, std::sqrt(0.5), 512);
  const std::string csv = temp_path("state.csv");
  {
    std::ofstream f(csv);
    write_state_csv(f, ho_eigenstate(1, std::sqrt(0.5), grid));
  }
  const auto v = call({"verify", "--state", csv});
  CHECK(v.code == 0);
  const auto rep = json::parse(call({"report", "--state", csv}).out);
  CHECK(std::abs(rep["quantum_potential"]["mvqp"].get<double>() - 0.75) < 1e-7);

  const std::string mix = temp_path("mix.json");
  {
    std::ofstream f(mix);
    f << R"({"grid": {"lower": -10, "upper": 10, "points": 513},
            "components": [{"weight": 0.5, "type": "gaussian", "variance": 0.5, "momentum": 1},
                           {"weight": 0.5, "type": "gaussian", "variance": 0.5, "momentum": -1}]})";
  }
  const auto mv = call({"verify", "--state", mix});
  CHECK(mv.code == 0);
  const auto mdoc = json::parse(call({"report", "--state", mix}).out);
  CHECK(std::abs(mdoc["delta_vnc"][0][0].get<double>() - 1.0) < 1e-8);

  CHECK(call({"verify", "--state", temp_path("missing.csv")}).code == 2);
  const std::string bad = temp_path("bad.json");
  {
    std::ofstream f(bad);
    f << "{\"grid\": 3}";
  }
  CHECK(call({"verify", "--state", bad}).code == 2);
  std::remove(csv.c_str());
  std::remove(mix.c_str());
  std::remove(bad.c_str());
}

TEST_CASE("output files and sweeps") {
  const std::string path = temp_path("sweep.csv");
  CHECK(call({"sweep", "--state", "ho", "--n", "0:3", "--out", path}).code == 0);
  std::ifstream f(path);
  std::stringstream text;
  text << f.rdbuf();
  std::string header;
  const auto rows = csv_rows(text.str(), &header);
  CHECK(header == "n,mvqp,closed_form,linear_bound,theorem2_bound");
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) CHECK(std::abs(r[1] - r[2]) < 1e-7 * r[2]);
  std::remove(path.c_str());

  const auto th = csv_rows(call({"sweep", "--state", "thermal", "--beta-hnu", "1,2"}).out);
  REQUIRE(th.size() == 2);
  for (const auto& r : th) CHECK(std::abs(r[1] - r[2]) < 1e-5 * r[2]);
  CHECK(call({"sweep", "--state", "gaussian"}).code == 2);
}

TEST_CASE("installed executable") {
  const char* exe = std::getenv("QPOT_CLI");
  if (!exe) return;
  const std::string cmd = std::string(exe) + " verify --state ho --n 2 > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  const std::string bad = std::string(exe) + " verify --state nowhere 2> /dev/null";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
