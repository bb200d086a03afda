#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "smlab/cli.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::StartsWith;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = smlab::cli::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> v;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) v.push_back(cur);
  return v;
}

// data rows of a CSV report (comment lines dropped)
std::vector<std::vector<std::string>> csv_rows(const std::string& text, std::vector<std::string>* header = nullptr) {
  std::vector<std::vector<std::string>> rows;
  bool first = true;
  for (const auto& line : split(text, '\n')) {
    if (line.empty() || line[0] == '#') continue;
    if (first) {
      if (header) *header = split(line, ',');
      first = false;
      continue;
    }
    rows.push_back(split(line, ','));
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("smlab_test_" + name);
}

}  // namespace

TEST_CASE("spectrum at gamma = 0 reproduces the Bessel eigenvalues", "[cli]") {
  const auto r = run({"spectrum", "--gamma", "0", "--n", "0", "--k", "3"});
  REQUIRE(r.code == 0);
  CHECK_THAT(r.out, StartsWith("# artifact="));
  std::vector<std::string> header;
  const auto rows = csv_rows(r.out, &header);
  CHECK(header == std::vector<std::string>{"route", "gamma", "n", "k", "eigenvalue", "mesh_nodes"});
  REQUIRE(rows.size() == 3);
  for (std::size_t k = 1; k <= 3; ++k) {
    CHECK_THAT(std::stod(rows[k - 1][4]), WithinRel(oracle::bessel_eigenvalue(0, k), 1e-6));
  }
  CHECK_THAT(std::stod(rows[1][4]), WithinAbs(30.4713, 1e-4));
}

TEST_CASE("validation errors exit with 2 and name the constraint", "[cli]") {
  const auto r = run({"spectrum", "--gamma", "0.6"});
  CHECK(r.code == 2);
  CHECK_THAT(r.err, ContainsSubstring("N*gamma < 1"));
  CHECK(run({"spectrum", "--route", "fast"}).code == 2);
  CHECK(run({"spectrum", "--bogus", "1"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"spectrum", "--format", "xml"}).code == 2);
  CHECK(run({"hardy", "--refine", "12..7"}).code == 2);
  CHECK(run({"bounds", "--c", "0.5"}).code == 2);
  CHECK(run({"spectrum", "--dim", "3", "--gamma", "0.1"}).code == 2);
}

TEST_CASE("help exits with 0", "[cli]") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("spectrum"));
}

TEST_CASE("two-route spectrum", "[cli]") {
  const auto r = run({"spectrum", "--gamma", "0.25", "--route", "both"});
  REQUIRE(r.code == 0);
  std::vector<std::string> header;
  const auto rows = csv_rows(r.out, &header);
  REQUIRE(header.back() == "rel_diff");
  REQUIRE(rows.size() == 6);
  for (const auto& row : rows) CHECK(std::stod(row.back()) < 1e-6);
  CHECK_THAT(r.out, ContainsSubstring("# max_rel_diff="));
}

TEST_CASE("rate command", "[cli]") {
  for (double g : {0.0, 0.25}) {
    const auto r = run({"rate", "--gamma", std::to_string(g), "--k", "1", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const auto& f = j["fits"][0];
    CHECK(f["pass"].get<bool>());
    CHECK_THAT(f["exponent"].get<double>(), WithinAbs(1.0 / (1.0 - g), 0.05));
    CHECK_THAT(f["target"].get<double>(), WithinRel(1.0 / (1.0 - g), 1e-11));
    for (const char* key : {"gamma", "n", "k", "stderr", "r2", "points_used"}) CHECK(f.contains(key));
  }
  std::vector<std::string> header;
  const auto rows = csv_rows(run({"rate", "--gamma", "0.1", "--k", "2"}).out, &header);
  CHECK(header == std::vector<std::string>{"gamma", "n", "k", "eps", "lambda_full", "lambda_eps", "gap",
                                           "variational_bound", "closed_form_bound"});
  CHECK(rows.size() == 24);
}

TEST_CASE("gaps under the noise floor exit with 4", "[cli]") {
  const auto r = run({"rate", "--gamma", "0.25", "--tol", "1"});
  CHECK(r.code == 4);
  CHECK_THAT(r.err, ContainsSubstring("noise floor"));
}

TEST_CASE("unresolved truncation exits with 3", "[cli]") {
  const auto r = run({"rate", "--gamma", "0.25", "--eps-min", "1e-14", "--eps-max", "1e-12"});
  CHECK(r.code == 3);
  CHECK_THAT(r.err, ContainsSubstring("mesh elements"));
}

TEST_CASE("hardy, minkowski, potential and bounds commands", "[cli]") {
  const auto h = run({"hardy", "--gamma", "0.25", "--refine", "7..12", "--format", "json"});
  REQUIRE(h.code == 0);
  const auto hj = nlohmann::json::parse(h.out);
  CHECK_THAT(hj["extrapolated"].get<double>(), WithinRel(1.5, 0.01));
  CHECK(hj["rows"].size() == 6);
  CHECK(hj["rows"][0]["mesh_nodes"].get<int>() == 128);

  const auto m = run({"minkowski", "--gamma", "0.4", "--format", "json"});
  REQUIRE(m.code == 0);
  CHECK_THAT(nlohmann::json::parse(m.out)["exponent"].get<double>(), WithinAbs(1.0 / 3.0, 1e-2));

  const auto p = run({"potential", "--gamma", "0.25", "--n", "1"});
  REQUIRE(p.code == 0);
  std::vector<std::string> header;
  const auto rows = csv_rows(p.out, &header);
  CHECK(header == std::vector<std::string>{"t", "V_closed", "V_derivative_form", "abs_diff"});
  for (const auto& row : rows) CHECK(std::abs(std::stod(row[1]) - std::stod(row[2])) < 1e-9);

  const auto b = run({"bounds", "--c", "2"});
  REQUIRE(b.code == 0);
  const auto brows = csv_rows(b.out);
  CHECK_THAT(std::stod(brows[0][2]), WithinRel(56.0, 1e-12));
  CHECK_THAT(std::stod(brows[0][3]), WithinRel(128.0, 1e-12));
}

TEST_CASE("geodesic and decay commands", "[cli]") {
  const auto g = run({"geodesic", "--gamma", "0.25", "--grid", "128"});
  REQUIRE(g.code == 0);
  std::vector<std::string> header;
  const auto rows = csv_rows(g.out, &header);
  CHECK(header == std::vector<std::string>{"x", "y", "sigma", "d_exact", "d_graph"});
  CHECK(rows.size() > 10000);

  const auto d = run({"decay", "--gamma", "0.25", "--k", "1", "--seed", "99", "--format", "json"});
  REQUIRE(d.code == 0);
  const auto dj = nlohmann::json::parse(d.out);
  CHECK(dj["norm_chain"]["seed"].get<std::uint64_t>() == 99);
  CHECK(dj["norm_chain"]["violations"].get<int>() == 0);
  CHECK(dj["decay"][0]["all_ok"].get<bool>());
}

TEST_CASE("config file with flag precedence", "[cli]") {
  const auto path = temp_file("config.json");
  {
    std::ofstream f(path);
    f << R"({"gamma": 0.25, "n": 1, "k": 2, "format": "json"})";
  }
  const auto r = run({"spectrum", "--config", path.string(), "--gamma", "0.1"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["provenance"]["gamma"] == "0.1");
  CHECK(j["provenance"]["mode"] == "1");
  CHECK(j["rows"].size() == 2);

  {
    std::ofstream f(path);
    f << R"({"gamma": 0.25, "colour": "blue"})";
  }
  const auto bad = run({"spectrum", "--config", path.string()});
  CHECK(bad.code == 2);
  CHECK_THAT(bad.err, ContainsSubstring("colour"));
  CHECK(run({"spectrum", "--config", (path.string() + ".missing")}).code == 5);
  std::filesystem::remove(path);
}

TEST_CASE("output files and I/O failure", "[cli]") {
  const auto path = temp_file("out.csv");
  const auto r = run({"bounds", "--c", "1.5", "--out", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == run({"bounds", "--c", "1.5"}).out);
  std::filesystem::remove(path);
  CHECK(run({"bounds", "--out", "/nonexistent-dir/x.csv"}).code == 5);
}

TEST_CASE("identical runs are byte-identical", "[cli][property]") {
  const std::vector<std::vector<std::string>> cmds{
      {"spectrum", "--gamma", "0.25", "--n", "1", "--route", "both"},
      {"rate", "--gamma", "0.4", "--k", "2", "--format", "json"},
      {"hardy", "--gamma", "0.2", "--dim", "3"},
      {"minkowski", "--gamma", "0.25"},
      {"potential", "--gamma", "0.1", "--n", "2", "--format", "json"},
      {"decay", "--gamma", "0.25", "--k", "1"},
      {"geodesic", "--gamma", "0.1", "--grid", "96"}};
  for (const auto& c : cmds) {
    const auto a = run(c);
    const auto b = run(c);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
  }
}

#ifdef SMLAB_CLI_PATH
TEST_CASE("installed binary reports exit codes", "[cli]") {
  const std::string exe = SMLAB_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int s = std::system((exe + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(s);
  };
  CHECK(status("bounds --c 2") == 0);
  CHECK(status("spectrum --gamma 0.6") == 2);
  CHECK(status("rate --gamma 0.25 --tol 1") == 4);
  CHECK(status("bounds --out /nonexistent-dir/x.csv") == 5);
}
#endif
