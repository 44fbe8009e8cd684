#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

// Drives the installed tg binary end to end. The test runner supplies its
// path through the TG_CLI environment variable.

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

const std::string& cli_path() {
  static const std::string path = [] {
    const char* p = std::getenv("TG_CLI");
    if (p == nullptr || *p == '\0') {
      throw std::runtime_error("TG_CLI is not set; run through ctest");
    }
    return std::string(p);
  }();
  return path;
}

const std::string& work_dir() {
  static const std::string dir = [] {
    std::string tmpl = (fs::temp_directory_path() / "tg_cli_XXXXXX").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (mkdtemp(buf.data()) == nullptr) {
      throw std::runtime_error("mkdtemp failed");
    }
    return std::string(buf.data());
  }();
  return dir;
}

std::string out_base(const std::string& name) { return work_dir() + "/" + name; }

int run_cli(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " >/dev/null 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE_MESSAGE(f.good(), path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path) { return Json::parse(slurp(path)); }

std::vector<std::string> split_lines(const std::string& body) {
  std::vector<std::string> lines;
  std::istringstream ss(body);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_cells(const std::string& row) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(row);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!row.empty() && row.back() == ',') cells.push_back("");
  return cells;
}

bool has_header_line(const std::vector<std::string>& lines,
                     const std::string& wanted) {
  for (const auto& l : lines) {
    if (l == wanted) return true;
  }
  return false;
}

// Index of the column-name row: the first line outside the # header.
size_t table_start(const std::vector<std::string>& lines) {
  size_t i = 0;
  while (i < lines.size() && !lines[i].empty() && lines[i][0] == '#') ++i;
  REQUIRE(i < lines.size());
  return i;
}

}  // namespace

TEST_CASE("configuration mistakes exit with code 2") {
  CHECK(run_cli("simulate --v 0 --out " + out_base("e1")) == 2);
  CHECK(run_cli("simulate") == 2);  // --out is required
  CHECK(run_cli("frobnicate --out " + out_base("e2")) == 2);
  CHECK(run_cli("covariance --V 1.2 --out " + out_base("e3")) == 2);
  CHECK(run_cli("simulate --start 5 --out " + out_base("e4")) == 2);
  CHECK(run_cli("quantum --method weird --out " + out_base("e5")) == 2);
  CHECK(run_cli("solve --times 0.5 0.25 --out " + out_base("e6")) == 2);
  CHECK(run_cli("limit --format xml --out " + out_base("e7")) == 2);
  CHECK(run_cli("simulate --lambda -1 --out " + out_base("e8")) == 2);
}

TEST_CASE("undersized grids exit with code 3") {
  // Histogram window misses the reachable cone entirely.
  CHECK(run_cli("simulate --x-min -0.5 --x-max 0.5 --out " + out_base("g1")) ==
        3);
  // Gaussian tails reach the boundary; the forward march refuses to leak.
  CHECK(run_cli("solve --init gauss --sigma 0.3 --x-min -1 --x-max 1 "
                "--times 2.0 --out " +
                out_base("g2")) == 3);
}

TEST_CASE("simulate writes csv and json artifacts with a config echo") {
  const std::string base = out_base("sim");
  REQUIRE(run_cli("simulate --n-paths 2000 --nx 64 --seed 5 --out " + base) ==
          0);
  REQUIRE(fs::exists(base + ".csv"));
  REQUIRE(fs::exists(base + ".json"));

  const auto lines = split_lines(slurp(base + ".csv"));
  REQUIRE(!lines.empty());
  CHECK(lines.front().rfind("# artifact_version=", 0) == 0);
  CHECK(has_header_line(lines, "# subcommand=simulate"));
  CHECK(has_header_line(lines, "# seed=5"));
  CHECK(has_header_line(lines, "# n_paths=2000"));

  const size_t start = table_start(lines);
  CHECK(lines[start] == "x,f_plus,f_minus");
  CHECK(lines.size() - start - 1 == 64);  // one row per histogram cell

  const Json doc = read_json(base + ".json");
  CHECK(doc.at("artifact_version").is_string());
  CHECK(doc.at("config").at("seed").get<int>() == 5);
  CHECK(doc.at("total_mass").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(doc.at("atoms").at("plus").at("position").get<double>() == 1.0);
  CHECK(doc.at("atoms").at("minus").at("position").get<double>() == -1.0);
  CHECK(doc.at("moments").at("mean_std_error").get<double>() > 0.0);
}

TEST_CASE("identical configs give byte-identical artifacts") {
  const std::string args =
      "simulate --n-paths 20000 --nx 128 --seed 7 --out ";
  const std::string a = out_base("rep_a");
  const std::string b = out_base("rep_b");
  const std::string c = out_base("rep_c");
  REQUIRE(run_cli(args + a + " --workers 1") == 0);
  REQUIRE(run_cli(args + b + " --workers 4") == 0);
  REQUIRE(run_cli(args + c + " --workers 1") == 0);
  CHECK(slurp(a + ".csv") == slurp(b + ".csv"));
  CHECK(slurp(a + ".csv") == slurp(c + ".csv"));
  CHECK(slurp(a + ".json") == slurp(b + ".json"));
  CHECK(slurp(a + ".json") == slurp(c + ".json"));

  const std::string qargs =
      "quantum --method mc --n-paths 10000 --seed 3 --t 0.5 --nx 256 --out ";
  const std::string qa = out_base("qrep_a");
  const std::string qb = out_base("qrep_b");
  REQUIRE(run_cli(qargs + qa + " --workers 1") == 0);
  REQUIRE(run_cli(qargs + qb + " --workers 4") == 0);
  CHECK(slurp(qa + ".csv") == slurp(qb + ".csv"));
  CHECK(slurp(qa + ".json") == slurp(qb + ".json"));
}

TEST_CASE("solve reports conservation and residual diagnostics") {
  const std::string base = out_base("sol");
  REQUIRE(run_cli("solve --init gauss --sigma 0.15 --x-min -3 --x-max 3 "
                  "--nx 768 --times 0.25 0.5 0.75 1.0 --out " +
                  base) == 0);

  const Json doc = read_json(base + ".json");
  CHECK(doc.at("mass_drift").get<double>() <= 1e-12);
  CHECK(doc.at("lost_mass").get<double>() <= 1e-12);
  CHECK(doc.at("times_snapped").get<bool>() == false);
  CHECK(doc.at("dt").get<double>() == doctest::Approx(1.0 / 128).epsilon(1e-15));
  REQUIRE(doc.at("masses").size() == 4);
  for (const auto& m : doc.at("masses")) {
    CHECK(m.get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  }
  REQUIRE(doc.at("telegraph_residuals").is_array());
  REQUIRE(doc.at("telegraph_residuals").size() == 2);
  CHECK(doc.at("telegraph_residuals")[0].at("t").get<double>() ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(doc.at("telegraph_residuals")[0].at("res_plus").get<double>() > 0.0);

  // A time off the step lattice is snapped and flagged.
  const std::string snapped = out_base("sol_snap");
  REQUIRE(run_cli("solve --init gauss --sigma 0.15 --x-min -3 --x-max 3 "
                  "--nx 768 --times 0.33 --out " +
                  snapped) == 0);
  const Json sdoc = read_json(snapped + ".json");
  CHECK(sdoc.at("times_snapped").get<bool>() == true);
  CHECK(sdoc.at("times")[0].get<double>() ==
        doctest::Approx(42.0 / 128).epsilon(1e-15));
}

TEST_CASE("quantum run reports a clean light cone") {
  const std::string base = out_base("q");
  REQUIRE(run_cli("quantum --method pde --t 0.75 --nx 512 --out " + base) == 0);

  const Json doc = read_json(base + ".json");
  CHECK(doc.at("lightcone").at("violation_mass").get<double>() == 0.0);
  CHECK(doc.at("total_mass").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-11));
  CHECK(doc.at("cone").at("lo").get<double>() ==
        doctest::Approx(-1.25).epsilon(1e-15));
  CHECK(doc.at("cone").at("hi").get<double>() ==
        doctest::Approx(1.25).epsilon(1e-15));
  // Observables agree with the closed forms to discretization accuracy.
  CHECK(std::abs(doc.at("observables").at("mean").get<double>()) < 1e-9);
  const double stdev = doc.at("observables").at("stdev").get<double>();
  const double stdev_cf = doc.at("closed_form").at("stdev").get<double>();
  CHECK(std::abs(stdev - stdev_cf) < 1e-2 * stdev_cf);
}

TEST_CASE("limit writes the ladder table") {
  const std::string base = out_base("lim");
  REQUIRE(run_cli("limit --lambdas 25 --dx 0.03125 --half-width 4 --out " +
                  base) == 0);
  REQUIRE(fs::exists(base + ".csv"));
  CHECK(!fs::exists(base + ".json"));  // no scalar summary for this command

  const auto lines = split_lines(slurp(base + ".csv"));
  CHECK(has_header_line(lines, "# strictly_decreasing=true"));
  const size_t start = table_start(lines);
  CHECK(lines[start] == "lambda,v,l1_distance");
  REQUIRE(lines.size() - start - 1 == 1);
  const auto cells = split_cells(lines[start + 1]);
  REQUIRE(cells.size() == 3);
  CHECK(std::stod(cells[0]) == 25.0);
  CHECK(std::stod(cells[1]) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(std::stod(cells[2]) > 0.0);

  // Same run in json form: one document holding config and table.
  const std::string jbase = out_base("lim_json");
  REQUIRE(run_cli("limit --lambdas 25 --dx 0.03125 --half-width 4 "
                  "--format json --out " +
                  jbase) == 0);
  CHECK(!fs::exists(jbase + ".csv"));
  const Json doc = read_json(jbase + ".json");
  CHECK(doc.at("config").at("subcommand").get<std::string>() == "limit");
  CHECK(doc.at("table").at("lambda")[0].get<double>() == 25.0);
  CHECK(doc.at("table").at("l1_distance")[0].get<double>() > 0.0);
}

TEST_CASE("covariance ladder shrinks under refinement") {
  const std::string base = out_base("cov");
  REQUIRE(run_cli("covariance --V 0.5 --levels 3 --dx0 0.0625 --out " + base) ==
          0);
  const auto lines = split_lines(slurp(base + ".csv"));
  const size_t start = table_start(lines);
  CHECK(lines[start] == "dx,residual_plus,residual_minus,observed_order");
  REQUIRE(lines.size() - start - 1 == 3);

  std::vector<double> combined;
  for (size_t r = 0; r < 3; ++r) {
    const auto cells = split_cells(lines[start + 1 + r]);
    REQUIRE(cells.size() == 4);
    const double rp = std::stod(cells[1]);
    const double rm = std::stod(cells[2]);
    CHECK(rp > 0.0);
    CHECK(rm > 0.0);
    combined.push_back(rp + rm);
    if (r == 0) {
      CHECK(cells[3].empty());  // no order estimate for the first level
    } else {
      CHECK(std::stod(cells[3]) > 0.0);
    }
  }
  CHECK(combined[1] < combined[0]);
  CHECK(combined[2] < combined[1]);
}
