#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

using json = nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

const char* cli_path() {
  const char* p = std::getenv("DSDIRAC_CLI");
  REQUIRE(p != nullptr);
  return p;
}

// prefix is prepended verbatim, so callers can set or unset env vars
RunResult run(const std::string& args, const std::string& prefix = "") {
  static int counter = 0;
  const std::string base = "/tmp/dsdirac_cli_" + std::to_string(::getpid()) +
                           "_" + std::to_string(counter++);
  std::string cmd = prefix.empty() ? "" : prefix + " ";
  cmd += std::string("\"") + cli_path() + "\" " + args;
  cmd += " >" + base + ".out 2>" + base + ".err";
  const int status = std::system(cmd.c_str());
  RunResult r;
  if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
  r.out = slurp(base + ".out");
  r.err = slurp(base + ".err");
  std::remove((base + ".out").c_str());
  std::remove((base + ".err").c_str());
  return r;
}

}  // namespace

TEST_CASE("spectrum subcommand emits a passing report", "[cli]") {
  const RunResult r = run("--tol 50 spectrum --m 1 --nmax 2 --grid 1200");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["command"] == "spectrum");
  REQUIRE(j["rows"].size() == 3);
  REQUIRE(j["rows"][0]["gap"].is_null());
  REQUIRE(j["rows"][1]["gap"].is_number());
  REQUIRE(j["rows"][2]["oracle_error"].get<double>() < 1e-2);
  for (const auto& c : j["checks"]) REQUIRE(c["pass"] == true);
  REQUIRE(j["summary"]["checks_failed"] == 0);
  // wall time goes to stderr, never into the payload
  REQUIRE(r.out.find("wall_time_seconds") == std::string::npos);
  REQUIRE(r.err.find("wall_time_seconds") != std::string::npos);
}

TEST_CASE("single level run leaves the gap column empty", "[cli]") {
  const RunResult r = run("--tol 50 spectrum --nmax 0 --grid 1200");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["rows"].size() == 1);
  REQUIRE(j["rows"][0]["gap"].is_null());
  REQUIRE(j["rows"][0]["gap_error"].is_null());
}

TEST_CASE("global flags work on either side of the subcommand", "[cli]") {
  const RunResult before = run("--tol 50 spectrum --nmax 1 --grid 1200");
  const RunResult after = run("spectrum --nmax 1 --grid 1200 --tol 50");
  REQUIRE(before.code == 0);
  REQUIRE(after.code == 0);
  REQUIRE(before.out == after.out);
  REQUIRE(run("romanovski-table --numax 2 --format csv").code == 0);
}

TEST_CASE("usage and config errors exit with code 2", "[cli]") {
  REQUIRE(run("spectrum --grid 8").code == 2);
  REQUIRE(run("spectrum --nmax -3").code == 2);
  REQUIRE(run("spectrum --m not_a_number").code == 2);
  REQUIRE(run("bogus-subcommand").code == 2);
  REQUIRE(run("--format xml spectrum").code == 2);
  REQUIRE(run("verify --suite nope").code == 2);
  REQUIRE(run("time-part --map weird").code == 2);
  REQUIRE(run("time-part --map trig --tau 4.0").code == 2);
  REQUIRE(run("time-part --eps=3").code == 2);
  REQUIRE(run("--tol 0 spectrum").code == 2);
  REQUIRE(run("--jobs 0 spectrum").code == 2);
  REQUIRE(run("partner-metric --theta 0").code == 2);
  REQUIRE(run("").code == 2);  // a subcommand is required
}

TEST_CASE("check failures exit with code 1 and still emit the report",
          "[cli]") {
  const RunResult r = run("--tol 1e-9 spectrum --nmax 1 --grid 600");
  REQUIRE(r.code == 1);
  const json j = json::parse(r.out);
  bool any_fail = false;
  for (const auto& c : j["checks"])
    if (c["pass"] == false) any_fail = true;
  REQUIRE(any_fail);
  REQUIRE(j["summary"]["checks_failed"].get<int>() >= 1);
}

TEST_CASE("polynomial degeneracy is reported as a failure", "[cli]") {
  const RunResult r = run("romanovski-table --numax 5 --a -2 --b -4");
  REQUIRE(r.code == 1);
  REQUIRE(r.err.find("degeneracy") != std::string::npos);
}

TEST_CASE("romanovski table rows", "[cli]") {
  const RunResult ok = run("--tol 5 romanovski-table --numax 3 --a -2 --b -4");
  REQUIRE(ok.code == 0);
  const json j = json::parse(ok.out);
  int polys = 0, pairs = 0;
  for (const auto& row : j["rows"]) {
    if (row.contains("coefficients")) ++polys;
    if (row.contains("pair")) {
      ++pairs;
      REQUIRE(row["orthogonality"].is_number());
    }
  }
  REQUIRE(polys == 4);
  REQUIRE(pairs == 6);

  // outside the convergence strip the pair is flagged, not integrated
  const RunResult div = run("--tol 5 romanovski-table --numax 1 --a 0 --b 0.75");
  REQUIRE(div.code == 0);
  const json jd = json::parse(div.out);
  bool flagged = false;
  for (const auto& row : jd["rows"])
    if (row.contains("pair") && row["orthogonality"] == "divergent")
      flagged = true;
  REQUIRE(flagged);
}

TEST_CASE("time-part runs on both maps and both component signs", "[cli]") {
  const RunResult trig = run("--tol 10 time-part --numax 2 --tau 1.0");
  REQUIRE(trig.code == 0);
  const json jt = json::parse(trig.out);
  for (const auto& row : jt["rows"])
    REQUIRE(row["map_covers_real_line"] == true);

  const RunResult hyper =
      run("--tol 10 time-part --numax 1 --map hyper --tau 1.3");
  REQUIRE(hyper.code == 0);
  const json jh = json::parse(hyper.out);
  for (const auto& row : jh["rows"])
    REQUIRE(row["map_covers_real_line"] == false);

  REQUIRE(run("--tol 10 time-part --eps=-1 --numax 1 --tau 0.8").code == 0);
}

TEST_CASE("partner-metric reports the signature and the ell power", "[cli]") {
  const RunResult r = run("partner-metric --ell 1.3 --tau 1.2 --theta 0.7 "
                          "--phi 2.1");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["rows"][0]["signature"] == "-+++");
  REQUIRE(std::abs(j["rows"][0]["eta1_ratio_ell_power"].get<double>() - 0.5) <
          1e-9);
  REQUIRE(j["rows"][0]["g00"].get<double>() < 0.0);
}

TEST_CASE("verify emits suite-tagged rows and checks", "[cli]") {
  const RunResult r = run("verify --suite geometry");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["parameters"]["suite"] == "geometry");
  for (const auto& row : j["rows"]) REQUIRE(row["suite"] == "geometry");
  for (const auto& c : j["checks"]) {
    const std::string name = c["name"].get<std::string>();
    REQUIRE(name.rfind("geometry.", 0) == 0);
  }
}

TEST_CASE("verify output is byte-identical across reruns", "[cli]") {
  const RunResult a = run("verify --suite romanovski");
  const RunResult b = run("verify --suite romanovski");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  REQUIRE(!a.out.empty());
  REQUIRE(a.out == b.out);
}

TEST_CASE("seed env var is honored and echoed", "[cli]") {
  const RunResult def =
      run("verify --suite geometry", "env -u DESITTER_DIRAC_SEED");
  const RunResult seeded =
      run("verify --suite geometry", "env DESITTER_DIRAC_SEED=123");
  const RunResult seeded2 =
      run("verify --suite geometry", "env DESITTER_DIRAC_SEED=123");
  REQUIRE(def.code == 0);
  REQUIRE(seeded.code == 0);
  REQUIRE(json::parse(seeded.out)["parameters"]["seed"] == 123);
  REQUIRE(seeded.out == seeded2.out);
  REQUIRE(def.out != seeded.out);
}

TEST_CASE("worker pool does not change the bytes", "[cli][slow]") {
  const RunResult serial = run("--jobs 1 verify --suite all");
  const RunResult pooled = run("--jobs 4 verify --suite all");
  REQUIRE(serial.code == 0);
  REQUIRE(pooled.code == 0);
  REQUIRE(serial.out == pooled.out);
  const json j = json::parse(serial.out);
  // all four suites contribute tagged checks
  for (const char* suite : {"geometry.", "susy.", "romanovski.", "pseudo."}) {
    bool found = false;
    for (const auto& c : j["checks"])
      if (c["name"].get<std::string>().rfind(suite, 0) == 0) found = true;
    REQUIRE(found);
  }
}

TEST_CASE("out flag writes the report to a file", "[cli]") {
  const std::string path =
      "/tmp/dsdirac_out_" + std::to_string(::getpid()) + ".json";
  const RunResult r =
      run("--tol 50 --out " + path + " spectrum --nmax 0 --grid 1200");
  REQUIRE(r.code == 0);
  REQUIRE(r.out.empty());
  const std::string text = slurp(path);
  REQUIRE(!text.empty());
  REQUIRE(json::parse(text)["command"] == "spectrum");
  std::remove(path.c_str());
}

TEST_CASE("csv format renders both tables", "[cli]") {
  const RunResult r =
      run("--tol 50 --format csv spectrum --m 1 --nmax 1 --grid 1200");
  REQUIRE(r.code == 0);
  REQUIRE(r.out.rfind("n,omega2_shifted,omega2_full,oracle,oracle_error,"
                      "gap,gap_error\n", 0) == 0);
  REQUIRE(r.out.find("check,pass,value,tolerance,detail\n") !=
          std::string::npos);
  REQUIRE(r.out.find('{') == std::string::npos);
}

TEST_CASE("config file sets defaults and flags win", "[cli]") {
  const std::string path =
      "/tmp/dsdirac_cfg_" + std::to_string(::getpid()) + ".ini";
  {
    std::ofstream f(path);
    f << "format=csv\n";
    f << "tol=50\n";
  }
  const RunResult csv =
      run("--config " + path + " spectrum --nmax 0 --grid 1200");
  REQUIRE(csv.code == 0);
  REQUIRE(csv.out.rfind("n,", 0) == 0);

  const RunResult overridden = run("--config " + path +
                                   " --format json spectrum --nmax 0 "
                                   "--grid 1200");
  REQUIRE(overridden.code == 0);
  REQUIRE(json::parse(overridden.out)["command"] == "spectrum");

  {
    std::ofstream f(path);
    f << "no_such_option=1\n";
  }
  REQUIRE(run("--config " + path + " spectrum").code == 2);
  std::remove(path.c_str());
}
