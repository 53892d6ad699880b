#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "sphsieve/io.hpp"

using namespace sphsieve;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sphsieve");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("constants table") {
  const auto r = run_cli({"constants", "--L", "1:30"});
  REQUIRE(r.code == 0);
  const auto j = r.json();
  CHECK(j["config"]["L"] == "1:30");
  CHECK(j["B_limit"].get<double>() == doctest::Approx(3.71038068570948).epsilon(1e-12));
  const auto& rows = j["rows"];
  REQUIRE(rows.size() == 30);
  CHECK(rows[0]["t_LL"].get<double>() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rows[0]["B_L"].get<double>() == doctest::Approx(3.0).epsilon(1e-14));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i]["t_LL"].get<double>() > rows[i - 1]["t_LL"].get<double>());
    CHECK(rows[i]["gap_to_limit"].get<double>() > 0.0);
  }

  const auto csv = run_cli({"constants", "--L", "2", "--format", "csv"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.find("L,t_LL,B_L,C2,gap_to_limit\n2,") != std::string::npos);
  CHECK(csv.out.rfind("# config.subcommand,constants", 0) == 0);

  for (const char* bad : {"0:3", "5:2", "x", "1:"}) CHECK(run_cli({"constants", "--L", bad}).code == 2);
}

TEST_CASE("mehler table") {
  const auto r = run_cli({"mehler", "--L", "20:25"});
  REQUIRE(r.code == 0);
  for (const auto& row : r.json()["rows"]) CHECK(row["remainder_n3"].get<double>() <= 10.0);
}

TEST_CASE("concentrate exit codes") {
  const auto cap = run_cli({"concentrate", "--L", "5", "--caps", "0.8@0,0,1"});
  REQUIRE(cap.code == 0);
  const auto report = cap.json()["report"];
  CHECK(report["lambda"].get<double>() <= report["bound"].get<double>() + 1e-8);
  CHECK(cap.json()["config"]["caps"] == "0.8@0,0,1");

  const auto empty = run_cli({"concentrate", "--L", "5"});
  REQUIRE(empty.code == 0);
  CHECK(empty.json()["report"]["lambda"].get<double>() == 0.0);

  CHECK(run_cli({"concentrate", "--caps", "0.8@0,0"}).code == 2);
  CHECK(run_cli({"concentrate", "--caps", "2@0,0,1"}).code == 2);
  CHECK(run_cli({"concentrate", "--L", "0"}).code == 2);
  CHECK(run_cli({"concentrate", "--threads", "0"}).code == 2);

  const auto domain = temp_file("sphsieve_cli_domain.json", R"([{"apex": [0, 0, 1], "height": 0.9},
                                                              {"apex": [0, 0, -1], "height": 0.9}])");
  const auto file = run_cli({"concentrate", "--L", "4", "--caps", domain.string(), "--threads", "3"});
  CHECK(file.code == 0);
  CHECK(file.json()["report"]["domain"]["caps"].size() == 2);
  std::filesystem::remove(domain);
}

TEST_CASE("concentrate with p") {
  const auto r = run_cli({"concentrate", "--L", "3", "--caps", "0.9@1,0,0", "--p", "3"});
  REQUIRE(r.code == 0);
  const auto lp = r.json()["lp"];
  CHECK(lp["sampled_lower_bound"].get<double>() <= lp["bound"].get<double>() + 1e-8);
  CHECK(run_cli({"concentrate", "--p", "0.5"}).code == 2);
}

TEST_CASE("density of the test cap itself") {
  const auto r = run_cli({"density", "--L", "4", "--caps", "0.7745966692414834@0,0,1"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["density"]["rho"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sieve hand example") {
  const auto points = temp_file("sphsieve_cli_points.csv", "0,0,1\n0,0,-1\n");
  const auto r = run_cli({"sieve", "--theta", "3.141592653589793", "--L", "1", "--points", points.string(), "--coeffs",
                          R"({"L": 1, "coeffs": [[1, 0], [0, 0], [0, 0], [0, 0]]})"});
  REQUIRE(r.code == 0);
  const auto report = r.json()["report"];
  CHECK(report["lhs"].get<double>() == doctest::Approx(2 / (4 * M_PI)).epsilon(1e-14));
  CHECK(report["rhs"].get<double>() == doctest::Approx(3 / M_PI).epsilon(1e-12));
  CHECK(report["point_count"].get<int>() == 2);

  // Points closer than the claimed separation are rejected.
  CHECK(run_cli({"sieve", "--theta", "3.2", "--points", points.string()}).code == 2);
  const auto close = temp_file("sphsieve_cli_close.csv", "0,0,1\n0,0.1,1\n");
  CHECK(run_cli({"sieve", "--theta", "1.0", "--points", close.string()}).code == 2);
  CHECK(run_cli({"sieve", "--L", "2", "--coeffs", R"({"L": 1, "coeffs": [[1, 0], [0, 0], [0, 0], [0, 0]]})"}).code ==
        2);
  CHECK(run_cli({"sieve", "--strategy", "spiral"}).code == 2);
  std::filesystem::remove(points);
  std::filesystem::remove(close);
}

TEST_CASE("sieve generated sets and scans") {
  for (const char* strategy : {"greedy", "rejection"}) {
    const auto r = run_cli({"sieve", "--theta", "0.6", "--L", "6", "--seed", "4", "--strategy", strategy});
    REQUIRE(r.code == 0);
    CHECK(r.json()["report"]["ratio"].get<double>() <= 1.0);
    CHECK(r.json()["verified_min_angle"].get<double>() >= 0.6 - 1e-9);
  }
  const auto theta = run_cli({"sieve", "--scan", "theta", "--L", "2", "--format", "csv"});
  REQUIRE(theta.code == 0);
  CHECK(theta.out.find("theta,D,point_count") != std::string::npos);
  const auto degree = run_cli({"sieve", "--scan", "degree", "--L", "10:20"});
  REQUIRE(degree.code == 0);
  CHECK(degree.json()["rows"].size() == 11);
  CHECK(run_cli({"sieve", "--scan", "both"}).code == 2);
}

TEST_CASE("recover") {
  const auto empty = run_cli({"recover", "--L", "4", "--iters", "1"});
  REQUIRE(empty.code == 0);
  const auto errors = empty.json()["run"]["errors"];
  REQUIRE(errors.size() == 2);
  CHECK(errors[1].get<double>() <= 1e-10);

  const auto cap = run_cli({"recover", "--L", "5", "--caps", "0.95@0,1,0", "--iters", "30"});
  REQUIRE(cap.code == 0);
  const auto run = cap.json()["run"];
  CHECK(run["asymptotic_ratio"].get<double>() <= run["lambda"].get<double>() + 1e-3);

  const auto truth = run_cli({"recover", "--caps", "0.99@0,0,1", "--iters", "5", "--coeffs",
                              R"({"L": 1, "coeffs": [[0, 0], [0, 0], [1, 0], [0, 0]]})"});
  REQUIRE(truth.code == 0);
  CHECK(truth.json()["config"]["L"] == "1");

  // The whole sphere: no contraction, so the run is refused.
  CHECK(run_cli({"recover", "--caps", "-1@0,0,1", "--iters", "3"}).code == 2);
  CHECK(run_cli({"recover", "--iters", "0"}).code == 2);
}

TEST_CASE("usage errors") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"constants", "--bogus"}).code == 2);
  CHECK(run_cli({"constants", "--format", "xml"}).code == 2);
  CHECK(run_cli({"sieve", "--theta", "abc"}).code == 2);
  const auto help = run_cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("concentrate") != std::string::npos);
}

TEST_CASE("output is reproducible and can go to a file") {
  const std::vector<std::string> args{"sieve", "--theta", "0.5", "--L", "4", "--seed", "9"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  auto other = args;
  other.back() = "10";
  CHECK(run_cli(other).out != a.out);

  const auto path = std::filesystem::temp_directory_path() / "sphsieve_cli_out.json";
  auto to_file = args;
  to_file.insert(to_file.end(), {"--out", path.string()});
  REQUIRE(run_cli(to_file).code == 0);
  std::ifstream in(path);
  const std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  // The resolved config records the output path; everything else matches.
  auto lhs = Json::parse(written);
  auto rhs = a.json();
  lhs["config"].erase("out");
  rhs["config"].erase("out");
  CHECK(lhs == rhs);
  std::filesystem::remove(path);
}
