#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "sphsieve/errors.hpp"
#include "sphsieve/io.hpp"

using namespace sphsieve;

TEST_CASE("expansion JSON round trip is exact") {
  std::mt19937_64 rng(1);
  for (int L : {0, 3, 12}) {
    const auto e = HarmonicExpansion::random(L, rng);
    const auto back = expansion_from_json(Json::parse(to_json(e).dump()));
    CHECK(back.degree_max() == L);
    CHECK(back.coeffs() == e.coeffs());
  }
}

TEST_CASE("malformed expansion JSON") {
  CHECK_THROWS_AS(expansion_from_json(Json::parse(R"({"L": 1, "coeffs": [[1, 0]]})")), InputError);
  CHECK_THROWS_AS(expansion_from_json(Json::parse(R"({"coeffs": []})")), InputError);
  CHECK_THROWS_AS(expansion_from_json(Json::parse(R"({"L": 0, "coeffs": [[1, 0, 2]]})")), InputError);
  CHECK_THROWS_AS(expansion_from_json(Json::parse(R"({"L": 0, "coeffs": [["a", 0]]})")), InputError);
}

TEST_CASE("inline domain tokens") {
  const auto d = parse_domain_inline("0.5@0,0,2; -0.25@1,0,0");
  REQUIRE(d.caps().size() == 2);
  CHECK(d.caps()[0].height == 0.5);
  CHECK(d.caps()[0].apex.z() == doctest::Approx(1.0));
  CHECK(d.caps()[1].apex.x() == doctest::Approx(1.0));
  CHECK(parse_domain_inline("0.9@0,0,1 0.9@0,0,-1").caps().size() == 2);
  CHECK(parse_domain_inline("").empty());
  CHECK(parse_domain_inline("none").empty());
  CHECK(parse_domain_inline("  ").empty());

  for (const char* bad : {"0.5", "0.5@0,0", "x@0,0,1", "0.5@0,0,0", "1.5@0,0,1", "0.5@0,0,1,", "0.5@0,0,1e999",
                          "0.5@0,0,1x"})
    CHECK_THROWS_AS(parse_domain_inline(bad), InputError);
}

TEST_CASE("domain JSON and files") {
  const auto d = domain_from_json(Json::parse(R"([{"apex": [0, 0, 1], "height": 0.8}, {"apex": [0, 3, 0], "height": 0.1}])"));
  REQUIRE(d.caps().size() == 2);
  CHECK(d.caps()[1].apex.y() == doctest::Approx(1.0));
  CHECK(domain_from_json(Json::array()).empty());
  CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"apex": [0, 0, 1]})")), InputError);
  CHECK_THROWS_AS(domain_from_json(Json::parse(R"([{"apex": [0, 0, 1]}])")), InputError);
  CHECK_THROWS_AS(domain_from_json(Json::parse(R"([{"apex": [0, 0], "height": 0.2}])")), InputError);

  const auto path = std::filesystem::temp_directory_path() / "sphsieve_test_domain.json";
  {
    std::ofstream out(path);
    out << R"([{"apex": [1, 1, 0], "height": 0.3}])";
  }
  const auto loaded = load_domain(path.string());
  REQUIRE(loaded.caps().size() == 1);
  CHECK(loaded.caps()[0].apex.x() == doctest::Approx(std::sqrt(0.5)));
  {
    std::ofstream out(path);
    out << "[{";
  }
  CHECK_THROWS_AS(load_domain(path.string()), InputError);
  std::filesystem::remove(path);
  CHECK(load_domain("0.3@1,0,0").caps().size() == 1);
}

TEST_CASE("domain JSON round trip through to_json") {
  const CapUnionDomain d({SphericalCap(UnitVector(0, 0, 1), 0.7), SphericalCap(UnitVector(0, 1, 0), 0.2)});
  const auto back = domain_from_json(to_json(d)["caps"]);
  REQUIRE(back.caps().size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back.caps()[i].height == d.caps()[i].height);
    CHECK(back.caps()[i].apex.vec() == d.caps()[i].apex.vec());
  }
}

TEST_CASE("points CSV") {
  std::mt19937_64 rng(2);
  std::vector<UnitVector> pts;
  for (int i = 0; i < 20; ++i) pts.push_back(random_unit_vector(rng));
  std::stringstream buf;
  write_points_csv(buf, pts);
  const auto back = read_points_csv(buf);
  REQUIRE(back.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK((back[i].vec() - pts[i].vec()).norm() <= 1e-15);

  std::istringstream commented("# header\n\n0,0,1\n 1 , 0 , 0 \n");
  CHECK(read_points_csv(commented).size() == 2);
  std::istringstream bad("0,0\n");
  CHECK_THROWS_AS(read_points_csv(bad), InputError);
  std::istringstream zero("0,0,0\n");
  CHECK_THROWS_AS(read_points_csv(zero), InputError);
}

TEST_CASE("report serialization carries the key fields") {
  const SeparatedPointSet pair({UnitVector(0, 0, 1), UnitVector(0, 0, -1)}, M_PI);
  const auto j = to_json(sieve_check(pair, HarmonicExpansion::unit(1, 0, 0)));
  CHECK(j["theta"].get<double>() == M_PI);
  CHECK(j["lhs"].get<double>() == doctest::Approx(2 / (4 * M_PI)));
  CHECK(j["holds"].get<bool>());

  std::mt19937_64 rng(3);
  const auto run = recover(HarmonicExpansion::random(2, rng), CapUnionDomain(), 1);
  const auto r = to_json(run);
  CHECK(r["errors"].size() == 2);
  CHECK(r["grid"]["n_theta"].get<int>() == 56);
  CHECK(expansion_from_json(r["truth"]).coeffs() == run.truth.coeffs());
}
