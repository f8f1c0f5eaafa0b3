#include <doctest.h>

#include <limits>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dpp/error.hpp"
#include "dpp/io.hpp"

using namespace dpp;

TEST_CASE("format_double round trips") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> e(-30.0, 30.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::pow(10.0, e(rng)) * (i % 2 ? -1.0 : 1.0);
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(std::isnan(parse_double("nan")));
  CHECK_THROWS_AS(parse_double("1.5x"), Error);
  CHECK_THROWS_AS(parse_double(""), Error);
}

TEST_CASE("CSV reading") {
  std::istringstream is("a,b\n1,2\n3,4\n");
  const CsvTable t = read_csv(is);
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  CHECK(t.rows.size() == 2);
  CHECK(t.column("b") == 1);
  CHECK_THROWS_AS(t.column("c"), Error);
  std::istringstream ragged("a,b\n1\n");
  CHECK_THROWS_AS(read_csv(ragged), Error);
}

TEST_CASE("plant JSON") {
  const SoptdModel g = benchmark(5);
  const auto j = nlohmann::json::parse(plant_to_json(g));
  CHECK(j.size() == 4);
  CHECK(j.at("K").get<double>() == g.K);
  CHECK(j.at("zeta_ol").get<double>() == g.zeta);
  const SoptdModel back = plant_from_json(plant_to_json(g));
  CHECK(back.L == g.L);
  CHECK(back.T == g.T);
  CHECK_THROWS_AS(plant_from_json(R"({"K":1,"L":1,"T":1})"), Error);
  CHECK_THROWS_AS(plant_from_json(R"({"K":1,"L":1,"T":1,"zeta_ol":1,"extra":2})"), Error);
  CHECK_THROWS_AS(plant_from_json(R"({"K":1,"L":-1,"T":1,"zeta_ol":1})"), Error);
  CHECK_THROWS_AS(plant_from_json("not json"), Error);
}

TEST_CASE("report JSON writes absent values as null") {
  PerformanceReport r;
  r.j2_d = 1.25;
  r.gm = std::numeric_limits<double>::infinity();
  r.sim.horizon = 100.0;
  const auto j = nlohmann::json::parse(report_to_json(r));
  CHECK(j.at("gm").is_null());
  CHECK(j.at("phim_deg").is_null());
  CHECK(j.at("j2_d").get<double>() == 1.25);
  CHECK(j.contains("u_impulse_weight"));
  const PerformanceReport back = report_from_json(report_to_json(r));
  CHECK(back.j2_d == 1.25);
  CHECK(std::isinf(back.gm));
  CHECK_FALSE(back.phim_deg.has_value());
  CHECK(back.sim.horizon == 100.0);
}

TEST_CASE("centroid JSON") {
  RobustGains g;
  g.gains = {0.3531, 0.3623, 1.0217};
  g.source = KpSource::S2;
  g.n_stable = 1234;
  g.median_distance = 0.125;
  const RobustGains back = centroid_from_json(centroid_to_json(g));
  CHECK(back.gains == g.gains);
  CHECK(back.source == KpSource::S2);
  CHECK(back.n_stable == 1234);
  CHECK(back.median_distance == 0.125);
}

TEST_CASE("parse_gains") {
  const PidGains g = parse_gains("0.5,-1,2e-1");
  CHECK(g.kp == 0.5);
  CHECK(g.ki == -1.0);
  CHECK(g.kd == 0.2);
  CHECK_THROWS_AS(parse_gains("1,2"), Error);
  CHECK_THROWS_AS(parse_gains("1,2,x"), Error);
}
