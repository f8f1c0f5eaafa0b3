#include <doctest.h>

#include <sstream>

#include "dpp/error.hpp"
#include "dpp/robustness.hpp"
#include "oracles.hpp"

using namespace dpp;

namespace {

const PidGains kG9Real{-0.2768, 0.1922, 0.7399};

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("stabilizes agrees with the pole oracle") {
  const SoptdModel g = benchmark(9);
  CHECK(stabilizes(g, kG9Real));
  CHECK_FALSE(stabilizes(g, {5.0, 5.0, 5.0}));
}

TEST_CASE("perturbation sweep") {
  const SoptdModel g = benchmark(9);
  const PerturbationStudy s = perturbation_sweep(g, kG9Real, 0.5, 60, 17, {}, false);
  REQUIRE(s.rows.size() == 60);
  std::size_t unstable = 0;
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    const auto& r = s.rows[i];
    const SoptdModel want = perturb(g, 0.5, 17, i);
    CHECK(r.model.L == want.L);
    CHECK(r.model.T == want.T);
    CHECK(r.model.zeta == want.zeta);
    CHECK(r.stable == oracle::stable_pade3(r.model.K, r.model.L, r.model.T, r.model.zeta, kG9Real.kp, kG9Real.ki,
                                           kG9Real.kd));
    CHECK_FALSE(r.report.has_value());
    unstable += !r.stable;
  }
  CHECK(s.unstable_count() == unstable);
  CHECK(unstable > 0);
}

TEST_CASE("sweep reports only for stable rows") {
  const PerturbationStudy s = perturbation_sweep(benchmark(9), kG9Real, 0.5, 8, 17);
  for (const auto& r : s.rows) CHECK(r.report.has_value() == r.stable);
  std::ostringstream os;
  write_perturbation_csv(os, s);
  CHECK(first_line(os.str()) ==
        "index,L,T,zeta_ol,stable,j2_d,jinf_d,j2_u,jinf_u,j2_n,jinf_n,j2_e,jinf_e,gm,phim_deg,omega_gc");
}

TEST_CASE("max allowable perturbation") {
  const SoptdModel g = benchmark(9);
  const double p = max_allowable_perturbation(g, kG9Real, 0.05, 200, 3);
  CHECK(p >= 0.0);
  CHECK(p < 1.0);
  // every plant at p is stabilized, and something breaks one step further
  for (const auto& r : perturbation_sweep(g, kG9Real, p, 200, 3, {}, false).rows) CHECK(r.stable);
  CHECK(perturbation_sweep(g, kG9Real, p + 0.05, 200, 3, {}, false).unstable_count() > 0);
  try {
    max_allowable_perturbation(g, {5.0, 5.0, 5.0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoStableRegion);
  }
}

TEST_CASE("iso grid") {
  const SoptdModel g = benchmark(9);
  const IsoGrid one = iso_performance_grid(g, kG9Real, 0.3, 1, ParamPair::LT);
  REQUIRE(one.cells.size() == 1);
  CHECK(one.cells[0].param1 == g.L);
  CHECK(one.cells[0].param2 == g.T);
  CHECK(one.cells[0].stable);

  const IsoGrid grid = iso_performance_grid(g, kG9Real, 0.6, 4, ParamPair::LZeta);
  REQUIRE(grid.cells.size() == 16);
  CHECK(grid.at(0, 0).param1 == doctest::Approx(0.4 * g.L));
  CHECK(grid.at(3, 0).param1 == doctest::Approx(1.6 * g.L));
  CHECK(grid.at(0, 3).param2 == doctest::Approx(1.6 * g.zeta));
  for (const auto& c : grid.cells) {
    CHECK(c.stable == oracle::stable_pade3(g.K, c.param1, g.T, c.param2, kG9Real.kp, kG9Real.ki, kG9Real.kd));
    CHECK(c.report.has_value() == c.stable);
  }
  std::ostringstream os;
  write_iso_grid_csv(os, grid);
  CHECK(first_line(os.str()).rfind("param1,param2,stable,j2_d", 0) == 0);
}

TEST_CASE("parameter pair names") {
  CHECK(parse_param_pair("L,T") == ParamPair::LT);
  CHECK(parse_param_pair("Lzeta") == ParamPair::LZeta);
  CHECK(parse_param_pair("T,zeta") == ParamPair::TZeta);
  CHECK(to_string(ParamPair::TZeta) == "T,zeta");
  CHECK_THROWS_AS(parse_param_pair("K,T"), Error);
}
