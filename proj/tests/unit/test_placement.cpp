#include <doctest.h>

#include <random>

#include "dpp/error.hpp"
#include "dpp/placement.hpp"
#include "dpp/plant.hpp"
#include "gain_oracles.hpp"
#include "oracles.hpp"

using namespace dpp;
using doctest::Approx;

namespace {

oracle::Coeffs desired_oracle(const DesignSpec& d, PoleType t) {
  const double m = d.m, z = d.zeta_cl, w = d.omega_cl;
  const oracle::Coeffs dom{w * w, 2.0 * z * w, 1.0};
  const oracle::Coeffs cpx{m * m * w * w, 2.0 * m * z * w, 1.0};
  const oracle::Coeffs real{m * z * w, 1.0};
  oracle::Coeffs rest;
  switch (t) {
    case PoleType::AllComplex: rest = oracle::mul(cpx, cpx); break;
    case PoleType::AllReal: rest = oracle::mul(oracle::mul(real, real), oracle::mul(real, real)); break;
    case PoleType::Mixed: rest = oracle::mul(cpx, oracle::mul(real, real)); break;
  }
  return oracle::mul(dom, rest);
}

struct RandomCase {
  SoptdModel model;
  DesignSpec spec;
};

RandomCase random_case(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RandomCase c;
  c.model = {(u(rng) < 0.5 ? -1.0 : 1.0) * (0.05 + 5.0 * u(rng)), 0.2 + 5.0 * u(rng), 0.2 + 5.0 * u(rng), 0.2 + 3.0 * u(rng)};
  c.spec = {1.0 + 9.0 * u(rng), 0.2 + 4.8 * u(rng), 0.1 + 9.9 * u(rng)};
  return c;
}

}  // namespace

TEST_CASE("desired polynomial examples") {
  const Polynomial r = desired_charpoly({1.0, 1.0, 1.0}, PoleType::AllReal);
  CHECK(r.coeffs() == std::vector<double>{1.0, 6.0, 15.0, 20.0, 15.0, 6.0, 1.0});
  const Polynomial c = desired_charpoly({2.0, 1.0, 1.0}, PoleType::AllComplex);
  CHECK(c.coeffs() == std::vector<double>{16.0, 64.0, 104.0, 88.0, 41.0, 10.0, 1.0});
}

TEST_CASE("desired polynomial matches the factor oracle") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const DesignSpec d = random_case(rng).spec;
    for (PoleType t : kPoleTypes) {
      const Polynomial p = desired_charpoly(d, t);
      const oracle::Coeffs want = desired_oracle(d, t);
      REQUIRE(p.degree() == 6);
      for (int k = 0; k <= 6; ++k) CHECK(p[k] == Approx(want[static_cast<std::size_t>(k)]).epsilon(1e-12));
    }
  }
}

TEST_CASE("at unit damping all pole types coincide") {
  for (double m : {1.0, 2.5, 7.0})
    for (double w : {0.3, 1.0, 4.0}) {
      const DesignSpec d{m, 1.0, w};
      const Polynomial a = desired_charpoly(d, PoleType::AllComplex);
      for (PoleType t : {PoleType::AllReal, PoleType::Mixed}) {
        const Polynomial b = desired_charpoly(d, t);
        for (int k = 0; k <= 6; ++k) CHECK(b[k] == Approx(a[k]).epsilon(1e-13));
        for (KpSource s : kKpSources) {
          const PidGains ga = solve_gains(benchmark(4), d, PoleType::AllComplex, s);
          const PidGains gb = solve_gains(benchmark(4), d, t, s);
          CHECK(gb.kp == Approx(ga.kp).epsilon(1e-10));
          CHECK(gb.ki == Approx(ga.ki).epsilon(1e-12));
          CHECK(gb.kd == Approx(ga.kd).epsilon(1e-12));
        }
      }
    }
}

TEST_CASE("open-loop characteristic polynomial") {
  const SoptdModel g = benchmark(7);
  const PidGains k{0.3, 0.2, 0.7};
  const Polynomial p = openloop_charpoly(g, k);
  const double L3 = g.L * g.L * g.L;
  REQUIRE(p.degree() == 6);
  CHECK(p[6] == Approx(1.0));
  CHECK(p[0] == Approx(120.0 * g.K * k.ki / L3));
  CHECK(p[5] == Approx(12.0 / g.L + 2.0 * g.zeta * g.omega() - g.K * k.kd));

  const oracle::Coeffs want = oracle::closed_loop_pade3(g.K, g.L, g.T, g.zeta, k.kp, k.ki, k.kd);
  for (int i = 0; i <= 6; ++i) CHECK(p[i] == Approx(want[static_cast<std::size_t>(i)] / L3).epsilon(1e-12));

  // zero controller: s (s^2 + 2 z w s + w^2)(s^3 + 12 s^2/L + 60 s/L^2 + 120/L^3)
  const Polynomial z = openloop_charpoly(g, {});
  const double w = g.omega(), L = g.L;
  const oracle::Coeffs open = oracle::mul(oracle::mul({0.0, 1.0}, {w * w, 2.0 * g.zeta * w, 1.0}),
                                          {120.0 / L3, 60.0 / (L * L), 12.0 / L, 1.0});
  for (int i = 0; i <= 6; ++i) CHECK(z[i] == Approx(open[static_cast<std::size_t>(i)]).epsilon(1e-12));
}

TEST_CASE("hand-derived point: G5, all-complex, m = 2, unit damping and frequency, s^1") {
  const PidGains g = solve_gains(benchmark(5), {2.0, 1.0, 1.0}, PoleType::AllComplex, KpSource::S1);
  CHECK(std::abs(g.kp - (-0.4)) < 1e-12);
  CHECK(std::abs(g.ki - 16.0 / 120.0) < 1e-12);
  CHECK(std::abs(g.kd - 4.0) < 1e-12);
}

TEST_CASE("all-real Ki example") {
  const PidGains g = solve_gains(benchmark(5), {2.0, 2.0, 1.0}, PoleType::AllReal, KpSource::S1);
  CHECK(g.ki == Approx(256.0 / 120.0).epsilon(1e-13));
  CHECK(g.ki == Approx(2.13333).epsilon(1e-5));
}

TEST_CASE("doubling K halves every gain") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    RandomCase c = random_case(rng);
    SoptdModel twice = c.model;
    twice.K *= 2.0;
    for (PoleType t : kPoleTypes)
      for (KpSource s : kKpSources) {
        const PidGains a = solve_gains(c.model, c.spec, t, s);
        const PidGains b = solve_gains(twice, c.spec, t, s);
        CHECK(b.kp == Approx(a.kp / 2.0).epsilon(1e-12));
        CHECK(b.ki == Approx(a.ki / 2.0).epsilon(1e-12));
        CHECK(b.kd == Approx(a.kd / 2.0).epsilon(1e-12));
      }
  }
}

TEST_CASE("closed forms agree with coefficient matching") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    const RandomCase c = random_case(rng);
    for (int src = 1; src <= 4; ++src) {
      const auto s = static_cast<KpSource>(src);
      const PidGains a = solve_gains(c.model, c.spec, PoleType::AllComplex, s);
      const PidGains ac = oracle::closed_form_complex(c.model, c.spec, src);
      const PidGains r = solve_gains(c.model, c.spec, PoleType::AllReal, s);
      const PidGains rc = oracle::closed_form_real(c.model, c.spec, src);
      // relative to the size of the terms that were summed
      const double scale_a = std::max({std::abs(ac.kp), std::abs(ac.kd), 1.0 / std::abs(c.model.K)});
      const double scale_r = std::max({std::abs(rc.kp), std::abs(rc.kd), 1.0 / std::abs(c.model.K)});
      CHECK(std::abs(a.ki - ac.ki) <= 1e-12 * std::abs(ac.ki));
      CHECK(std::abs(a.kd - ac.kd) <= 1e-9 * scale_a);
      CHECK(std::abs(r.ki - rc.ki) <= 1e-12 * std::abs(rc.ki));
      CHECK(std::abs(r.kd - rc.kd) <= 1e-9 * scale_r);
      CHECK(std::abs(a.kp - ac.kp) <= 1e-8 * scale_a);
      CHECK(std::abs(r.kp - rc.kp) <= 1e-8 * scale_r);
    }
  }
}

TEST_CASE("all-real Kd subtracts 2 zeta w (1 + 2m), not (1 - 2m)") {
  const SoptdModel g = benchmark(2);
  const DesignSpec d{3.0, 1.5, 0.8};
  const PidGains k = solve_gains(g, d, PoleType::AllReal, KpSource::S1);
  const double plus = (12.0 / g.L + 2.0 * g.zeta * g.omega() - 2.0 * d.zeta_cl * d.omega_cl * (1.0 + 2.0 * d.m)) / g.K;
  const double minus = (12.0 / g.L + 2.0 * g.zeta * g.omega() - 2.0 * d.zeta_cl * d.omega_cl * (1.0 - 2.0 * d.m)) / g.K;
  CHECK(k.kd == Approx(plus).epsilon(1e-13));
  CHECK(std::abs(k.kd - minus) > 1.0);
}

TEST_CASE("matched coefficients hold for all pole types and sources") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 300; ++i) {
    const RandomCase c = random_case(rng);
    for (PoleType t : kPoleTypes) {
      const Polynomial want = desired_charpoly(c.spec, t);
      for (KpSource s : kKpSources) {
        const Polynomial got = openloop_charpoly(c.model, solve_gains(c.model, c.spec, t, s));
        for (int k : {0, 5, power_of(s)}) CHECK(std::abs(got[k] - want[k]) <= 1e-10 * std::max(1.0, std::abs(want[k])));
      }
    }
  }
}

TEST_CASE("closed-loop poles") {
  const SoptdModel g = benchmark(5);
  const PidGains k{0.3531, 0.3623, 1.0217};
  const auto p = closedloop_poles(g, k, 3);
  CHECK(p.size() == 6);
  CHECK(closedloop_poles(g, k, 9).size() == 12);
  CHECK_THROWS_AS(closedloop_poles(g, {}, 3), Error);
  CHECK_THROWS_AS(closedloop_poles(g, k, 0), Error);

  const auto want = oracle::roots(oracle::closed_loop_pade3(g.K, g.L, g.T, g.zeta, k.kp, k.ki, k.kd));
  for (const auto& z : want) {
    double best = 1e300;
    for (const auto& q : p) best = std::min(best, std::abs(q - z));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("a stable design keeps its dominant pair") {
  // G2, all-real, modest specs: the closed loop is stable and the matched
  // dominant pair shows up among the poles
  const SoptdModel g = benchmark(2);
  const DesignSpec d{2.0, 0.7, 0.5};
  for (KpSource s : kKpSources) {
    const PidGains k = solve_gains(g, d, PoleType::AllReal, s);
    const auto want = oracle::roots(oracle::closed_loop_pade3(g.K, g.L, g.T, g.zeta, k.kp, k.ki, k.kd));
    const bool stable = oracle::max_re(want) < -1e-9;
    CHECK(is_stable(closedloop_poles(g, k)) == stable);
  }
}

TEST_CASE("is_stable") {
  CHECK(is_stable({Complex(-1.0), Complex(-2.0, 3.0), Complex(-2.0, -3.0)}));
  CHECK_FALSE(is_stable({Complex(-1.0), Complex(0.001)}));
  CHECK_FALSE(is_stable({Complex(-1.0), Complex(-1e-12)}));
  CHECK_THROWS_AS(is_stable({}), Error);
  CHECK(max_real_part({Complex(-1.0), Complex(-0.5, 2.0)}) == -0.5);
}

TEST_CASE("scaling K by c and the gains by 1/c leaves stability unchanged") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const SoptdModel g = benchmark(4);
  for (int i = 0; i < 200; ++i) {
    const PidGains k{u(rng), 0.5 * (u(rng) + 2.0), u(rng)};
    const double c = 3.7;
    SoptdModel gc = g;
    gc.K *= c;
    const PidGains kc{k.kp / c, k.ki / c, k.kd / c};
    CHECK(is_stable(closedloop_poles(g, k)) == is_stable(closedloop_poles(gc, kc)));
  }
}

TEST_CASE("names") {
  CHECK(parse_pole_type("all-real") == PoleType::AllReal);
  CHECK(parse_pole_type("two-complex-two-real") == PoleType::Mixed);
  CHECK(parse_kp_source("s3") == KpSource::S3);
  CHECK_THROWS_AS(parse_pole_type("none"), Error);
  CHECK_THROWS_AS(parse_kp_source("s5"), Error);
  CHECK_THROWS_AS((DesignSpec{0.5, 1.0, 1.0}.validate()), Error);
}
