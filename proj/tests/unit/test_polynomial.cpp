#include <doctest.h>

#include <numbers>
#include <random>

#include "dpp/error.hpp"
#include "dpp/pade.hpp"
#include "dpp/placement.hpp"
#include "dpp/plant.hpp"
#include "dpp/polynomial.hpp"
#include "dpp/rational.hpp"
#include "oracles.hpp"

using namespace dpp;
using doctest::Approx;

namespace {

void check_coeffs(const Polynomial& p, const std::vector<double>& ascending) {
  REQUIRE(p.coeffs().size() == ascending.size());
  for (std::size_t i = 0; i < ascending.size(); ++i) CHECK(p.coeffs()[i] == ascending[i]);
}

bool has_root(const std::vector<Complex>& r, Complex want, double tol) {
  return std::any_of(r.begin(), r.end(), [&](Complex z) { return std::abs(z - want) < tol; });
}

}  // namespace

TEST_CASE("polynomial trims trailing zeros") {
  Polynomial p{1.0, 2.0, 0.0, 0.0};
  CHECK(p.degree() == 1);
  CHECK(Polynomial{0.0, 0.0}.is_zero());
  CHECK(Polynomial{}.degree() == -1);
  const std::vector<double> desc{1.0, 3.0, 2.0};
  check_coeffs(Polynomial::from_descending(desc), {2.0, 3.0, 1.0});
}

TEST_CASE("poly_mul") {
  check_coeffs(poly_mul({1.0, 1.0}, {2.0, 1.0}), {2.0, 3.0, 1.0});
  CHECK(poly_mul({1.0, 2.0, 3.0}, Polynomial{}).is_zero());
  // (s^2 + 2s + 1)(s^2 + 4s + 4)^2 expanded by hand
  const Polynomial q{4.0, 4.0, 1.0};
  check_coeffs(Polynomial{1.0, 2.0, 1.0} * q * q, {16.0, 64.0, 104.0, 88.0, 41.0, 10.0, 1.0});
}

TEST_CASE("printing is descending with power labels") {
  CHECK(Polynomial{2.0, 3.0, 1.0}.to_string() == "s^2 + 3*s + 2");
}

TEST_CASE("divmod") {
  const DivMod d = divmod({2.0, 1.0}, {1.0, 1.0});
  check_coeffs(d.quotient, {1.0});
  check_coeffs(d.remainder, {1.0});
  CHECK_THROWS_AS(divmod({1.0}, Polynomial{}), Error);
}

TEST_CASE("roots of simple polynomials") {
  const auto r = roots({2.0, 3.0, 1.0});
  REQUIRE(r.size() == 2);
  CHECK(has_root(r, -1.0, 1e-12));
  CHECK(has_root(r, -2.0, 1e-12));

  // a six-fold root is only determined to about eps^(1/6) ~ 2e-3; the
  // cluster mean is exact
  const auto r6 = roots(pow(Polynomial{1.0, 1.0}, 6));
  REQUIRE(r6.size() == 6);
  for (const auto& z : r6) CHECK(std::abs(z + 1.0) < 5e-3);
  const auto cl = cluster_roots(r6, 1e-2);
  REQUIRE(cl.size() == 1);
  CHECK(cl[0].multiplicity == 6);
  CHECK(std::abs(cl[0].center + 1.0) < 1e-9);

  CHECK_THROWS_AS(roots(Polynomial{}), Error);
  CHECK_THROWS_AS(roots(Polynomial{3.0}), Error);
}

TEST_CASE("roots of a product of known factors") {
  const Polynomial p =
      Polynomial{0.3, 1.0} * Polynomial{2.0, 1.0} * Polynomial{5.0, 0.8, 1.0} * Polynomial{13.0, 6.0, 1.0};
  const auto r = roots(p);
  REQUIRE(r.size() == 6);
  const double s = std::sqrt(5.0 - 0.16);
  for (Complex want : {Complex(-0.3), Complex(-2.0), Complex(-0.4, s), Complex(-0.4, -s), Complex(-3.0, 2.0),
                       Complex(-3.0, -2.0)})
    CHECK(has_root(r, want, 1e-8));
}

TEST_CASE("roots round trip on random stable root sets") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> re(-5.0, -0.1), im(0.0, 5.0);
  std::uniform_int_distribution<int> deg(1, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = deg(rng);
    std::vector<Complex> want;
    while (static_cast<int>(want.size()) < n) {
      if (n - static_cast<int>(want.size()) >= 2 && (trial + want.size()) % 2 == 0) {
        const Complex z(re(rng), im(rng));
        want.push_back(z);
        want.push_back(std::conj(z));
      } else {
        want.emplace_back(re(rng), 0.0);
      }
    }
    // expand with the oracle, independent of from_roots
    oracle::Coeffs c{1.0};
    for (std::size_t i = 0; i < want.size(); ++i) {
      if (want[i].imag() != 0.0) {
        const Complex z = want[i++];
        c = oracle::mul(c, {std::norm(z), -2.0 * z.real(), 1.0});
      } else {
        c = oracle::mul(c, {-want[i].real(), 1.0});
      }
    }
    const auto got = roots(Polynomial(c));
    REQUIRE(got.size() == want.size());
    for (const auto& z : want) {
      double best = 1e300;
      for (const auto& g : got) best = std::min(best, std::abs(g - z));
      CHECK(best < 1e-7);
    }
  }
}

TEST_CASE("from_roots expands conjugate pairs") {
  const std::vector<Complex> r{Complex(-1.0, 2.0), Complex(-1.0, -2.0), Complex(-3.0)};
  check_coeffs(Polynomial::from_roots(r), {15.0, 11.0, 5.0, 1.0});
}

TEST_CASE("feedback_unity") {
  const RationalTF cl = feedback_unity(RationalTF({1.0}, {0.0, 1.0}));
  check_coeffs(cl.num(), {1.0});
  check_coeffs(cl.den(), {1.0, 1.0});
  CHECK_THROWS_AS(feedback_unity(RationalTF({-1.0}, {1.0})), Error);
}

TEST_CASE("Pade-3 SOPTD with PID has six poles and five zeros") {
  const SoptdModel g = benchmark(5);
  const PidGains k{0.35, 0.36, 1.02};
  const RationalTF cl = feedback_unity(to_tf(g, 3) * pid_tf(k));
  CHECK(cl.num().degree() == 5);
  CHECK(cl.den().degree() == 6);

  // denominator against the hand-expanded Pade-3 characteristic polynomial
  const oracle::Coeffs want = oracle::closed_loop_pade3(g.K, g.L, g.T, g.zeta, k.kp, k.ki, k.kd);
  const double scale = cl.den().leading() / want.back();
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(cl.den()[static_cast<int>(i)] == Approx(scale * want[i]).epsilon(1e-12));
}

TEST_CASE("freq_response") {
  const RationalTF lag({1.0}, {1.0, 1.0});
  const Complex v = freq_response(lag, 0.0, 1.0);
  CHECK(v.real() == Approx(0.5));
  CHECK(v.imag() == Approx(-0.5));
  CHECK(std::abs(v) == Approx(0.70711).epsilon(1e-5));

  const Complex d = freq_response(RationalTF::constant(1.0), 1.0, std::numbers::pi);
  CHECK(d.real() == Approx(-1.0));
  CHECK(std::abs(d.imag()) < 1e-12);

  const Complex i = freq_response(RationalTF({1.0}, {0.0, 1.0}), 1.0, 1.0);
  CHECK(std::abs(i) == Approx(1.0));
  CHECK(std::arg(i) == Approx(std::remainder(-(std::numbers::pi / 2 + 1.0), 2 * std::numbers::pi)));

  CHECK_THROWS_AS(freq_response(RationalTF({1.0}, {1.0, 0.0, 1.0}), 0.0, 1.0), Error);
}

TEST_CASE("delay leaves the magnitude unchanged") {
  const RationalTF h({1.0, 0.5}, {2.0, 3.0, 1.0});
  for (double w = 1e-3; w < 1e3; w *= 1.7)
    CHECK(std::abs(freq_response(h, 2.5, w)) == Approx(std::abs(freq_response(h, 0.0, w))).epsilon(1e-13));
}

TEST_CASE("Se + T = 1 at random frequencies") {
  const RationalTF fwd = to_tf(benchmark(2), 3) * pid_tf({0.6856, 0.6052, 1.2991});
  const RationalTF t = feedback_unity(fwd);
  const RationalTF se(fwd.den(), fwd.den() + fwd.num());
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lw(-3.0, 3.0);
  for (int i = 0; i < 20; ++i) {
    const Complex s(0.0, std::pow(10.0, lw(rng)));
    CHECK(std::abs(se(s) + t(s) - 1.0) < 1e-10);
  }
}
