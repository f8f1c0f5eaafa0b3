#include <doctest.h>

#include <random>

#include "dpp/cluster.hpp"
#include "dpp/error.hpp"
#include "oracles.hpp"

using namespace dpp;
using doctest::Approx;

namespace {

// Dataset whose S1 column holds the given gains, all flagged stable.
RegionDataset synthetic(const SoptdModel& model, const std::vector<PidGains>& gains) {
  RegionDataset d;
  d.model = model;
  d.n_samples = gains.size();
  for (const PidGains& g : gains) {
    RegionSample s;
    s.by_source[0].gains = g;
    s.by_source[0].stable = true;
    d.samples.push_back(s);
  }
  d.stable_count = {gains.size(), 0, 0, 0};
  return d;
}

std::vector<Point3> random_points(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<Point3> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = static_cast<double>(i % 3) * 4.0;
    p[i] = {c + nd(rng), nd(rng) - c, 0.5 * nd(rng)};
  }
  return p;
}

}  // namespace

TEST_CASE("k = 1 gives the component-wise mean") {
  const std::vector<Point3> p{{1.0, 2.0, 3.0}, {3.0, 2.0, 1.0}, {2.0, 5.0, -1.0}, {0.0, 3.0, 1.0}};
  const ClusterResult r = kmeans(p);
  REQUIRE(r.centroids.size() == 1);
  CHECK(r.centroids[0][0] == Approx(1.5));
  CHECK(r.centroids[0][1] == Approx(3.0));
  CHECK(r.centroids[0][2] == Approx(1.0));
  CHECK(r.assignments == std::vector<std::size_t>{0, 0, 0, 0});
}

TEST_CASE("two well separated pairs") {
  const std::vector<Point3> p{{0.0, 0.0, 0.0}, {10.0, 10.0, 10.0}, {0.1, 0.0, 0.0}, {10.1, 10.0, 10.0}};
  const ClusterResult r = kmeans(p, {.k = 2, .restarts = 10, .seed = 1});
  REQUIRE(r.centroids.size() == 2);
  const std::size_t lo = r.centroids[0][0] < r.centroids[1][0] ? 0 : 1;
  CHECK(r.centroids[lo][0] == Approx(0.05));
  CHECK(r.centroids[lo][1] == Approx(0.0));
  CHECK(r.centroids[1 - lo][0] == Approx(10.05));
  CHECK(r.centroids[1 - lo][2] == Approx(10.0));
  CHECK(r.assignments[0] == r.assignments[2]);
  CHECK(r.assignments[1] == r.assignments[3]);
  CHECK(r.assignments[0] != r.assignments[1]);
}

TEST_CASE("kmeans preconditions") {
  const std::vector<Point3> p{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
  CHECK_THROWS_AS(kmeans(p, {.k = 3}), Error);
  CHECK_THROWS_AS(kmeans(std::vector<Point3>{}, {}), Error);
  CHECK_THROWS_AS(kmeans(p, {.k = 0}), Error);
}

TEST_CASE("Lloyd iterations never increase the within sum of squares") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_points(rng, 90);
    const ClusterResult r = kmeans(p, {.k = 3, .restarts = 5, .seed = static_cast<std::uint64_t>(t)});
    for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1] * (1.0 + 1e-12));
    REQUIRE(r.restart_within_ss.size() == 5);
    for (double w : r.restart_within_ss) CHECK(r.within_ss <= w * (1.0 + 1e-12));
  }
}

TEST_CASE("translation equivariance") {
  std::mt19937_64 rng(3);
  const auto p = random_points(rng, 60);
  auto q = p;
  const Point3 v{5.0, -3.0, 0.25};
  for (auto& x : q)
    for (int k = 0; k < 3; ++k) x[static_cast<std::size_t>(k)] += v[static_cast<std::size_t>(k)];
  const ClusterResult a = kmeans(p, {.k = 3, .seed = 8});
  const ClusterResult b = kmeans(q, {.k = 3, .seed = 8});
  CHECK(a.assignments == b.assignments);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t k = 0; k < 3; ++k) CHECK(b.centroids[c][k] == Approx(a.centroids[c][k] + v[k]).epsilon(1e-10));
}

TEST_CASE("median distance") {
  const Point3 c{1.0, 1.0, 1.0};
  CHECK(median_distance(std::vector<Point3>{c}, c) == 0.0);
  CHECK(median_distance(std::vector<Point3>{{0.0, 1.0, 1.0}, {2.0, 1.0, 1.0}}, c) == 1.0);
  // distances 1, 2, 4, 10: mean of the two middle values
  const std::vector<Point3> p{{2.0, 1.0, 1.0}, {1.0, 3.0, 1.0}, {1.0, 1.0, 5.0}, {11.0, 1.0, 1.0}};
  CHECK(median_distance(p, c) == 3.0);
  CHECK(median_distance(std::vector<Point3>(p.begin(), p.begin() + 3), c) == 2.0);
}

TEST_CASE("robust gains of three stable points are their mean") {
  const SoptdModel g = benchmark(5);
  const std::vector<PidGains> pts{{0.30, 0.35, 1.00}, {0.40, 0.36, 1.05}, {0.35, 0.38, 0.98}};
  for (const auto& p : pts) REQUIRE(oracle::stable_pade3(g.K, g.L, g.T, g.zeta, p.kp, p.ki, p.kd));
  const RobustGains r = robust_gains(synthetic(g, pts));
  CHECK(r.gains.kp == Approx(0.35));
  CHECK(r.gains.ki == Approx(0.36333333333333333));
  CHECK(r.gains.kd == Approx(1.01));
  CHECK(r.source == KpSource::S1);
  CHECK(r.n_stable == 3);
  CHECK(r.poles.size() == 6);
  CHECK(oracle::stable_pade3(g.K, g.L, g.T, g.zeta, r.gains.kp, r.gains.ki, r.gains.kd));
}

TEST_CASE("a stable set whose mean is unstable is reported as non-convex") {
  const SoptdModel g = benchmark(5);
  const PidGains a{0.558, 0.672, -0.529};
  const PidGains b{-0.011, 0.044, -2.188};
  REQUIRE(oracle::stable_pade3(g.K, g.L, g.T, g.zeta, a.kp, a.ki, a.kd));
  REQUIRE(oracle::stable_pade3(g.K, g.L, g.T, g.zeta, b.kp, b.ki, b.kd));
  REQUIRE_FALSE(oracle::stable_pade3(g.K, g.L, g.T, g.zeta, (a.kp + b.kp) / 2, (a.ki + b.ki) / 2, (a.kd + b.kd) / 2));
  try {
    robust_gains(synthetic(g, {a, b}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonConvexRegion);
  }
}

TEST_CASE("no stable samples") {
  RegionDataset d = synthetic(benchmark(5), {});
  try {
    robust_gains(d);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoStableRegion);
  }
}
