#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dpp/explorer.hpp"

namespace dpp {

using Point3 = std::array<double, 3>;

struct KMeansOptions {
  std::size_t k = 1;
  std::size_t restarts = 10;
  double tol = 1e-10;
  std::size_t max_iter = 300;
  std::uint64_t seed = 0;
};

struct ClusterResult {
  std::vector<Point3> centroids;
  std::vector<std::size_t> assignments;
  double within_ss = 0.0;
  std::vector<double> median_distance;  // one per centroid
  /// within_ss after every Lloyd iteration of the winning restart.
  std::vector<double> history;
  /// Final within_ss of each restart, in restart order.
  std::vector<double> restart_within_ss;
};

/**
 * Lloyd's algorithm on squared Euclidean distance over raw coordinates.
 * Each restart seeds its centroids with k distinct input points drawn from
 * CounterRng(seed, KMeansInit) at stream = restart index; the restart with
 * the lowest within_ss wins (ties to the earliest). With k = 1 every
 * restart converges to the mean, so restarts change nothing there.
 */
ClusterResult kmeans(std::span<const Point3> points, const KMeansOptions& opts = {});

/// Median of point-to-centroid distances; an even count averages the two
/// middle values.
double median_distance(std::span<const Point3> points, const Point3& centroid);

struct RobustGains {
  PidGains gains;
  KpSource source;
  std::size_t n_stable = 0;
  double median_distance = 0.0;
  std::vector<Complex> poles;  // nominal Pade-3 closed loop at the centroid
};

/// k = 1 centroid of the stable gains of the best Kp expression. Throws
/// no_stable_region without stable samples and non_convex_region when
/// the centroid does not stabilize the plant.
RobustGains robust_gains(const RegionDataset& d, std::size_t restarts = 10, std::uint64_t seed = 0);

}  // namespace dpp
