#include "dpp/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "dpp/error.hpp"
#include "dpp/rng.hpp"

namespace dpp {

namespace {

double sq_dist(const Point3& a, const Point3& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < 3; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

struct Run {
  std::vector<Point3> centroids;
  std::vector<std::size_t> assignments;
  double within_ss = std::numeric_limits<double>::infinity();
  std::vector<double> history;
};

// Assign each point to its nearest centroid (ties to the lowest index) and
// return the resulting within-cluster sum of squares.
double assign(std::span<const Point3> pts, const std::vector<Point3>& cents, std::vector<std::size_t>& out) {
  double wss = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::size_t best = 0;
    double bd = sq_dist(pts[i], cents[0]);
    for (std::size_t c = 1; c < cents.size(); ++c) {
      const double d = sq_dist(pts[i], cents[c]);
      if (d < bd) {
        bd = d;
        best = c;
      }
    }
    out[i] = best;
    wss += bd;
  }
  return wss;
}

Run lloyd(std::span<const Point3> pts, std::vector<Point3> cents, const KMeansOptions& opts) {
  Run run;
  run.assignments.assign(pts.size(), 0);
  for (std::size_t it = 0; it < opts.max_iter; ++it) {
    run.within_ss = assign(pts, cents, run.assignments);
    run.history.push_back(run.within_ss);

    std::vector<Point3> next(cents.size(), Point3{0, 0, 0});
    std::vector<std::size_t> counts(cents.size(), 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      auto& c = next[run.assignments[i]];
      for (std::size_t d = 0; d < 3; ++d) c[d] += pts[i][d];
      ++counts[run.assignments[i]];
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < cents.size(); ++c) {
      if (counts[c] == 0) {
        next[c] = cents[c];  // empty cluster keeps its position
        continue;
      }
      for (std::size_t d = 0; d < 3; ++d) next[c][d] /= static_cast<double>(counts[c]);
      shift = std::max(shift, std::sqrt(sq_dist(next[c], cents[c])));
    }
    cents = std::move(next);
    if (shift < opts.tol) break;
  }
  run.within_ss = assign(pts, cents, run.assignments);
  run.history.push_back(run.within_ss);
  run.centroids = std::move(cents);
  return run;
}

}  // namespace

ClusterResult kmeans(std::span<const Point3> points, const KMeansOptions& opts) {
  if (points.empty()) throw invalid_input("kmeans: empty input");
  if (opts.k < 1) throw invalid_input("kmeans: k must be >= 1");
  if (opts.k > points.size()) throw invalid_input("kmeans: k exceeds the number of points");
  const std::size_t restarts = std::max<std::size_t>(1, opts.restarts);
  const CounterRng rng(opts.seed, CounterRng::Domain::KMeansInit);

  ClusterResult out;
  Run best;
  for (std::size_t r = 0; r < restarts; ++r) {
    // k distinct indices by partial Fisher-Yates on a virtual index array.
    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<Point3> init;
    for (std::size_t c = 0; c < opts.k; ++c) {
      const std::size_t span = points.size() - c;
      const auto j = c + static_cast<std::size_t>(rng.uniform01(r, c) * static_cast<double>(span));
      std::swap(idx[c], idx[std::min(j, points.size() - 1)]);
      init.push_back(points[idx[c]]);
    }
    Run run = lloyd(points, std::move(init), opts);
    out.restart_within_ss.push_back(run.within_ss);
    if (run.within_ss < best.within_ss) best = std::move(run);
  }

  out.centroids = std::move(best.centroids);
  out.assignments = std::move(best.assignments);
  out.within_ss = best.within_ss;
  out.history = std::move(best.history);
  for (std::size_t c = 0; c < out.centroids.size(); ++c) {
    std::vector<Point3> members;
    for (std::size_t i = 0; i < points.size(); ++i)
      if (out.assignments[i] == c) members.push_back(points[i]);
    out.median_distance.push_back(members.empty() ? 0.0 : median_distance(members, out.centroids[c]));
  }
  return out;
}

double median_distance(std::span<const Point3> points, const Point3& centroid) {
  if (points.empty()) throw invalid_input("median_distance: empty input");
  std::vector<double> d(points.size());
  std::transform(points.begin(), points.end(), d.begin(),
                 [&](const Point3& p) { return std::sqrt(sq_dist(p, centroid)); });
  const std::size_t n = d.size();
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(n / 2), d.end());
  const double upper = d[n / 2];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(n / 2));
  return 0.5 * (lower + upper);
}

RobustGains robust_gains(const RegionDataset& d, std::size_t restarts, std::uint64_t seed) {
  const KpSource src = best_expression(d);
  std::vector<Point3> pts;
  for (const RegionSample& s : d.samples) {
    const SourceOutcome& o = s.at(src);
    if (o.stable) pts.push_back({o.gains.kp, o.gains.ki, o.gains.kd});
  }
  if (pts.empty()) throw no_stable_region("robust_gains: no stable samples");
  const ClusterResult cr = kmeans(pts, {.k = 1, .restarts = restarts, .seed = seed});

  RobustGains out;
  out.gains = {cr.centroids[0][0], cr.centroids[0][1], cr.centroids[0][2]};
  out.source = src;
  out.n_stable = pts.size();
  out.median_distance = cr.median_distance[0];
  out.poles = closedloop_poles(d.model, out.gains, 3);
  if (!is_stable(out.poles)) {
    std::ostringstream os;
    os << "robust_gains: non-convex region, centroid (" << out.gains.kp << ", " << out.gains.ki << ", "
       << out.gains.kd << ") does not stabilize the nominal plant (max Re = " << max_real_part(out.poles) << ")";
    throw non_convex_region(os.str());
  }
  return out;
}

}  // namespace dpp
