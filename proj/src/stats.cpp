#include "dpp/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "dpp/error.hpp"
#include "dpp/io.hpp"

namespace dpp {

std::string KruskalResult::p_text() const { return p_floored ? "< 1e-300" : format_double(p_value); }

KruskalResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw invalid_input("kruskal_wallis: need at least two groups");
  std::vector<std::pair<double, std::size_t>> obs;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw invalid_input("kruskal_wallis: group " + std::to_string(g) + " is empty");
    for (double v : groups[g]) {
      if (std::isnan(v)) throw invalid_input("kruskal_wallis: NaN observation");
      obs.emplace_back(v, g);
    }
  }
  const auto n = static_cast<double>(obs.size());
  if (obs.size() < 3) throw invalid_input("kruskal_wallis: need at least three observations");
  std::sort(obs.begin(), obs.end());

  std::vector<double> rank_sum(groups.size(), 0.0);
  double tie_sum = 0.0;
  for (std::size_t i = 0; i < obs.size();) {
    std::size_t j = i;
    while (j < obs.size() && obs[j].first == obs[i].first) ++j;
    const double mid = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1 .. j
    const auto t = static_cast<double>(j - i);
    tie_sum += t * t * t - t;
    for (std::size_t k = i; k < j; ++k) rank_sum[obs[k].second] += mid;
    i = j;
  }
  const double correction = 1.0 - tie_sum / (n * n * n - n);
  if (correction <= 0.0) throw invalid_input("kruskal_wallis: all observations are identical");

  const double rbar = 0.5 * (n + 1.0);
  double s = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto ng = static_cast<double>(groups[g].size());
    const double d = rank_sum[g] / ng - rbar;
    s += ng * d * d;
  }
  KruskalResult r;
  r.H = 12.0 / (n * (n + 1.0)) * s / correction;
  r.df = static_cast<int>(groups.size()) - 1;
  const boost::math::chi_squared dist(r.df);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.H));
  if (r.p_value < kPValueFloor) {
    r.p_value = kPValueFloor;
    r.p_floored = true;
  }
  return r;
}

std::vector<std::pair<std::string, std::vector<double>>> read_grouped_csv(std::istream& is, std::string_view column) {
  const CsvTable t = read_csv(is);
  const std::size_t gc = t.column("group");
  const std::size_t vc = t.column(column);
  std::vector<std::pair<std::string, std::vector<double>>> out;
  for (const auto& row : t.rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first == row[gc]; });
    if (it == out.end()) {
      out.emplace_back(row[gc], std::vector<double>{});
      it = std::prev(out.end());
    }
    it->second.push_back(parse_double(row[vc]));
  }
  return out;
}

}  // namespace dpp
