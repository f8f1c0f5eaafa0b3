#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace dpp {

struct KruskalResult {
  double H = 0.0;
  int df = 0;
  double p_value = 1.0;
  /// True when the chi-square tail underflowed below 1e-300; p_value is
  /// then 1e-300 and should be read as "< 1e-300".
  bool p_floored = false;

  std::string p_text() const;
};

inline constexpr double kPValueFloor = 1e-300;

/// Kruskal-Wallis H with mid-ranks and the tie correction; p from the
/// chi-square upper tail with groups - 1 degrees of freedom. Throws
/// invalid_input for fewer than two groups, an empty group, n < 3, or all
/// observations identical.
KruskalResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

/// Groups the named value column of a CSV by its `group` column, keeping
/// the groups in order of first appearance.
std::vector<std::pair<std::string, std::vector<double>>> read_grouped_csv(std::istream& is, std::string_view column);

}  // namespace dpp
