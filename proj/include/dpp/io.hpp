#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dpp/cluster.hpp"
#include "dpp/metrics.hpp"
#include "dpp/plant.hpp"

namespace dpp {

/// Shortest decimal that parses back to the identical double. Non-finite
/// values print as "nan", "inf", "-inf".
std::string format_double(double v);
/// Parses what format_double writes; throws invalid_input otherwise.
double parse_double(std::string_view text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// Column index by name; throws invalid_input if absent.
  std::size_t column(std::string_view name) const;
};

/// Plain comma-separated values, no quoting. Every row must match the
/// header width.
CsvTable read_csv(std::istream& is);

/// Plant JSON: {"K":..., "L":..., "T":..., "zeta_ol":...}, exactly these keys.
SoptdModel plant_from_json(std::string_view text);
std::string plant_to_json(const SoptdModel& model);

/// Report keys follow kMetricNames plus horizon, dt, npade and
/// u_impulse_weight. Absent or infinite values are written as null.
std::string report_to_json(const PerformanceReport& r);
PerformanceReport report_from_json(std::string_view text);

/// Robust gains, chosen Kp expression, stable count, median distance.
std::string centroid_to_json(const RobustGains& g);
RobustGains centroid_from_json(std::string_view text);

/// "kp,ki,kd"
PidGains parse_gains(std::string_view text);

}  // namespace dpp
