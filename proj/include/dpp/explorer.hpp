#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dpp/placement.hpp"

namespace dpp {

struct Interval {
  double lo;
  double hi;
};

/// Sampling box for the design parameters.
struct DesignRanges {
  Interval m{1.0, 10.0};
  Interval zeta_cl{1.0, 5.0};
  Interval omega_cl{1.0, 10.0};
  void validate() const;
};

struct SourceOutcome {
  PidGains gains;
  bool stable = false;
  double max_real_part = 0.0;
};

struct RegionSample {
  DesignSpec spec;
  std::array<SourceOutcome, 4> by_source;  // indexed by power_of(src) - 1
  const SourceOutcome& at(KpSource s) const { return by_source[static_cast<std::size_t>(power_of(s) - 1)]; }
};

struct RegionDataset {
  std::string plant;  // label, e.g. "G5"
  SoptdModel model;
  PoleType type = PoleType::AllComplex;
  DesignRanges ranges;
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
  std::vector<RegionSample> samples;
  std::array<std::size_t, 4> stable_count{};

  double percent_volume(KpSource s) const;
  std::size_t count(KpSource s) const { return stable_count[static_cast<std::size_t>(power_of(s) - 1)]; }
};

/// Design draw for one sample index: m, zeta_cl, omega_cl at counters 0, 1, 2
/// of CounterRng(seed, DesignSample), stream = index.
DesignSpec draw_design(const DesignRanges& ranges, std::uint64_t seed, std::uint64_t index);

/// Gains for all four Kp sources at one design point plus their Pade-3
/// stability verdicts.
RegionSample evaluate_design(const SoptdModel& model, PoleType type, const DesignSpec& spec);

/// Monte Carlo exploration of the design box; deterministic in
/// (seed, n_samples, ranges) whatever the thread count.
RegionDataset sample_region(const SoptdModel& model, PoleType type, const DesignRanges& ranges,
                            std::size_t n_samples, std::uint64_t seed, std::string plant_label = "custom");

/// Source with the largest stable count, ties to the lowest power.
/// Throws no_stable_region when every count is zero.
KpSource best_expression(const std::array<std::size_t, 4>& counts);
inline KpSource best_expression(const RegionDataset& d) { return best_expression(d.stable_count); }

struct RegionRecord {
  double m, zeta_cl, omega_cl;
  double kp, ki, kd;
  bool stable;
  double max_real_part;
};

std::vector<RegionRecord> export_region(const RegionDataset& d, KpSource which, bool stable_only = false);

/// Header: m,zeta_cl,omega_cl,kp,ki,kd,stable,max_real_part
void write_region_csv(std::ostream& os, const std::vector<RegionRecord>& records);
std::vector<RegionRecord> read_region_csv(std::istream& is);

}  // namespace dpp
