#include "dpp/explorer.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "dpp/error.hpp"
#include "dpp/io.hpp"
#include "dpp/parallel.hpp"
#include "dpp/rng.hpp"

namespace dpp {

void DesignRanges::validate() const {
  for (const Interval* r : {&m, &zeta_cl, &omega_cl})
    if (!(r->lo < r->hi)) throw invalid_input("design ranges need lower < upper");
  if (m.lo < 1.0) throw invalid_input("design range for m must start at >= 1");
  if (!(zeta_cl.lo > 0.0) || !(omega_cl.lo > 0.0)) throw invalid_input("zeta_cl and omega_cl ranges must be positive");
}

double RegionDataset::percent_volume(KpSource s) const {
  if (n_samples == 0) return 0.0;
  return 100.0 * static_cast<double>(count(s)) / static_cast<double>(n_samples);
}

DesignSpec draw_design(const DesignRanges& ranges, std::uint64_t seed, std::uint64_t index) {
  const CounterRng rng(seed, CounterRng::Domain::DesignSample);
  return {rng.uniform(ranges.m.lo, ranges.m.hi, index, 0), rng.uniform(ranges.zeta_cl.lo, ranges.zeta_cl.hi, index, 1),
          rng.uniform(ranges.omega_cl.lo, ranges.omega_cl.hi, index, 2)};
}

RegionSample evaluate_design(const SoptdModel& model, PoleType type, const DesignSpec& spec) {
  RegionSample out;
  out.spec = spec;
  const auto gains = solve_all_sources(model, spec, type);
  for (std::size_t i = 0; i < gains.size(); ++i) {
    SourceOutcome& o = out.by_source[i];
    o.gains = gains[i];
    const auto poles = closedloop_poles(model, gains[i], 3);
    o.max_real_part = max_real_part(poles);
    o.stable = o.max_real_part < -kStabilityMargin;
  }
  return out;
}

RegionDataset sample_region(const SoptdModel& model, PoleType type, const DesignRanges& ranges, std::size_t n_samples,
                            std::uint64_t seed, std::string plant_label) {
  model.validate();
  ranges.validate();
  RegionDataset d;
  d.plant = std::move(plant_label);
  d.model = model;
  d.type = type;
  d.ranges = ranges;
  d.seed = seed;
  d.n_samples = n_samples;
  d.samples.resize(n_samples);
  parallel_for(n_samples,
               [&](std::size_t i) { d.samples[i] = evaluate_design(model, type, draw_design(ranges, seed, i)); });
  for (const RegionSample& s : d.samples)
    for (std::size_t k = 0; k < 4; ++k)
      if (s.by_source[k].stable) ++d.stable_count[k];
  return d;
}

KpSource best_expression(const std::array<std::size_t, 4>& counts) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < counts.size(); ++k)
    if (counts[k] > counts[best]) best = k;
  if (counts[best] == 0) throw no_stable_region("no stabilizing samples for any Kp expression");
  return kKpSources[best];
}

std::vector<RegionRecord> export_region(const RegionDataset& d, KpSource which, bool stable_only) {
  std::vector<RegionRecord> out;
  out.reserve(d.samples.size());
  for (const RegionSample& s : d.samples) {
    const SourceOutcome& o = s.at(which);
    if (stable_only && !o.stable) continue;
    out.push_back({s.spec.m, s.spec.zeta_cl, s.spec.omega_cl, o.gains.kp, o.gains.ki, o.gains.kd, o.stable,
                   o.max_real_part});
  }
  return out;
}

void write_region_csv(std::ostream& os, const std::vector<RegionRecord>& records) {
  os << "m,zeta_cl,omega_cl,kp,ki,kd,stable,max_real_part\n";
  for (const RegionRecord& r : records) {
    os << format_double(r.m) << ',' << format_double(r.zeta_cl) << ',' << format_double(r.omega_cl) << ','
       << format_double(r.kp) << ',' << format_double(r.ki) << ',' << format_double(r.kd) << ',' << (r.stable ? 1 : 0)
       << ',' << format_double(r.max_real_part) << '\n';
  }
}

std::vector<RegionRecord> read_region_csv(std::istream& is) {
  const CsvTable table = read_csv(is);
  const std::vector<std::string> expected{"m", "zeta_cl", "omega_cl", "kp", "ki", "kd", "stable", "max_real_part"};
  if (table.header != expected) throw invalid_input("region CSV: unexpected header");
  std::vector<RegionRecord> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    out.push_back({parse_double(row[0]), parse_double(row[1]), parse_double(row[2]), parse_double(row[3]),
                   parse_double(row[4]), parse_double(row[5]), parse_double(row[6]) != 0.0, parse_double(row[7])});
  }
  return out;
}

}  // namespace dpp
