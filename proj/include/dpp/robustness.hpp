#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "dpp/metrics.hpp"

namespace dpp {

struct PerturbationRow {
  SoptdModel model;
  bool stable = false;
  std::optional<PerformanceReport> report;  // absent for unstable rows
};

struct PerturbationStudy {
  SoptdModel nominal;
  PidGains gains;
  double pct = 0.0;
  std::uint64_t seed = 0;
  std::vector<PerturbationRow> rows;

  std::size_t unstable_count() const;
};

/// Closed-loop stability of gains on a plant, Pade order 3.
bool stabilizes(const SoptdModel& model, const PidGains& gains);

/**
 * n perturbed plants (perturb(model, pct, seed, i), i = 0..n-1), each
 * checked for stability; performance reports for the stable rows unless
 * with_reports is false.
 */
PerturbationStudy perturbation_sweep(const SoptdModel& model, const PidGains& gains, double pct, std::size_t n,
                                     std::uint64_t seed, const SimulationConfig& cfg = {}, bool with_reports = true);

/// Largest pct in {step, 2 step, ...} (below 1) for which all n perturbed
/// loops are stable; 0 if the first step already fails. Throws
/// no_stable_region if the gains do not stabilize the nominal plant.
double max_allowable_perturbation(const SoptdModel& model, const PidGains& gains, double step = 0.05,
                                  std::size_t n = 1000, std::uint64_t seed = 0);

enum class ParamPair { LT, LZeta, TZeta };
std::string_view to_string(ParamPair p);
/// "L,T", "L,zeta" or "T,zeta" (also "LT", "Lzeta", "Tzeta").
ParamPair parse_param_pair(std::string_view text);

struct IsoCell {
  double param1 = 0.0;
  double param2 = 0.0;
  bool stable = false;
  std::optional<PerformanceReport> report;
};

struct IsoGrid {
  ParamPair pair = ParamPair::LT;
  std::size_t n = 0;
  std::vector<IsoCell> cells;  // row-major: param1 index outer

  const IsoCell& at(std::size_t i, std::size_t j) const { return cells[i * n + j]; }
};

/// n x n grid over [1 - pct, 1 + pct] x nominal for the chosen pair, the
/// third parameter at nominal. n = 1 gives the nominal plant alone.
IsoGrid iso_performance_grid(const SoptdModel& model, const PidGains& gains, double pct, std::size_t n, ParamPair pair,
                             const SimulationConfig& cfg = {});

/// param1,param2,stable,<metrics>; unstable or absent values print as nan.
void write_iso_grid_csv(std::ostream& os, const IsoGrid& grid);
/// index,L,T,zeta_ol,stable,<metrics>
void write_perturbation_csv(std::ostream& os, const PerturbationStudy& study);

}  // namespace dpp
