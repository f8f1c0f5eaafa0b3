#include "dpp/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "dpp/error.hpp"
#include "dpp/io.hpp"
#include "dpp/parallel.hpp"

namespace dpp {

namespace {

void write_metrics(std::ostream& os, const std::optional<PerformanceReport>& r) {
  if (r) {
    for (double v : r->values()) os << ',' << format_double(v);
  } else {
    for (std::size_t i = 0; i < kMetricCount; ++i) os << ",nan";
  }
}

void write_metric_header(std::ostream& os) {
  for (auto name : kMetricNames) os << ',' << name;
  os << '\n';
}

}  // namespace

std::size_t PerturbationStudy::unstable_count() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.stable; }));
}

bool stabilizes(const SoptdModel& model, const PidGains& gains) {
  return is_stable(closedloop_poles(model, gains, 3));
}

PerturbationStudy perturbation_sweep(const SoptdModel& model, const PidGains& gains, double pct, std::size_t n,
                                     std::uint64_t seed, const SimulationConfig& cfg, bool with_reports) {
  model.validate();
  PerturbationStudy study{model, gains, pct, seed, std::vector<PerturbationRow>(n)};
  parallel_for(n, [&](std::size_t i) {
    PerturbationRow& row = study.rows[i];
    row.model = perturb(model, pct, seed, i);
    row.stable = stabilizes(row.model, gains);
    if (row.stable && with_reports) row.report = performance_report(row.model, gains, cfg);
  });
  return study;
}

double max_allowable_perturbation(const SoptdModel& model, const PidGains& gains, double step, std::size_t n,
                                  std::uint64_t seed) {
  if (!(step > 0.0 && step < 1.0)) throw invalid_input("max_allowable_perturbation: step must lie in (0, 1)");
  model.validate();
  if (!stabilizes(model, gains)) throw no_stable_region("max_allowable_perturbation: gains do not stabilize the nominal plant");
  double best = 0.0;
  for (int k = 1; k * step < 1.0; ++k) {
    const double pct = k * step;
    const PerturbationStudy s = perturbation_sweep(model, gains, pct, n, seed, {}, false);
    if (s.unstable_count() > 0) break;
    best = pct;
  }
  return best;
}

std::string_view to_string(ParamPair p) {
  switch (p) {
    case ParamPair::LT: return "L,T";
    case ParamPair::LZeta: return "L,zeta";
    case ParamPair::TZeta: return "T,zeta";
  }
  return "?";
}

ParamPair parse_param_pair(std::string_view text) {
  if (text == "L,T" || text == "LT") return ParamPair::LT;
  if (text == "L,zeta" || text == "Lzeta") return ParamPair::LZeta;
  if (text == "T,zeta" || text == "Tzeta") return ParamPair::TZeta;
  throw invalid_input("unknown parameter pair '" + std::string(text) + "' (expected L,T | L,zeta | T,zeta)");
}

IsoGrid iso_performance_grid(const SoptdModel& model, const PidGains& gains, double pct, std::size_t n, ParamPair pair,
                             const SimulationConfig& cfg) {
  model.validate();
  if (n == 0) throw invalid_input("iso_performance_grid: grid size must be at least 1");
  if (!(pct >= 0.0 && pct < 1.0)) throw invalid_input("iso_performance_grid: pct must lie in [0, 1)");
  auto factor = [&](std::size_t i) { return n == 1 ? 1.0 : 1.0 - pct + 2.0 * pct * static_cast<double>(i) / (n - 1); };

  IsoGrid grid{pair, n, std::vector<IsoCell>(n * n)};
  parallel_for(n * n, [&](std::size_t idx) {
    const std::size_t i = idx / n;
    const std::size_t j = idx % n;
    SoptdModel m = model;
    double* p1 = pair == ParamPair::TZeta ? &m.T : &m.L;
    double* p2 = pair == ParamPair::LT ? &m.T : &m.zeta;
    *p1 *= factor(i);
    *p2 *= factor(j);
    IsoCell& cell = grid.cells[idx];
    cell.param1 = *p1;
    cell.param2 = *p2;
    cell.stable = stabilizes(m, gains);
    if (cell.stable) cell.report = performance_report(m, gains, cfg);
  });
  return grid;
}

void write_iso_grid_csv(std::ostream& os, const IsoGrid& grid) {
  os << "param1,param2,stable";
  write_metric_header(os);
  for (const IsoCell& c : grid.cells) {
    os << format_double(c.param1) << ',' << format_double(c.param2) << ',' << (c.stable ? 1 : 0);
    write_metrics(os, c.report);
    os << '\n';
  }
}

void write_perturbation_csv(std::ostream& os, const PerturbationStudy& study) {
  os << "index,L,T,zeta_ol,stable";
  write_metric_header(os);
  for (std::size_t i = 0; i < study.rows.size(); ++i) {
    const PerturbationRow& r = study.rows[i];
    os << i << ',' << format_double(r.model.L) << ',' << format_double(r.model.T) << ','
       << format_double(r.model.zeta) << ',' << (r.stable ? 1 : 0);
    write_metrics(os, r.report);
    os << '\n';
  }
}

}  // namespace dpp
