// dpptune: command-line front end of the dpp library.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "dpp/cluster.hpp"
#include "dpp/error.hpp"
#include "dpp/explorer.hpp"
#include "dpp/io.hpp"
#include "dpp/metrics.hpp"
#include "dpp/placement.hpp"
#include "dpp/plant.hpp"
#include "dpp/robustness.hpp"
#include "dpp/rules.hpp"
#include "dpp/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dpp;

namespace {

struct Options {
  std::uint64_t seed = 0;
  std::string out = ".";
  std::string format = "csv";

  std::string plant = "G5";
  std::vector<std::string> plants;  // empty = all nine
  std::string ptype = "all-real";
  std::optional<std::size_t> samples;
  std::string m_range = "1,10";
  std::string zeta_range = "1,5";
  std::string omega_range = "1,10";
  std::size_t k = 1;
  std::size_t restarts = 10;
  std::string source = "best";

  std::string gains;
  std::string gains_file;
  std::string region;
  std::string input;
  std::string column = "kp";
  std::string fit;

  double horizon = 0.0;
  double dt = 0.0;
  int npade = 3;
  int freq_pade = 0;

  std::string orders = "3,5,7,9";
  double pct = 0.4;
  std::size_t grid = 0;
  std::string pair = "L,T";
  bool max_allowable = false;
  bool stability_only = false;
  double step = 0.05;

  std::string regressand = "k_times_gain";
  bool basis_search = false;
  double l_over_t = 1.0;
  double zeta_ol = 1.0;
  double gain_k = 1.0;
};

// ---- small utilities --------------------------------------------------------

using Cell = std::variant<std::string, double, long long, bool>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

std::string cell_text(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<bool>(c) ? "1" : "0";
}

json cell_json(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(nullptr);
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<bool>(c);
}

std::string render(const Table& t, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    json arr = json::array();
    for (const auto& row : t.rows) {
      json o = json::object();
      for (std::size_t i = 0; i < t.header.size(); ++i) o[t.header[i]] = cell_json(row[i]);
      arr.push_back(std::move(o));
    }
    os << arr.dump(2) << '\n';
    return os.str();
  }
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
  return os.str();
}

fs::path out_dir(const Options& o) {
  const fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw invalid_input("output directory '" + o.out + "' cannot be created");
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw invalid_input("cannot write " + path.string());
  f << text;
  if (!f) throw invalid_input("write failed: " + path.string());
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw invalid_input("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string write_table(const Options& o, const std::string& stem, const Table& t) {
  const std::string name = stem + (o.format == "json" ? ".json" : ".csv");
  write_text(out_dir(o) / name, render(t, o.format));
  return name;
}

std::vector<std::string> split(const std::string& text, char sep = ',') {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep))
    if (!cur.empty()) parts.push_back(cur);
  return parts;
}

Interval parse_interval(const std::string& text, const char* what) {
  const auto parts = split(text);
  if (parts.size() != 2) throw invalid_input(std::string(what) + " expects lo,hi");
  return {parse_double(parts[0]), parse_double(parts[1])};
}

DesignRanges ranges_of(const Options& o) {
  DesignRanges r;
  r.m = parse_interval(o.m_range, "--m");
  r.zeta_cl = parse_interval(o.zeta_range, "--zeta-cl");
  r.omega_cl = parse_interval(o.omega_range, "--omega-cl");
  r.validate();
  return r;
}

struct NamedPlant {
  std::string label;
  SoptdModel model;
};

/// A benchmark id ("G5") or a path to a plant JSON file.
NamedPlant load_plant(const std::string& selector) {
  if (fs::is_regular_file(selector)) {
    SoptdModel m = plant_from_json(read_text(selector));
    return {fs::path(selector).stem().string(), m};
  }
  const int id = parse_benchmark_id(selector);
  return {"G" + std::to_string(id), benchmark(id)};
}

std::vector<NamedPlant> plant_list(const Options& o) {
  std::vector<NamedPlant> out;
  if (o.plants.empty()) {
    for (const auto& b : benchmarks()) out.push_back({"G" + std::to_string(b.id), b.model});
  } else {
    for (const auto& p : o.plants) out.push_back(load_plant(p));
  }
  return out;
}

std::vector<PoleType> ptype_list(const Options& o) {
  if (o.ptype == "all") return {kPoleTypes.begin(), kPoleTypes.end()};
  return {parse_pole_type(o.ptype)};
}

SimulationConfig sim_of(const Options& o) {
  SimulationConfig c;
  c.horizon = o.horizon;
  c.dt = o.dt;
  c.npade = o.npade;
  c.freq_npade = o.freq_pade;
  return c;
}

std::vector<int> parse_orders(const std::string& text) {
  std::vector<int> out;
  for (const auto& p : split(text)) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(p, &used);
      if (used != p.size()) throw std::invalid_argument(p);
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw invalid_input("bad Pade order '" + p + "'");
    }
  }
  if (out.empty()) throw invalid_input("--orders is empty");
  return out;
}

class Stopwatch {
 public:
  void lap(const std::string& stage) {
    const auto now = std::chrono::steady_clock::now();
    laps_.emplace_back(stage, std::chrono::duration<double>(now - last_).count());
    last_ = now;
  }
  void write(const Options& o) const {
    std::ostringstream os;
    double total = 0.0;
    for (const auto& [stage, sec] : laps_) {
      os << stage << " " << sec << " s\n";
      total += sec;
    }
    os << "total " << total << " s\n";
    write_text(out_dir(o) / "summary.txt", os.str());
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, double>> laps_;
};

void append_metrics(std::vector<std::string>& header) {
  for (auto n : kMetricNames) header.emplace_back(n);
}

void append_metrics(std::vector<Cell>& row, const PerformanceReport* r) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (r == nullptr) {
    for (std::size_t i = 0; i < kMetricCount; ++i) row.emplace_back(nan);
    return;
  }
  for (double v : r->values()) row.emplace_back(v);
}

struct GainsEntry {
  std::string plant;
  PoleType type;
  PidGains gains;
};

/// CSV with plant,ptype,kp,ki,kd.
std::vector<GainsEntry> read_gains_file(const std::string& path) {
  std::istringstream is(read_text(path));
  const CsvTable t = read_csv(is);
  const std::size_t cp = t.column("plant"), ct = t.column("ptype");
  const std::size_t ck = t.column("kp"), ci = t.column("ki"), cd = t.column("kd");
  std::vector<GainsEntry> out;
  for (const auto& row : t.rows)
    out.push_back({row[cp], parse_pole_type(row[ct]),
                   {parse_double(row[ck]), parse_double(row[ci]), parse_double(row[cd])}});
  return out;
}

std::size_t samples_or(const Options& o, std::size_t fallback) { return o.samples.value_or(fallback); }

// ---- commands ---------------------------------------------------------------

int cmd_bench_list(const Options& o) {
  Table t{{"id", "lag", "damping", "K", "L", "T", "zeta_ol", "l_over_t", "source"}, {}};
  for (const auto& b : benchmarks())
    t.rows.push_back({"G" + std::to_string(b.id), std::string(to_string(b.lag)), std::string(to_string(b.damping)),
                      b.model.K, b.model.L, b.model.T, b.model.zeta, b.model.L / b.model.T, std::string(b.source)});
  std::cout << render(t, o.format);
  return 0;
}

RegionDataset explore_one(const Options& o, const NamedPlant& p, PoleType type, std::size_t n) {
  return sample_region(p.model, type, ranges_of(o), n, o.seed, p.label);
}

KpSource chosen_source(const Options& o, const RegionDataset& d) {
  return o.source == "best" ? best_expression(d) : parse_kp_source(o.source);
}

int cmd_design(const Options& o) {
  const NamedPlant p = load_plant(o.plant);
  const PoleType type = parse_pole_type(o.ptype);
  const fs::path dir = out_dir(o);
  Stopwatch sw;

  const RegionDataset d = explore_one(o, p, type, samples_or(o, 100000));
  sw.lap("explore");
  const KpSource best = best_expression(d);
  {
    std::ostringstream os;
    write_region_csv(os, export_region(d, best));
    write_text(dir / "region.csv", os.str());
  }
  sw.lap("export");

  const RobustGains rg = robust_gains(d, o.restarts, o.seed);
  write_text(dir / "centroid.json", centroid_to_json(rg) + "\n");
  sw.lap("centroid");

  const PerformanceReport rep = performance_report(p.model, rg.gains, sim_of(o));
  write_text(dir / "report.json", report_to_json(rep) + "\n");
  sw.lap("metrics");
  sw.write(o);

  std::cout << p.label << " " << to_string(type) << ": " << d.count(best) << "/" << d.n_samples << " stable via "
            << to_string(best) << "; gains " << format_double(rg.gains.kp) << "," << format_double(rg.gains.ki) << ","
            << format_double(rg.gains.kd) << "\n";
  return 0;
}

int cmd_explore(const Options& o) {
  const NamedPlant p = load_plant(o.plant);
  const PoleType type = parse_pole_type(o.ptype);
  const RegionDataset d = explore_one(o, p, type, samples_or(o, 100000));
  const KpSource src = chosen_source(o, d);
  std::ostringstream os;
  write_region_csv(os, export_region(d, src));
  write_text(out_dir(o) / "region.csv", os.str());
  for (KpSource s : kKpSources) std::cout << to_string(s) << " " << d.count(s) << "\n";
  return 0;
}

int cmd_centroid(const Options& o) {
  if (o.region.empty()) throw invalid_input("centroid needs --region <region.csv>");
  const NamedPlant p = load_plant(o.plant);
  std::istringstream is(read_text(o.region));
  std::vector<Point3> pts;
  for (const auto& r : read_region_csv(is))
    if (r.stable) pts.push_back({r.kp, r.ki, r.kd});
  if (pts.empty()) throw no_stable_region("no stable records in " + o.region);

  KMeansOptions km;
  km.k = 1;
  km.restarts = o.restarts;
  km.seed = o.seed;
  const ClusterResult cr = kmeans(pts, km);
  RobustGains rg;
  rg.gains = {cr.centroids[0][0], cr.centroids[0][1], cr.centroids[0][2]};
  rg.source = o.source == "best" ? KpSource::S1 : parse_kp_source(o.source);
  rg.n_stable = pts.size();
  rg.median_distance = cr.median_distance[0];
  rg.poles = closedloop_poles(p.model, rg.gains, 3);
  if (!is_stable(rg.poles)) throw non_convex_region("centroid of " + o.region + " does not stabilize " + p.label);
  write_text(out_dir(o) / "centroid.json", centroid_to_json(rg) + "\n");
  return 0;
}

PidGains gains_of(const Options& o) {
  if (o.gains.empty()) throw invalid_input("--gains kp,ki,kd is required");
  return parse_gains(o.gains);
}

int cmd_metrics(const Options& o) {
  const NamedPlant p = load_plant(o.plant);
  const PerformanceReport rep = performance_report(p.model, gains_of(o), sim_of(o));
  const std::string text = report_to_json(rep) + "\n";
  write_text(out_dir(o) / "report.json", text);
  std::cout << text;
  return 0;
}

int cmd_simulate(const Options& o) {
  const NamedPlant p = load_plant(o.plant);
  const PidGains g = gains_of(o);
  const SimulationConfig sim = sim_of(o).resolved(p.model);
  const SensitivitySet set = sensitivity_set(p.model, g, sim.npade);
  if (!is_stable(closedloop_poles(p.model, g, sim.npade)))
    throw numeric_failure("closed loop is unstable at Pade order " + std::to_string(sim.npade));
  const SampledSignal ys = simulate(realize(set.T), InputKind::Step, sim.dt, sim.horizon);
  const SampledSignal yd = simulate(realize(set.Sd), InputKind::Step, sim.dt, sim.horizon);
  const RationalTF su_over_s(set.Su.num(), set.Su.den() * Polynomial::monomial(1));
  const SampledSignal u = simulate(realize(su_over_s), InputKind::Impulse, sim.dt, sim.horizon);
  Table t{{"t", "setpoint", "disturbance", "control"}, {}};
  for (std::size_t i = 0; i < ys.t.size(); ++i) t.rows.push_back({ys.t[i], ys.y[i], yd.y[i], u.y[i]});
  write_table(o, "response", t);
  return 0;
}

int cmd_table1(const Options& o) {
  const std::size_t n = samples_or(o, 100000);
  Stopwatch sw;
  Table t{{"plant", "ptype", "s1", "s2", "s3", "s4", "best", "max_count", "percent_volume"}, {}};
  for (const auto& p : plant_list(o)) {
    for (PoleType type : ptype_list(o)) {
      const RegionDataset d = explore_one(o, p, type, n);
      std::vector<Cell> row{p.label, std::string(to_string(type))};
      std::size_t mx = 0;
      for (KpSource s : kKpSources) {
        row.emplace_back(static_cast<long long>(d.count(s)));
        mx = std::max(mx, d.count(s));
      }
      if (mx == 0) {
        row.emplace_back(std::string("none"));
      } else {
        row.emplace_back(std::string(to_string(best_expression(d))));
      }
      row.emplace_back(static_cast<long long>(mx));
      row.emplace_back(n == 0 ? 0.0 : 100.0 * static_cast<double>(mx) / static_cast<double>(n));
      t.rows.push_back(std::move(row));
      sw.lap(p.label + "/" + std::string(to_string(type)));
    }
  }
  const std::string name = write_table(o, "table1", t);
  sw.write(o);
  std::cout << "wrote " << name << "\n";
  return 0;
}

int cmd_table2(const Options& o) {
  const std::size_t n = samples_or(o, 100000);
  Stopwatch sw;
  Table t{{"plant", "ptype", "source", "n_stable", "median_distance", "kp", "ki", "kd", "status"}, {}};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& p : plant_list(o)) {
    for (PoleType type : ptype_list(o)) {
      const RegionDataset d = explore_one(o, p, type, n);
      std::vector<Cell> row{p.label, std::string(to_string(type))};
      try {
        const RobustGains rg = robust_gains(d, o.restarts, o.seed);
        row.insert(row.end(), {std::string(to_string(rg.source)), static_cast<long long>(rg.n_stable),
                               rg.median_distance, rg.gains.kp, rg.gains.ki, rg.gains.kd, std::string("ok")});
      } catch (const Error& e) {
        const bool ncv = e.kind() == ErrorKind::NonConvexRegion;
        if (e.kind() != ErrorKind::NoStableRegion && !ncv) throw;
        row.insert(row.end(), {std::string("none"), 0LL, nan, nan, nan, nan,
                               std::string(ncv ? "non_convex_region" : "no_stable_region")});
      }
      t.rows.push_back(std::move(row));
      sw.lap(p.label + "/" + std::string(to_string(type)));
    }
  }
  const std::string name = write_table(o, "table2", t);
  sw.write(o);
  std::cout << "wrote " << name << "\n";
  return 0;
}

/// Gains for the deterministic studies: --gains for the single --plant, a
/// gains file, or else a fresh exploration per plant.
std::vector<GainsEntry> study_gains(const Options& o) {
  if (!o.gains.empty()) {
    const NamedPlant p = load_plant(o.plant);
    return {{p.label, parse_pole_type(o.ptype), parse_gains(o.gains)}};
  }
  std::vector<PoleType> types = ptype_list(o);
  if (!o.gains_file.empty()) {
    std::vector<GainsEntry> out;
    for (auto& e : read_gains_file(o.gains_file))
      if (std::find(types.begin(), types.end(), e.type) != types.end()) out.push_back(std::move(e));
    return out;
  }
  std::vector<GainsEntry> out;
  for (const auto& p : plant_list(o))
    for (PoleType type : types) {
      const RegionDataset d = explore_one(o, p, type, samples_or(o, 100000));
      out.push_back({p.label, type, robust_gains(d, o.restarts, o.seed).gains});
    }
  return out;
}

int cmd_table3(const Options& o) {
  Table t{{"plant", "ptype", "kp", "ki", "kd"}, {}};
  append_metrics(t.header);
  const SimulationConfig cfg = sim_of(o);
  for (const auto& e : study_gains(o)) {
    const PerformanceReport rep = performance_report(load_plant(e.plant).model, e.gains, cfg);
    std::vector<Cell> row{e.plant, std::string(to_string(e.type)), e.gains.kp, e.gains.ki, e.gains.kd};
    append_metrics(row, &rep);
    t.rows.push_back(std::move(row));
  }
  std::cout << "wrote " << write_table(o, "table3", t) << "\n";
  return 0;
}

std::vector<RuleSample> rule_samples(const std::vector<GainsEntry>& entries) {
  std::vector<RuleSample> out;
  for (const auto& e : entries) {
    const SoptdModel m = load_plant(e.plant).model;
    out.push_back({m.L / m.T, m.zeta, m.K, e.gains});
  }
  return out;
}

Table fit_tables(const TuningRuleFit& fit, Table& stats) {
  static constexpr std::array<const char*, 3> kNames{"kp", "ki", "kd"};
  Table coef{{"gain", "term", "coefficient", "half_width"}, {}};
  stats = Table{{"gain", "n", "rmse", "r2", "adj_r2"}, {}};
  for (std::size_t g = 0; g < 3; ++g) {
    const GainFit& f = fit.gains[g];
    for (std::size_t i = 0; i < f.basis.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      coef.rows.push_back({std::string(kNames[g]), std::string(to_string(f.basis[i])), f.coef[k], f.half_width[k]});
    }
    stats.rows.push_back({std::string(kNames[g]), static_cast<long long>(f.n), f.rmse, f.r2, f.adj_r2});
  }
  return coef;
}

int cmd_table4(const Options& o) {
  const TuningRuleFit fit =
      fit_tuning_rule(rule_samples(study_gains(o)), parse_regressand(o.regressand), o.basis_search);
  write_text(out_dir(o) / "fit.json", fit_to_json(fit) + "\n");
  Table stats;
  const Table coef = fit_tables(fit, stats);
  write_table(o, "table4_coefficients", coef);
  std::cout << "wrote " << write_table(o, "table4", stats) << "\n";
  return 0;
}

int cmd_invariance(const Options& o) {
  const NamedPlant p = load_plant(o.plant);
  const InvarianceStudy st = pade_invariance(p.model, gains_of(o), parse_orders(o.orders), sim_of(o));
  Table resp{{"order", "t", "setpoint", "disturbance"}, {}};
  Table summ{{"order", "stable", "dominant_re", "dominant_im", "damping", "setpoint_deviation",
              "disturbance_deviation"},
             {}};
  for (const auto& ord : st.orders) {
    for (std::size_t i = 0; i < ord.setpoint.t.size(); ++i)
      resp.rows.push_back({static_cast<long long>(ord.order), ord.setpoint.t[i], ord.setpoint.y[i],
                           ord.disturbance.y[i]});
    summ.rows.push_back({static_cast<long long>(ord.order), ord.stable, ord.dominant.real(), ord.dominant.imag(),
                         ord.dominant_damping, ord.setpoint_deviation, ord.disturbance_deviation});
  }
  write_table(o, "invariance_responses", resp);
  std::cout << "wrote " << write_table(o, "invariance_summary", summ) << "; reference order " << st.reference_order
            << ", max damping drift " << format_double(st.max_damping_drift) << "\n";
  return 0;
}

int cmd_perturb(const Options& o) {
  const NamedPlant p = load_plant(o.plant);
  const PidGains g = gains_of(o);
  const fs::path dir = out_dir(o);
  const std::size_t n = samples_or(o, 1000);
  const SimulationConfig cfg = sim_of(o);

  const PerturbationStudy st = perturbation_sweep(p.model, g, o.pct, n, o.seed, cfg, !o.stability_only);
  {
    std::ostringstream os;
    write_perturbation_csv(os, st);
    write_text(dir / "perturbation.csv", os.str());
  }
  Table summ{{"plant", "pct", "samples", "unstable"}, {}};
  summ.rows.push_back({p.label, o.pct, static_cast<long long>(n), static_cast<long long>(st.unstable_count())});
  if (o.max_allowable) {
    summ.header.push_back("max_allowable");
    summ.rows.back().emplace_back(max_allowable_perturbation(p.model, g, o.step, n, o.seed));
  }
  write_table(o, "perturb_summary", summ);

  if (o.grid > 0) {
    const IsoGrid grid = iso_performance_grid(p.model, g, o.pct, o.grid, parse_param_pair(o.pair), cfg);
    std::ostringstream os;
    write_iso_grid_csv(os, grid);
    write_text(dir / "iso_grid.csv", os.str());
  }
  std::cout << p.label << " pct " << format_double(o.pct) << ": " << st.unstable_count() << "/" << n << " unstable\n";
  return 0;
}

int cmd_kruskal_study(const Options& o) {
  const std::size_t n = samples_or(o, 100000);
  Table groups{{"group", "kp", "ki", "kd"}, {}};
  std::array<std::vector<std::vector<double>>, 3> by_gain;
  std::size_t empty = 0;
  for (const auto& p : plant_list(o)) {
    for (PoleType type : ptype_list(o)) {
      const RegionDataset d = explore_one(o, p, type, n);
      const std::string label = p.label + "_" + std::string(to_string(type));
      std::array<std::vector<double>, 3> vals;
      if (std::any_of(d.stable_count.begin(), d.stable_count.end(), [](std::size_t c) { return c > 0; })) {
        for (const auto& r : export_region(d, best_expression(d), true)) {
          groups.rows.push_back({label, r.kp, r.ki, r.kd});
          vals[0].push_back(r.kp);
          vals[1].push_back(r.ki);
          vals[2].push_back(r.kd);
        }
      }
      if (vals[0].empty()) {
        ++empty;
        continue;
      }
      for (std::size_t k = 0; k < 3; ++k) by_gain[k].push_back(std::move(vals[k]));
    }
  }
  write_text(out_dir(o) / "kruskal_groups.csv", render(groups, "csv"));
  Table res{{"variable", "groups", "empty_groups", "H", "df", "p_value", "p_floored"}, {}};
  static constexpr std::array<const char*, 3> kNames{"kp", "ki", "kd"};
  for (std::size_t k = 0; k < 3; ++k) {
    const KruskalResult kr = kruskal_wallis(by_gain[k]);
    res.rows.push_back({std::string(kNames[k]), static_cast<long long>(by_gain[k].size()),
                        static_cast<long long>(empty), kr.H, static_cast<long long>(kr.df), kr.p_value, kr.p_floored});
  }
  std::cout << "wrote " << write_table(o, "kruskal", res) << "\n";
  return 0;
}

int cmd_rules_fit(const Options& o) {
  std::vector<RuleSample> samples;
  if (!o.input.empty()) {
    std::istringstream is(read_text(o.input));
    const CsvTable t = read_csv(is);
    const std::size_t cx = t.column("l_over_t"), cy = t.column("zeta_ol"), ck = t.column("K");
    const std::size_t c0 = t.column("kp"), c1 = t.column("ki"), c2 = t.column("kd");
    for (const auto& r : t.rows)
      samples.push_back({parse_double(r[cx]), parse_double(r[cy]), parse_double(r[ck]),
                         {parse_double(r[c0]), parse_double(r[c1]), parse_double(r[c2])}});
  } else if (!o.gains_file.empty()) {
    samples = rule_samples(study_gains(o));
  } else {
    throw invalid_input("rules fit needs --input <samples.csv> or --gains-file <gains.csv>");
  }
  const TuningRuleFit fit = fit_tuning_rule(samples, parse_regressand(o.regressand), o.basis_search);
  const std::string text = fit_to_json(fit) + "\n";
  write_text(out_dir(o) / "fit.json", text);
  Table stats;
  fit_tables(fit, stats);
  std::cout << render(stats, o.format);
  return 0;
}

int cmd_rules_predict(const Options& o) {
  if (o.fit.empty()) throw invalid_input("rules predict needs --fit <fit.json>");
  const PidGains g = predict_gains(fit_from_json(read_text(o.fit)), o.l_over_t, o.zeta_ol, o.gain_k);
  Table t{{"l_over_t", "zeta_ol", "K", "kp", "ki", "kd"}, {}};
  t.rows.push_back({o.l_over_t, o.zeta_ol, o.gain_k, g.kp, g.ki, g.kd});
  std::cout << render(t, o.format);
  return 0;
}

int cmd_stats_kruskal(const Options& o) {
  if (o.input.empty()) throw invalid_input("stats kruskal needs --input <grouped.csv>");
  std::istringstream is(read_text(o.input));
  std::vector<std::vector<double>> groups;
  for (auto& [name, vals] : read_grouped_csv(is, o.column)) groups.push_back(std::move(vals));
  const KruskalResult kr = kruskal_wallis(groups);
  Table t{{"variable", "groups", "H", "df", "p_value", "p_floored"}, {}};
  t.rows.push_back(
      {o.column, static_cast<long long>(groups.size()), kr.H, static_cast<long long>(kr.df), kr.p_value, kr.p_floored});
  std::cout << render(t, o.format);
  return 0;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput:
    case ErrorKind::NotFound: return 2;
    case ErrorKind::NoStableRegion:
    case ErrorKind::NonConvexRegion: return 3;
    case ErrorKind::Numeric: return 4;
  }
  return 4;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Robust PID design for delayed second-order plants by dominant pole placement"};
  app.require_subcommand(1);

  app.add_option("--seed", o.seed, "RNG seed");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--format", o.format, "tabular output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--plant", o.plant, "benchmark id (G1..G9) or plant JSON file");
  app.add_option("--plants", o.plants, "plants for the table studies (default all nine)")->delimiter(',');
  app.add_option("--ptype", o.ptype, "all-complex | all-real | mixed (studies also accept all)");
  app.add_option("--samples", o.samples, "Monte Carlo samples");
  app.add_option("--m", o.m_range, "non-dominance range lo,hi");
  app.add_option("--zeta-cl", o.zeta_range, "closed-loop damping range lo,hi");
  app.add_option("--omega-cl", o.omega_range, "closed-loop frequency range lo,hi");
  app.add_option("--k", o.k, "clusters (only k = 1 is used for robust gains)");
  app.add_option("--restarts", o.restarts, "k-means restarts");
  app.add_option("--source", o.source, "Kp expression s1..s4 or best");
  app.add_option("--gains", o.gains, "kp,ki,kd");
  app.add_option("--gains-file", o.gains_file, "CSV with plant,ptype,kp,ki,kd");
  app.add_option("--region", o.region, "region CSV from explore");
  app.add_option("--input", o.input, "input CSV");
  app.add_option("--column", o.column, "value column for stats kruskal");
  app.add_option("--fit", o.fit, "fit JSON from rules fit");
  app.add_option("--horizon", o.horizon, "simulation horizon (0 = 50 (L + T))");
  app.add_option("--dt", o.dt, "simulation step (0 = min(L, T)/200)");
  app.add_option("--npade", o.npade, "Pade order of the time-domain loop");
  app.add_option("--freq-pade", o.freq_pade, "delay model of frequency metrics (0 = exact)");
  app.add_option("--orders", o.orders, "Pade orders for the invariance study");
  app.add_option("--pct", o.pct, "perturbation fraction");
  app.add_option("--grid", o.grid, "iso-performance grid size (0 = none)");
  app.add_option("--pair", o.pair, "grid parameter pair: L,T | L,zeta | T,zeta");
  app.add_flag("--max-allowable", o.max_allowable, "also search the largest all-stable pct");
  app.add_flag("--stability-only", o.stability_only, "skip the per-row performance reports");
  app.add_option("--step", o.step, "pct step of the max-allowable search");
  app.add_option("--regressand", o.regressand, "k_times_gain | gain");
  app.add_flag("--basis-search", o.basis_search, "pick each basis by adjusted R^2");
  app.add_option("--l-over-t", o.l_over_t, "L/T for rules predict");
  app.add_option("--zeta-ol", o.zeta_ol, "open-loop damping for rules predict");
  app.add_option("--K", o.gain_k, "plant gain for rules predict");

  std::function<int()> action;
  auto sub = [&](CLI::App* parent, const char* name, const char* help, std::function<int(const Options&)> fn) {
    CLI::App* s = parent->add_subcommand(name, help)->fallthrough();
    s->callback([&action, fn, &o] { action = [fn, &o] { return fn(o); }; });
    return s;
  };

  CLI::App* bench = app.add_subcommand("bench", "benchmark plants")->fallthrough()->require_subcommand(1);
  sub(bench, "list", "list the nine benchmark plants", cmd_bench_list);
  sub(&app, "design", "explore, cluster and evaluate one plant", cmd_design);
  sub(&app, "explore", "sample the design box and export the stability region", cmd_explore);
  sub(&app, "centroid", "robust gains from a region CSV", cmd_centroid);
  sub(&app, "metrics", "performance report for given gains", cmd_metrics);
  sub(&app, "simulate", "closed-loop step responses", cmd_simulate);
  CLI::App* study = app.add_subcommand("study", "table and study reproductions")->fallthrough()->require_subcommand(1);
  sub(study, "table1", "stable counts per Kp expression", cmd_table1);
  sub(study, "table2", "robust gains and median distances", cmd_table2);
  sub(study, "table3", "performance reports", cmd_table3);
  sub(study, "table4", "tuning rule fit", cmd_table4);
  sub(study, "invariance", "Pade order invariance", cmd_invariance);
  sub(study, "perturb", "parametric perturbation", cmd_perturb);
  sub(study, "kruskal", "Kruskal-Wallis over explored gains", cmd_kruskal_study);
  sub(&app, "perturb", "parametric perturbation", cmd_perturb);
  CLI::App* rules = app.add_subcommand("rules", "tuning rules")->fallthrough()->require_subcommand(1);
  sub(rules, "fit", "fit a tuning rule", cmd_rules_fit);
  sub(rules, "predict", "evaluate a tuning rule", cmd_rules_predict);
  CLI::App* stats = app.add_subcommand("stats", "statistics")->fallthrough()->require_subcommand(1);
  sub(stats, "kruskal", "Kruskal-Wallis test on a grouped CSV", cmd_stats_kruskal);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return action ? action() : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
