#include "dpp/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <json.hpp>
#include <set>
#include <sstream>

#include "dpp/error.hpp"

namespace dpp {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw invalid_input("cannot parse number '" + std::string(text) + "'");
  return v;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw invalid_input("CSV: missing column '" + std::string(name) + "'");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw invalid_input("CSV: missing header row");
  t.header = split_line(line);
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    auto row = split_line(line);
    if (row.size() != t.header.size()) throw invalid_input("CSV: row width does not match header");
    t.rows.push_back(std::move(row));
  }
  return t;
}

SoptdModel plant_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw invalid_input(std::string("plant JSON: ") + e.what());
  }
  if (!j.is_object()) throw invalid_input("plant JSON: expected an object");
  const std::set<std::string> keys{"K", "L", "T", "zeta_ol"};
  std::set<std::string> seen;
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) throw invalid_input("plant JSON: unexpected key '" + k + "'");
    if (!v.is_number()) throw invalid_input("plant JSON: key '" + k + "' must be a number");
    seen.insert(k);
  }
  if (seen != keys) throw invalid_input("plant JSON: keys K, L, T, zeta_ol are all required");
  SoptdModel m{j["K"].get<double>(), j["L"].get<double>(), j["T"].get<double>(), j["zeta_ol"].get<double>()};
  m.validate();
  return m;
}

std::string plant_to_json(const SoptdModel& model) {
  json j;
  j["K"] = model.K;
  j["L"] = model.L;
  j["T"] = model.T;
  j["zeta_ol"] = model.zeta;
  return j.dump();
}

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json parse_object(std::string_view text, const char* what) {
  try {
    json j = json::parse(text);
    if (!j.is_object()) throw invalid_input(std::string(what) + ": expected an object");
    return j;
  } catch (const json::exception& e) {
    throw invalid_input(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string report_to_json(const PerformanceReport& r) {
  json j;
  const auto v = r.values();
  for (std::size_t i = 0; i < kMetricCount; ++i) j[std::string(kMetricNames[i])] = number_or_null(v[i]);
  j["horizon"] = r.sim.horizon;
  j["dt"] = r.sim.dt;
  j["npade"] = r.sim.npade;
  j["freq_npade"] = r.sim.freq_npade;
  j["u_impulse_weight"] = r.u_impulse_weight;
  return j.dump(2);
}

PerformanceReport report_from_json(std::string_view text) {
  const json j = parse_object(text, "report JSON");
  try {
    auto num = [&](const char* key) {
      const json& v = j.at(key);
      return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    };
    auto opt = [&](const char* key) -> std::optional<double> {
      const json& v = j.at(key);
      if (v.is_null()) return std::nullopt;
      return v.get<double>();
    };
    PerformanceReport r;
    r.j2_d = num("j2_d");
    r.jinf_d = num("jinf_d");
    r.j2_u = num("j2_u");
    r.jinf_u = num("jinf_u");
    r.j2_n = num("j2_n");
    r.jinf_n = num("jinf_n");
    r.j2_e = num("j2_e");
    r.jinf_e = num("jinf_e");
    r.gm = j.at("gm").is_null() ? std::numeric_limits<double>::infinity() : j.at("gm").get<double>();
    r.phim_deg = opt("phim_deg");
    r.omega_gc = opt("omega_gc");
    r.sim.horizon = num("horizon");
    r.sim.dt = num("dt");
    r.sim.npade = j.at("npade").get<int>();
    r.sim.freq_npade = j.value("freq_npade", 0);
    r.u_impulse_weight = num("u_impulse_weight");
    return r;
  } catch (const json::exception& e) {
    throw invalid_input(std::string("report JSON: ") + e.what());
  }
}

std::string centroid_to_json(const RobustGains& g) {
  json j;
  j["kp"] = g.gains.kp;
  j["ki"] = g.gains.ki;
  j["kd"] = g.gains.kd;
  j["kp_source"] = std::string(to_string(g.source));
  j["n_stable"] = g.n_stable;
  j["median_distance"] = number_or_null(g.median_distance);
  json poles = json::array();
  for (const Complex& p : g.poles) poles.push_back({p.real(), p.imag()});
  j["poles"] = poles;
  return j.dump(2);
}

RobustGains centroid_from_json(std::string_view text) {
  const json j = parse_object(text, "centroid JSON");
  try {
    RobustGains g;
    g.gains = {j.at("kp").get<double>(), j.at("ki").get<double>(), j.at("kd").get<double>()};
    g.source = parse_kp_source(j.at("kp_source").get<std::string>());
    g.n_stable = j.at("n_stable").get<std::size_t>();
    g.median_distance = j.at("median_distance").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                          : j.at("median_distance").get<double>();
    for (const json& p : j.at("poles")) g.poles.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    return g;
  } catch (const json::exception& e) {
    throw invalid_input(std::string("centroid JSON: ") + e.what());
  }
}

PidGains parse_gains(std::string_view text) {
  std::vector<double> v;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view part = text.substr(start, comma == std::string_view::npos ? text.size() - start : comma - start);
    v.push_back(parse_double(part));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (v.size() != 3) throw invalid_input("gains must be given as kp,ki,kd");
  return {v[0], v[1], v[2]};
}

}  // namespace dpp
