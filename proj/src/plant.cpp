#include "dpp/plant.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "dpp/error.hpp"
#include "dpp/pade.hpp"
#include "dpp/rng.hpp"

namespace dpp {

void SoptdModel::validate() const {
  if (!std::isfinite(K) || !std::isfinite(L) || !std::isfinite(T) || !std::isfinite(zeta))
    throw invalid_input("plant parameters must be finite");
  if (K == 0.0) throw invalid_input("plant gain K must be nonzero");
  if (!(L > 0.0)) throw invalid_input("plant delay L must be positive");
  if (!(T > 0.0)) throw invalid_input("plant lag T must be positive");
  if (!(zeta > 0.0)) throw invalid_input("plant damping zeta_ol must be positive");
}

SoptdModel SoptdModel::from_textbook(double gain, double a2, double a1, double a0, double delay) {
  if (!(a2 > 0.0) || !(a0 > 0.0)) throw invalid_input("textbook form needs a2 > 0 and a0 > 0");
  const double w2 = a0 / a2;
  const double w = std::sqrt(w2);
  SoptdModel m{gain / a2, delay, 1.0 / w, (a1 / a2) / (2.0 * w)};
  m.validate();
  return m;
}

std::string_view to_string(LagClass c) {
  switch (c) {
    case LagClass::LagDominant: return "lag-dominant";
    case LagClass::Balanced: return "balanced";
    case LagClass::DelayDominant: return "delay-dominant";
  }
  return "?";
}

std::string_view to_string(DampingClass c) {
  switch (c) {
    case DampingClass::Underdamped: return "underdamped";
    case DampingClass::CriticallyDamped: return "critically-damped";
    case DampingClass::Overdamped: return "overdamped";
  }
  return "?";
}

const std::array<BenchmarkInfo, 9>& benchmarks() {
  using L = LagClass;
  using D = DampingClass;
  // (1+10s)(1+4s) = 40s^2 + 14s + 1;  (1+s)^2 = s^2 + 2s + 1
  static const std::array<BenchmarkInfo, 9> table{{
      {1, L::LagDominant, D::Underdamped, SoptdModel::from_textbook(1, 9, 2.4, 1, 1),
       "exp(-s)/(9s^2+2.4s+1)"},
      {2, L::LagDominant, D::CriticallyDamped, SoptdModel::from_textbook(1, 1, 2, 1, 0.8),
       "exp(-0.8s)/(s^2+2s+1)"},
      {3, L::LagDominant, D::Overdamped, SoptdModel::from_textbook(1, 40, 14, 1, 2),
       "exp(-2s)/((1+10s)(1+4s))"},
      {4, L::Balanced, D::Underdamped, SoptdModel::from_textbook(0.5, 1, 1.2, 1, 1),
       "0.5exp(-s)/(s^2+1.2s+1)"},
      {5, L::Balanced, D::CriticallyDamped, SoptdModel::from_textbook(1, 1, 2, 1, 1),
       "exp(-s)/(1+s)^2"},
      {6, L::Balanced, D::Overdamped, SoptdModel::from_textbook(1, 9, 24, 1, 3),
       "exp(-3s)/(9s^2+24s+1)"},
      {7, L::DelayDominant, D::Underdamped, SoptdModel::from_textbook(1, 3.2158, 3.1614, 3.0568, 1.2755),
       "exp(-1.2755s)/(3.2158s^2+3.1614s+3.0568)"},
      {8, L::DelayDominant, D::CriticallyDamped, SoptdModel::from_textbook(1, 1, 2, 1, 10),
       "exp(-10s)/(s+1)^2"},
      {9, L::DelayDominant, D::Overdamped, SoptdModel::from_textbook(1, 0.12, 1.33, 1.24, 2),
       "exp(-2s)/(0.12s^2+1.33s+1.24)"},
  }};
  return table;
}

const BenchmarkInfo& benchmark_info(int id) {
  if (id < 1 || id > 9) {
    std::ostringstream os;
    os << "unknown benchmark id " << id << "; valid ids are G1..G9";
    throw not_found(os.str());
  }
  return benchmarks()[static_cast<std::size_t>(id - 1)];
}

int parse_benchmark_id(std::string_view text) {
  std::string_view s = text;
  if (!s.empty() && (s.front() == 'G' || s.front() == 'g')) s.remove_prefix(1);
  if (s.size() == 1 && std::isdigit(static_cast<unsigned char>(s.front())) && s.front() != '0')
    return s.front() - '0';
  std::ostringstream os;
  os << "unknown benchmark '" << text << "'; valid ids are G1, G2, G3, G4, G5, G6, G7, G8, G9";
  throw not_found(os.str());
}

RationalTF to_tf(const SoptdModel& model, int npade) {
  const double w = model.omega();
  RationalTF plant{Polynomial{model.K}, Polynomial{w * w, 2.0 * model.zeta * w, 1.0}};
  if (npade == 0) return plant;
  return plant * pade_tf(npade, model.L);
}

SoptdModel perturb(const SoptdModel& model, double pct, std::uint64_t seed, std::uint64_t index) {
  if (!(pct >= 0.0 && pct < 1.0)) throw invalid_input("perturbation fraction must lie in [0, 1)");
  if (pct == 0.0) return model;
  const CounterRng rng(seed, CounterRng::Domain::Perturbation);
  SoptdModel out = model;
  out.L *= rng.uniform(1.0 - pct, 1.0 + pct, index, 0);
  out.T *= rng.uniform(1.0 - pct, 1.0 + pct, index, 1);
  out.zeta *= rng.uniform(1.0 - pct, 1.0 + pct, index, 2);
  return out;
}

}  // namespace dpp
