#include "dpp/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dpp/error.hpp"
#include "dpp/pade.hpp"

namespace dpp {

void DesignSpec::validate() const {
  if (!(m >= 1.0)) throw invalid_input("design spec: m must be >= 1");
  if (!(zeta_cl > 0.0)) throw invalid_input("design spec: zeta_cl must be positive");
  if (!(omega_cl > 0.0)) throw invalid_input("design spec: omega_cl must be positive");
}

std::string_view to_string(PoleType t) {
  switch (t) {
    case PoleType::AllComplex: return "all-complex";
    case PoleType::AllReal: return "all-real";
    case PoleType::Mixed: return "mixed";
  }
  return "?";
}

std::string_view to_string(KpSource s) {
  switch (s) {
    case KpSource::S1: return "s1";
    case KpSource::S2: return "s2";
    case KpSource::S3: return "s3";
    case KpSource::S4: return "s4";
  }
  return "?";
}

PoleType parse_pole_type(std::string_view text) {
  if (text == "all-complex" || text == "complex") return PoleType::AllComplex;
  if (text == "all-real" || text == "real") return PoleType::AllReal;
  if (text == "mixed" || text == "two-complex-two-real") return PoleType::Mixed;
  std::ostringstream os;
  os << "unknown pole type '" << text << "'; expected all-complex, all-real or mixed";
  throw invalid_input(os.str());
}

KpSource parse_kp_source(std::string_view text) {
  for (KpSource s : kKpSources)
    if (text == to_string(s) || (text.size() == 2 && text[0] == 'S' && text.substr(1) == to_string(s).substr(1)))
      return s;
  std::ostringstream os;
  os << "unknown Kp source '" << text << "'; expected s1, s2, s3 or s4";
  throw invalid_input(os.str());
}

RationalTF pid_tf(const PidGains& g) { return {Polynomial{g.ki, g.kp, g.kd}, Polynomial{0.0, 1.0}}; }

Polynomial desired_charpoly(const DesignSpec& spec, PoleType type) {
  spec.validate();
  const double z = spec.zeta_cl;
  const double w = spec.omega_cl;
  const double m = spec.m;
  const Polynomial dominant{w * w, 2.0 * z * w, 1.0};
  const Polynomial complex_pair{m * m * w * w, 2.0 * m * z * w, 1.0};
  const Polynomial real_root{m * z * w, 1.0};
  switch (type) {
    case PoleType::AllComplex: return dominant * pow(complex_pair, 2);
    case PoleType::AllReal: return dominant * pow(real_root, 4);
    case PoleType::Mixed: return dominant * complex_pair * pow(real_root, 2);
  }
  throw invalid_input("unknown pole type");
}

namespace {

// Pieces of the Pade-3 characteristic polynomial, which is affine in the gains:
//   P(s) = base(s) + Ki*a(s) + Kp*s*a(s) + Kd*s^2*a(s),  a = K*Np.
struct LoopPieces {
  Polynomial base;
  Polynomial a;
};

LoopPieces loop_pieces(const SoptdModel& model) {
  const double w = model.omega();
  const RationalTF pade = pade_tf(3, model.L);
  const Polynomial plant_den{w * w, 2.0 * model.zeta * w, 1.0};
  return {Polynomial{0.0, 1.0} * plant_den * pade.den(), model.K * pade.num()};
}

}  // namespace

Polynomial openloop_charpoly(const SoptdModel& model, const PidGains& gains) {
  const LoopPieces p = loop_pieces(model);
  Polynomial full = p.base + p.a * Polynomial{gains.ki, gains.kp, gains.kd};
  return full * (1.0 / full.leading());
}

std::array<PidGains, 4> solve_all_sources(const SoptdModel& model, const DesignSpec& spec, PoleType type) {
  if (model.K == 0.0 || !std::isfinite(model.K)) throw invalid_input("solve_gains: invalid model, K must be nonzero");
  if (!(model.L > 0.0)) throw invalid_input("solve_gains: invalid model, L must be positive");
  const LoopPieces p = loop_pieces(model);
  const Polynomial desired = desired_charpoly(spec, type);
  const double lead = p.base.leading();
  const auto& a = p.a;

  // Row j:  base_j + Ki a_j + Kp a_{j-1} + Kd a_{j-2} = lead * desired_j
  const double ki = (lead * desired[0] - p.base[0]) / a[0];
  const double kd = (lead * desired[5] - p.base[5] - ki * a[5]) / a[3];
  std::array<PidGains, 4> out{};
  for (KpSource src : kKpSources) {
    const int k = power_of(src);
    const double kp = (lead * desired[k] - p.base[k] - ki * a[k] - kd * a[k - 2]) / a[k - 1];
    out[static_cast<std::size_t>(k - 1)] = {kp, ki, kd};
  }
  return out;
}

PidGains solve_gains(const SoptdModel& model, const DesignSpec& spec, PoleType type, KpSource src) {
  return solve_all_sources(model, spec, type)[static_cast<std::size_t>(power_of(src) - 1)];
}

std::vector<Complex> closedloop_poles(const SoptdModel& model, const PidGains& gains, int npade) {
  if (npade < 1) throw invalid_input("closedloop_poles: npade must be >= 1");
  if (gains.is_zero()) throw invalid_input("closedloop_poles: invalid gains, the controller is identically zero");
  const RationalTF loop = feedback_unity(to_tf(model, npade) * pid_tf(gains));
  return roots(loop.den());
}

double max_real_part(const std::vector<Complex>& poles) {
  if (poles.empty()) throw invalid_input("max_real_part: empty pole list");
  double m = -std::numeric_limits<double>::infinity();
  for (const Complex& p : poles) m = std::max(m, p.real());
  return m;
}

bool is_stable(const std::vector<Complex>& poles) { return max_real_part(poles) < -kStabilityMargin; }

}  // namespace dpp
