#include "dpp/metrics.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "dpp/error.hpp"
#include "dpp/norms.hpp"

namespace dpp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

Complex pid_at(const PidGains& g, double w) {
  const Complex s{0.0, w};
  return g.kp + g.ki / s + g.kd * s;
}

Complex plant_at(const SoptdModel& m, double w) {
  const Complex s{0.0, w};
  const double wn = m.omega();
  return m.K * std::exp(-s * m.L) / (s * s + 2.0 * m.zeta * wn * s + wn * wn);
}

std::string describe_poles(const std::vector<Complex>& poles) {
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  for (const Complex& p : poles) {
    if (p.real() < -kStabilityMargin) continue;
    os << (first ? "" : ", ") << p.real() << (p.imag() < 0 ? "-" : "+") << std::abs(p.imag()) << "j";
    first = false;
  }
  return os.str();
}

std::vector<Complex> require_stable_loop(const SensitivitySet& set) {
  const auto poles = roots(set.Se.den());
  if (!is_stable(poles))
    throw numeric_failure("closed loop unstable at Pade order " + std::to_string(set.npade) +
                          "; offending poles: " + describe_poles(poles));
  return poles;
}

// Pade approximants put zeros near 1/L; the closed-loop poles and the plant
// corner set the rest of the interesting band.
FrequencyBand exact_band(const SoptdModel& model, const std::vector<Complex>& poles, int decay) {
  double lo = std::min(1.0 / model.T, 1.0 / model.L);
  double hi = std::max(1.0 / model.T, 1.0 / model.L);
  for (const Complex& p : poles) {
    const double a = std::abs(p);
    if (a == 0.0) continue;
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  return {1e-5 * lo, 1e4 * hi, decay};
}

double arg_factor(Complex root, double w) {
  // continuous arg(jw - root) for w > 0
  const double x = -root.real();
  const double y = w - root.imag();
  if (x > 0.0) return std::atan(y / x);
  if (x < 0.0) return std::atan(y / x) + std::numbers::pi;
  return y >= 0.0 ? std::numbers::pi / 2 : -std::numbers::pi / 2;
}

struct PhaseModel {
  std::vector<Complex> zeros;
  std::vector<Complex> poles;
  double base = 0.0;  // arg of the leading-coefficient ratio plus the 2 pi offset
  double delay = 0.0;

  double operator()(double w) const {
    double ph = base - w * delay;
    for (const Complex& z : zeros) ph += arg_factor(z, w);
    for (const Complex& p : poles) ph -= arg_factor(p, w);
    return ph;
  }
};

double solve_log(const std::function<double(double)>& f, double a, double b) {
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  const auto [lo, hi] =
      boost::math::tools::toms748_solve([&](double u) { return f(std::exp(u)); }, std::log(a), std::log(b), tol, iters);
  return std::exp(0.5 * (lo + hi));
}

}  // namespace

Complex SensitivitySet::exact_loop(double w) const { return pid_at(gains, w) * plant_at(model, w); }
Complex SensitivitySet::exact_Se(double w) const { return 1.0 / (1.0 + exact_loop(w)); }
Complex SensitivitySet::exact_T(double w) const {
  const Complex l = exact_loop(w);
  return l / (1.0 + l);
}
Complex SensitivitySet::exact_Sd(double w) const { return plant_at(model, w) / (1.0 + exact_loop(w)); }
Complex SensitivitySet::exact_Su(double w) const { return pid_at(gains, w) / (1.0 + exact_loop(w)); }

SensitivitySet sensitivity_set(const SoptdModel& model, const PidGains& gains, int npade) {
  model.validate();
  if (gains.is_zero()) throw invalid_input("sensitivity_set: controller is identically zero");
  if (npade < 1) throw invalid_input("sensitivity_set: Pade order must be at least 1");
  const RationalTF g = to_tf(model, npade);
  const RationalTF c = pid_tf(gains);
  const Polynomial dgdc = g.den() * c.den();
  const Polynomial ngnc = g.num() * c.num();
  const Polynomial cl = dgdc + ngnc;
  return SensitivitySet{RationalTF(dgdc, cl),
                        RationalTF(ngnc, cl),
                        RationalTF(g.num() * c.den(), cl),
                        RationalTF(c.num() * g.den(), cl),
                        model.L,
                        npade,
                        model,
                        gains};
}

SimulationConfig SimulationConfig::resolved(const SoptdModel& model) const {
  SimulationConfig out = *this;
  if (out.horizon <= 0.0) out.horizon = 50.0 * (model.L + model.T);
  if (out.dt <= 0.0) out.dt = std::min(model.L, model.T) / 200.0;
  return out;
}

SignalNorms step_signal_norms(const RationalTF& h, double dt, double horizon) {
  if (!(dt > 0.0) || !(horizon > 0.0)) throw invalid_input("step_signal_norms: dt and horizon must be positive");
  if (h.num().is_zero()) return {};
  const RationalTF over_s(h.num(), h.den() * Polynomial::monomial(1));
  const SampledSignal sig = simulate(realize(over_s), InputKind::Impulse, dt, horizon);
  SignalNorms out;
  out.impulse_weight = sig.impulse_weight;
  double acc = 0.0;
  for (std::size_t i = 0; i < sig.y.size(); ++i) {
    out.linf = std::max(out.linf, std::abs(sig.y[i]));
    if (i > 0) acc += 0.5 * dt * (sig.y[i - 1] * sig.y[i - 1] + sig.y[i] * sig.y[i]);
  }
  out.l2 = std::sqrt(acc);
  return out;
}

SignalNorms control_signal_norms(const SoptdModel& model, const PidGains& gains, const SimulationConfig& cfg) {
  const SimulationConfig sim = cfg.resolved(model);
  const SensitivitySet set = sensitivity_set(model, gains, sim.npade);
  require_stable_loop(set);
  return step_signal_norms(set.Su, sim.dt, sim.horizon);
}

namespace {

// Phase of loop(jw) exp(-jw delay) normalized to its principal value at
// the bottom of the band [wlo, whi] that margins() scans.
struct UnwrappedLoop {
  PhaseModel phase;
  double wlo = 0.0;
  double whi = 0.0;
};

UnwrappedLoop unwrap(const RationalTF& loop, double delay) {
  UnwrappedLoop u;
  PhaseModel& ph = u.phase;
  if (loop.num().degree() >= 1) ph.zeros = roots(loop.num());
  if (loop.den().degree() >= 1) ph.poles = roots(loop.den());
  ph.delay = delay;
  ph.base = loop.num().leading() / loop.den().leading() < 0.0 ? std::numbers::pi : 0.0;

  double lo = delay > 0.0 ? 1.0 / delay : 1.0;
  double hi = lo;
  for (const auto* v : {&ph.zeros, &ph.poles})
    for (const Complex& r : *v) {
      const double a = std::abs(r);
      if (a == 0.0) continue;
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
  u.wlo = 1e-5 * lo;
  u.whi = 1e5 * hi;
  ph.base -= 2.0 * std::numbers::pi * std::round(ph(u.wlo) / (2.0 * std::numbers::pi));
  if (ph(u.wlo) <= -std::numbers::pi) ph.base += 2.0 * std::numbers::pi;
  return u;
}

}  // namespace

double unwrapped_phase(const RationalTF& loop, double delay, double omega) {
  if (loop.num().is_zero()) throw invalid_input("unwrapped_phase: zero loop has no phase");
  return unwrap(loop, delay).phase(omega);
}

Margins margins(const RationalTF& loop, double delay) {
  if (delay < 0.0) throw invalid_input("margins: delay must be non-negative");
  if (loop.num().is_zero()) return {kInf, std::nullopt, std::nullopt, std::nullopt};
  const UnwrappedLoop u = unwrap(loop, delay);
  const PhaseModel& ph = u.phase;

  auto logmag = [&](double w) { return std::log(std::abs(loop(Complex{0.0, w}))); };
  auto level_of = [](double p) { return std::floor((p + std::numbers::pi) / (2.0 * std::numbers::pi)); };

  // Log spacing, capped so that the delay phase moves < 0.05 rad per step.
  // With a delay every -180 (mod 360) crossing past the root scales has a
  // falling |L|, so the scan can stop at 100x the largest scale.
  const double ratio = std::pow(10.0, 1.0 / 200.0);
  const double max_step = delay > 0.0 ? 0.05 / delay : kInf;
  const double wend = delay > 0.0 ? 1e-3 * u.whi : u.whi;

  Margins out;
  out.gain_margin = kInf;
  double prev_w = u.wlo;
  double prev_m = logmag(prev_w);
  double prev_p = ph(prev_w);
  while (prev_w < wend) {
    const double w = std::min(prev_w * ratio, prev_w + max_step);
    const double m = logmag(w);
    const double p = ph(w);
    if (!out.omega_gc) {
      if (m == 0.0) {
        out.omega_gc = w;
      } else if ((prev_m > 0.0) != (m > 0.0)) {
        out.omega_gc = solve_log(logmag, prev_w, w);
      }
    }
    const double la = level_of(prev_p);
    const double lb = level_of(p);
    for (double k = std::min(la, lb) + 1.0; k <= std::max(la, lb); k += 1.0) {
      const double target = 2.0 * std::numbers::pi * k - std::numbers::pi;
      const double wc = solve_log([&](double x) { return ph(x) - target; }, prev_w, w);
      const double gm = 1.0 / std::abs(loop(Complex{0.0, wc}));
      if (gm < out.gain_margin) {
        out.gain_margin = gm;
        out.omega_pc = wc;
      }
    }
    prev_w = w;
    prev_m = m;
    prev_p = p;
  }
  if (out.omega_gc) out.phase_margin_deg = 180.0 + ph(*out.omega_gc) * 180.0 / std::numbers::pi;
  return out;
}

Margins margins(const SoptdModel& model, const PidGains& gains, int freq_npade) {
  model.validate();
  if (gains.is_zero()) throw invalid_input("margins: controller is identically zero");
  if (freq_npade < 0) throw invalid_input("margins: Pade order must be non-negative");
  if (freq_npade > 0) return margins(to_tf(model, freq_npade) * pid_tf(gains), 0.0);
  return margins(to_tf(model, 0) * pid_tf(gains), model.L);
}

std::array<double, kMetricCount> PerformanceReport::values() const {
  auto fin = [](double v) { return std::isfinite(v) ? v : kNaN; };
  return {fin(j2_d), fin(jinf_d), fin(j2_u), fin(jinf_u),         fin(j2_n),
          fin(jinf_n), fin(j2_e), fin(jinf_e), fin(gm), fin(phim_deg.value_or(kNaN)), fin(omega_gc.value_or(kNaN))};
}

PerformanceReport performance_report(const SoptdModel& model, const PidGains& gains, const SimulationConfig& cfg) {
  PerformanceReport r;
  r.sim = cfg.resolved(model);
  const SensitivitySet set = sensitivity_set(model, gains, r.sim.npade);
  const auto poles = require_stable_loop(set);

  // plant on the imaginary axis: exact delay, or a Pade stand-in
  const int fn = r.sim.freq_npade;
  const std::optional<RationalTF> pade_plant = fn > 0 ? std::optional(to_tf(model, fn)) : std::nullopt;
  auto plant = [&](double w) { return pade_plant ? (*pade_plant)(Complex{0.0, w}) : plant_at(model, w); };
  auto sd_w = [&](double w) { return plant(w) / (1.0 + pid_at(gains, w) * plant(w)) / Complex{0.0, w}; };
  auto se_w = [&](double w) { return 1.0 / (1.0 + pid_at(gains, w) * plant(w)) / Complex{0.0, w}; };
  auto t = [&](double w) {
    const Complex l = pid_at(gains, w) * plant(w);
    return l / (1.0 + l);
  };

  r.j2_d = h2_norm_quadrature(sd_w, exact_band(model, poles, 3));
  r.j2_e = h2_norm_quadrature(se_w, exact_band(model, poles, 1));
  r.j2_n = h2_norm_quadrature(t, exact_band(model, poles, 1));

  const FrequencyBand peak_band{1e-4 / model.T, 1e4 / model.T, 0};
  // w -> 0 limits: Sd/s -> 1/Ki, Se/s -> 1/(Ki G(0)), T -> 1 (Ki != 0)
  const bool integral = gains.ki != 0.0;
  r.jinf_d = hinf_norm_search(sd_w, peak_band, 4000, integral ? 1.0 / gains.ki : 0.0);
  r.jinf_e = hinf_norm_search(se_w, peak_band, 4000, integral ? 1.0 / (gains.ki * model.dc_gain()) : 0.0);
  r.jinf_n = hinf_norm_search(t, peak_band, 4000, integral ? 1.0 : 0.0);

  const SignalNorms u = step_signal_norms(set.Su, r.sim.dt, r.sim.horizon);
  r.j2_u = u.l2;
  r.jinf_u = u.linf;
  r.u_impulse_weight = u.impulse_weight;

  const Margins mg = margins(model, gains, fn);
  r.gm = mg.gain_margin;
  r.phim_deg = mg.phase_margin_deg;
  r.omega_gc = mg.omega_gc;
  return r;
}

Eigen::MatrixXd correlation_matrix(const std::vector<PerformanceReport>& reports) {
  if (reports.size() < 2) throw invalid_input("correlation_matrix: need at least two reports");
  std::vector<std::array<double, kMetricCount>> v;
  v.reserve(reports.size());
  for (const auto& r : reports) v.push_back(r.values());

  const auto k = static_cast<Eigen::Index>(kMetricCount);
  Eigen::MatrixXd out(k, k);
  for (std::size_t a = 0; a < kMetricCount; ++a) {
    for (std::size_t b = a; b < kMetricCount; ++b) {
      double n = 0.0, sa = 0.0, sb = 0.0;
      for (const auto& row : v)
        if (!std::isnan(row[a]) && !std::isnan(row[b])) {
          n += 1.0;
          sa += row[a];
          sb += row[b];
        }
      double r = kNaN;
      if (n >= 2.0) {
        const double ma = sa / n;
        const double mb = sb / n;
        double caa = 0.0, cbb = 0.0, cab = 0.0;
        for (const auto& row : v)
          if (!std::isnan(row[a]) && !std::isnan(row[b])) {
            const double da = row[a] - ma;
            const double db = row[b] - mb;
            caa += da * da;
            cbb += db * db;
            cab += da * db;
          }
        if (caa > 0.0 && cbb > 0.0) r = std::clamp(cab / std::sqrt(caa * cbb), -1.0, 1.0);
      }
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = r;
      out(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = r;
    }
  }
  return out;
}

InvarianceStudy pade_invariance(const SoptdModel& model, const PidGains& gains, const std::vector<int>& orders,
                                const SimulationConfig& cfg) {
  if (orders.empty()) throw invalid_input("pade_invariance: no orders given");
  const SimulationConfig sim = cfg.resolved(model);
  InvarianceStudy study;
  study.reference_order = std::find(orders.begin(), orders.end(), 3) != orders.end() ? 3 : orders.front();

  for (int order : orders) {
    InvarianceOrder row;
    row.order = order;
    const SensitivitySet set = sensitivity_set(model, gains, order);
    row.poles = roots(set.Se.den());
    row.stable = is_stable(row.poles);

    const Complex* best_complex = nullptr;
    const Complex* best_real = nullptr;
    for (const Complex& p : row.poles) {
      if (p.imag() > 1e-9 * std::abs(p)) {
        if (!best_complex || p.real() > best_complex->real()) best_complex = &p;
      } else if (std::abs(p.imag()) <= 1e-9 * std::abs(p)) {
        if (!best_real || p.real() > best_real->real()) best_real = &p;
      }
    }
    const Complex* dom = best_complex ? best_complex : best_real;
    if (dom) {
      row.dominant = *dom;
      row.dominant_damping = std::abs(*dom) > 0.0 ? -dom->real() / std::abs(*dom) : 1.0;
    }
    if (row.stable) {
      row.setpoint = simulate(realize(set.T), InputKind::Step, sim.dt, sim.horizon);
      row.disturbance = simulate(realize(set.Sd), InputKind::Step, sim.dt, sim.horizon);
    }
    study.orders.push_back(std::move(row));
  }

  const auto ref = std::find_if(study.orders.begin(), study.orders.end(),
                                [&](const InvarianceOrder& o) { return o.order == study.reference_order; });
  auto max_dev = [](const SampledSignal& a, const SampledSignal& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < std::min(a.y.size(), b.y.size()); ++i) d = std::max(d, std::abs(a.y[i] - b.y[i]));
    return d;
  };
  for (auto& row : study.orders) {
    if (!row.stable || !ref->stable) {
      row.setpoint_deviation = row.disturbance_deviation = kNaN;
      continue;
    }
    row.setpoint_deviation = max_dev(row.setpoint, ref->setpoint);
    row.disturbance_deviation = max_dev(row.disturbance, ref->disturbance);
    if (ref->dominant_damping != 0.0)
      study.max_damping_drift = std::max(
          study.max_damping_drift, std::abs(row.dominant_damping - ref->dominant_damping) / ref->dominant_damping);
  }
  return study;
}

}  // namespace dpp
