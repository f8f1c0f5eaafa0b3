#include "dpp/rules.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <json.hpp>
#include <limits>

#include "dpp/error.hpp"

namespace dpp {

using nlohmann::json;

std::string_view to_string(BasisTerm t) {
  switch (t) {
    case BasisTerm::One: return "p00";
    case BasisTerm::X: return "p10";
    case BasisTerm::Y: return "p01";
    case BasisTerm::X2: return "p20";
    case BasisTerm::XY: return "p11";
    case BasisTerm::Y2: return "p02";
  }
  return "?";
}

BasisTerm parse_basis_term(std::string_view label) {
  for (BasisTerm t : kAllTerms)
    if (to_string(t) == label) return t;
  throw invalid_input("unknown basis term '" + std::string(label) + "'");
}

double evaluate_term(BasisTerm t, double x, double y) {
  switch (t) {
    case BasisTerm::One: return 1.0;
    case BasisTerm::X: return x;
    case BasisTerm::Y: return y;
    case BasisTerm::X2: return x * x;
    case BasisTerm::XY: return x * y;
    case BasisTerm::Y2: return y * y;
  }
  return 0.0;
}

std::vector<BasisTerm> default_basis(int gain_index) {
  if (gain_index == 0) return {kAllTerms.begin(), kAllTerms.end()};
  return {BasisTerm::One, BasisTerm::X, BasisTerm::Y, BasisTerm::X2, BasisTerm::XY};
}

std::string_view to_string(Regressand r) { return r == Regressand::Gain ? "gain" : "k_times_gain"; }

Regressand parse_regressand(std::string_view text) {
  if (text == "gain") return Regressand::Gain;
  if (text == "k_times_gain" || text == "k-times-gain") return Regressand::GainTimesK;
  throw invalid_input("unknown regressand '" + std::string(text) + "' (expected gain | k_times_gain)");
}

double GainFit::predict(double x, double y) const {
  double v = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) v += coef[static_cast<Eigen::Index>(i)] * evaluate_term(basis[i], x, y);
  return v;
}

namespace {

double gain_value(const PidGains& g, int index) { return index == 0 ? g.kp : index == 1 ? g.ki : g.kd; }

}  // namespace

GainFit fit_gain(const std::vector<RuleSample>& samples, int gain_index, const std::vector<BasisTerm>& basis,
                 Regressand regressand) {
  if (gain_index < 0 || gain_index > 2) throw invalid_input("fit_gain: gain index must be 0, 1 or 2");
  const auto n = static_cast<Eigen::Index>(samples.size());
  const auto p = static_cast<Eigen::Index>(basis.size());
  if (p == 0) throw invalid_input("fit_gain: empty basis");
  if (n <= p)
    throw invalid_input("fit_gain: " + std::to_string(n) + " samples cannot fit " + std::to_string(p) +
                        " terms with a residual degree of freedom");

  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const RuleSample& s = samples[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = evaluate_term(basis[static_cast<std::size_t>(j)], s.l_over_t, s.zeta_ol);
    const double g = gain_value(s.gains, gain_index);
    y[i] = regressand == Regressand::GainTimesK ? s.K * g : g;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    std::string cols;
    for (Eigen::Index k = qr.rank(); k < p; ++k) {
      if (!cols.empty()) cols += ", ";
      cols += to_string(basis[static_cast<std::size_t>(qr.colsPermutation().indices()[k])]);
    }
    throw invalid_input("fit_gain: collinear design matrix; dependent columns: " + cols);
  }

  GainFit fit;
  fit.basis = basis;
  fit.n = samples.size();
  fit.coef = qr.solve(y);
  const Eigen::VectorXd resid = y - x * fit.coef;
  const double sse = resid.squaredNorm();
  const double sst = (y.array() - y.mean()).square().sum();
  const double dof = static_cast<double>(n - p);
  fit.rmse = std::sqrt(sse / dof);
  fit.r2 = sst > 0.0 ? 1.0 - sse / sst : (sse == 0.0 ? 1.0 : 0.0);
  fit.adj_r2 = 1.0 - (1.0 - fit.r2) * static_cast<double>(n - 1) / dof;

  // (X^T X)^-1 = P R^-1 R^-T P^T
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd rinv = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::VectorXd var_perm = (rinv * rinv.transpose()).diagonal();
  const boost::math::students_t dist(dof);
  const double tq = boost::math::quantile(boost::math::complement(dist, 0.025));
  const double s2 = sse / dof;
  fit.half_width.resize(p);
  for (Eigen::Index k = 0; k < p; ++k)
    fit.half_width[qr.colsPermutation().indices()[k]] = tq * std::sqrt(s2 * var_perm[k]);
  return fit;
}

GainFit search_basis(const std::vector<RuleSample>& samples, int gain_index, Regressand regressand) {
  GainFit best;
  bool have = false;
  // bit k of mask selects kAllTerms[k + 1]; p00 is always present
  for (unsigned mask = 0; mask < 32; ++mask) {
    std::vector<BasisTerm> basis{BasisTerm::One};
    for (unsigned k = 0; k < 5; ++k)
      if (mask & (1u << k)) basis.push_back(kAllTerms[k + 1]);
    if (basis.size() >= samples.size()) continue;
    GainFit f;
    try {
      f = fit_gain(samples, gain_index, basis, regressand);
    } catch (const Error&) {
      continue;
    }
    if (!have || f.adj_r2 > best.adj_r2 + 1e-12 ||
        (std::abs(f.adj_r2 - best.adj_r2) <= 1e-12 && f.basis.size() < best.basis.size())) {
      best = std::move(f);
      have = true;
    }
  }
  if (!have) throw invalid_input("search_basis: no basis could be fitted");
  return best;
}

TuningRuleFit fit_tuning_rule(const std::vector<RuleSample>& samples, Regressand regressand, bool basis_search) {
  TuningRuleFit out;
  out.regressand = regressand;
  for (int g = 0; g < 3; ++g)
    out.gains[static_cast<std::size_t>(g)] =
        basis_search ? search_basis(samples, g, regressand) : fit_gain(samples, g, default_basis(g), regressand);
  return out;
}

PidGains predict_gains(const TuningRuleFit& fit, double l_over_t, double zeta_ol, double K) {
  double scale = 1.0;
  if (fit.regressand == Regressand::GainTimesK) {
    if (K == 0.0) throw invalid_input("predict_gains: K must be nonzero");
    scale = 1.0 / K;
  }
  return {fit.gains[0].predict(l_over_t, zeta_ol) * scale, fit.gains[1].predict(l_over_t, zeta_ol) * scale,
          fit.gains[2].predict(l_over_t, zeta_ol) * scale};
}

namespace {

constexpr std::array<const char*, 3> kGainKeys{"kp", "ki", "kd"};

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

std::string fit_to_json(const TuningRuleFit& fit) {
  json j;
  j["regressand"] = std::string(to_string(fit.regressand));
  for (std::size_t g = 0; g < 3; ++g) {
    const GainFit& f = fit.gains[g];
    json terms = json::array();
    for (std::size_t i = 0; i < f.basis.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      terms.push_back({{"term", std::string(to_string(f.basis[i]))},
                       {"coefficient", f.coef[k]},
                       {"half_width", number_or_null(f.half_width[k])}});
    }
    j[kGainKeys[g]] = {{"terms", terms},
                       {"rmse", number_or_null(f.rmse)},
                       {"r2", number_or_null(f.r2)},
                       {"adj_r2", number_or_null(f.adj_r2)},
                       {"n", f.n}};
  }
  return j.dump(2);
}

TuningRuleFit fit_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    TuningRuleFit fit;
    fit.regressand = parse_regressand(j.at("regressand").get<std::string>());
    for (std::size_t g = 0; g < 3; ++g) {
      const json& jg = j.at(kGainKeys[g]);
      GainFit& f = fit.gains[g];
      const json& terms = jg.at("terms");
      const auto p = static_cast<Eigen::Index>(terms.size());
      f.coef.resize(p);
      f.half_width.resize(p);
      for (Eigen::Index k = 0; k < p; ++k) {
        const json& t = terms[static_cast<std::size_t>(k)];
        f.basis.push_back(parse_basis_term(t.at("term").get<std::string>()));
        f.coef[k] = t.at("coefficient").get<double>();
        f.half_width[k] = number_from(t.at("half_width"));
      }
      f.rmse = number_from(jg.at("rmse"));
      f.r2 = number_from(jg.at("r2"));
      f.adj_r2 = number_from(jg.at("adj_r2"));
      f.n = jg.at("n").get<std::size_t>();
    }
    return fit;
  } catch (const json::exception& e) {
    throw invalid_input(std::string("tuning rule JSON: ") + e.what());
  }
}

}  // namespace dpp
