#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "dpp/rational.hpp"

namespace dpp {

/**
 * Second-order-plus-time-delay plant
 *
 *   G(s) = K exp(-L s) / (s^2 + 2 zeta w s + w^2),  w = 1/T.
 *
 * Held in the monic-denominator form; DC gain is K T^2.
 */
struct SoptdModel {
  double K = 1.0;
  double L = 1.0;
  double T = 1.0;
  double zeta = 1.0;

  double omega() const noexcept { return 1.0 / T; }
  double dc_gain() const noexcept { return K * T * T; }
  /// Throws invalid_input unless L > 0, T > 0, zeta > 0, K != 0 (all finite).
  void validate() const;

  /**
   * Normalizes the textbook form  gain * exp(-L s) / (a2 s^2 + a1 s + a0)
   * with a2, a0 > 0 into the monic form.
   */
  static SoptdModel from_textbook(double gain, double a2, double a1, double a0, double delay);

  friend bool operator==(const SoptdModel&, const SoptdModel&) = default;
};

enum class LagClass { LagDominant, Balanced, DelayDominant };
enum class DampingClass { Underdamped, CriticallyDamped, Overdamped };

std::string_view to_string(LagClass c);
std::string_view to_string(DampingClass c);

struct BenchmarkInfo {
  int id;  // 1..9
  LagClass lag;
  DampingClass damping;
  SoptdModel model;
  std::string_view source;  // textbook transfer function as printed
};

/// The nine benchmark plants, ids 1..9.
const std::array<BenchmarkInfo, 9>& benchmarks();
/// Throws not_found for ids outside 1..9.
const BenchmarkInfo& benchmark_info(int id);
inline SoptdModel benchmark(int id) { return benchmark_info(id).model; }
/// Accepts "G5", "g5" or "5". Throws not_found naming the valid ids.
int parse_benchmark_id(std::string_view text);

/// K / (s^2 + 2 zeta w s + w^2), times pade_tf(npade, L) when npade > 0.
RationalTF to_tf(const SoptdModel& model, int npade);

/// L, T and zeta each scaled by an independent factor uniform in
/// [1 - pct, 1 + pct], drawn from CounterRng(seed, Perturbation) at
/// stream `index`, counters 0, 1, 2. K is left unchanged.
SoptdModel perturb(const SoptdModel& model, double pct, std::uint64_t seed, std::uint64_t index);

}  // namespace dpp
