#pragma once

#include "dpp/polynomial.hpp"

namespace dpp {

/// num(s)/den(s), kept unreduced. No operation here cancels common factors.
class RationalTF {
 public:
  RationalTF(Polynomial num, Polynomial den);
  static RationalTF constant(double k) { return {Polynomial{k}, Polynomial{1.0}}; }

  const Polynomial& num() const noexcept { return num_; }
  const Polynomial& den() const noexcept { return den_; }

  /// deg(num) - deg(den); the zero numerator counts as strictly proper.
  int relative_degree() const noexcept;
  bool is_proper() const noexcept { return num_.is_zero() || num_.degree() <= den_.degree(); }
  bool is_strictly_proper() const noexcept { return num_.is_zero() || num_.degree() < den_.degree(); }

  Complex operator()(Complex s) const { return num_(s) / den_(s); }
  /// Value at s = 0 (throws on a pole at the origin).
  double dc_gain() const;

 private:
  Polynomial num_;
  Polynomial den_;
};

RationalTF operator*(const RationalTF& a, const RationalTF& b);
RationalTF operator+(const RationalTF& a, const RationalTF& b);
RationalTF operator-(const RationalTF& a, const RationalTF& b);

/// forward / (1 + forward) = num / (den + num). Throws on den + num == 0.
RationalTF feedback_unity(const RationalTF& forward);

/// num(jw)/den(jw) * exp(-j w delay), the delay applied exactly.
/// Throws when jw sits on a pole (|den(jw)| at rounding level).
Complex freq_response(const RationalTF& sys, double delay, double omega);

}  // namespace dpp
