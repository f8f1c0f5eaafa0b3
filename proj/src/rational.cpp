#include "dpp/rational.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "dpp/error.hpp"

namespace dpp {

RationalTF::RationalTF(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw invalid_input("transfer function denominator is the zero polynomial");
}

int RationalTF::relative_degree() const noexcept {
  if (num_.is_zero()) return -1 - den_.degree();
  return num_.degree() - den_.degree();
}

double RationalTF::dc_gain() const {
  if (den_[0] == 0.0) throw numeric_failure("dc_gain: pole at the origin");
  return num_[0] / den_[0];
}

RationalTF operator*(const RationalTF& a, const RationalTF& b) {
  return {a.num() * b.num(), a.den() * b.den()};
}

RationalTF operator+(const RationalTF& a, const RationalTF& b) {
  return {a.num() * b.den() + b.num() * a.den(), a.den() * b.den()};
}

RationalTF operator-(const RationalTF& a, const RationalTF& b) {
  return {a.num() * b.den() - b.num() * a.den(), a.den() * b.den()};
}

RationalTF feedback_unity(const RationalTF& forward) {
  Polynomial den = forward.den() + forward.num();
  if (den.is_zero()) throw numeric_failure("feedback_unity: degenerate loop, den + num is identically zero");
  return {forward.num(), std::move(den)};
}

Complex freq_response(const RationalTF& sys, double delay, double omega) {
  if (!(omega > 0.0)) throw invalid_input("freq_response: omega must be positive");
  if (delay < 0.0) throw invalid_input("freq_response: delay must be non-negative");
  const Complex jw(0.0, omega);
  const Complex d = sys.den()(jw);
  if (std::abs(d) <= 64.0 * std::numeric_limits<double>::epsilon() * sys.den().abs_scale(omega)) {
    std::ostringstream os;
    os << "freq_response: pole on the imaginary axis at omega = " << omega;
    throw numeric_failure(os.str());
  }
  return sys.num()(jw) / d * std::polar(1.0, -omega * delay);
}

}  // namespace dpp
