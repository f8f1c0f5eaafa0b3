#include "dpp/pade.hpp"

#include <cmath>
#include <sstream>

#include "dpp/error.hpp"

namespace dpp {

std::vector<std::int64_t> pade_coefficients(int order) {
  if (order < 1 || order > kMaxPadeOrder) {
    std::ostringstream os;
    os << "pade order " << order << " outside [1, " << kMaxPadeOrder << "]";
    throw invalid_input(os.str());
  }
  // Start from c_r = 1 and step down with
  // c_{k-1} = c_k * k * (2r-k+1) / (r-k+1), which stays exact in int64.
  const auto r = static_cast<std::int64_t>(order);
  std::vector<std::int64_t> c(static_cast<std::size_t>(order) + 1);
  c[static_cast<std::size_t>(order)] = 1;
  for (std::int64_t k = r; k >= 1; --k)
    c[static_cast<std::size_t>(k - 1)] = c[static_cast<std::size_t>(k)] * k * (2 * r - k + 1) / (r - k + 1);
  return c;
}

RationalTF pade_tf(int order, double delay) {
  if (!(delay > 0.0)) throw invalid_input("pade_tf: delay must be positive");
  const auto c = pade_coefficients(order);
  std::vector<double> num(c.size()), den(c.size());
  double lk = 1.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    den[k] = static_cast<double>(c[k]) * lk;
    num[k] = (k % 2 == 0 ? 1.0 : -1.0) * den[k];
    lk *= delay;
  }
  return {Polynomial(std::move(num)), Polynomial(std::move(den))};
}

}  // namespace dpp
