#pragma once

#include <cstdint>
#include <vector>

#include "dpp/rational.hpp"

namespace dpp {

inline constexpr int kMaxPadeOrder = 12;

/// Exact integer coefficients c_k = (2r-k)! / (k! (r-k)!), k = 0..r.
std::vector<std::int64_t> pade_coefficients(int order);

/**
 * Diagonal (r, r) Pade approximant of exp(-L s):
 *   num = sum_k c_k (-L s)^k,  den = sum_k c_k (L s)^k.
 * Requires 1 <= order <= kMaxPadeOrder and delay > 0.
 */
RationalTF pade_tf(int order, double delay);

}  // namespace dpp
