#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace dpp {

using Complex = std::complex<double>;

/**
 * Real polynomial in the Laplace variable s.
 *
 * Coefficients are stored in ascending powers: coeffs()[k] multiplies s^k.
 * Trailing (highest power) zeros are trimmed on construction, so the zero
 * polynomial is the empty sequence and degree() is size() - 1 otherwise.
 */
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> ascending);
  Polynomial(std::initializer_list<double> ascending);

  /// Build from coefficients listed highest power first.
  static Polynomial from_descending(std::span<const double> descending);
  /// Monic real polynomial with the given roots. Complex roots must come in
  /// conjugate pairs; the imaginary residue of the expansion is dropped.
  static Polynomial from_roots(std::span<const Complex> roots);
  static Polynomial monomial(int power, double coeff = 1.0);

  const std::vector<double>& coeffs() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  /// Coefficient of s^k, zero outside the stored range.
  double operator[](int k) const noexcept;
  double leading() const noexcept { return c_.empty() ? 0.0 : c_.back(); }

  double operator()(double s) const noexcept;
  Complex operator()(Complex s) const noexcept;

  /// Sum of |c_k| |s|^k, the natural scale for residuals at s.
  double abs_scale(double s_abs) const noexcept;
  double norm2() const noexcept;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(double k);

  Polynomial derivative() const;
  /// Highest power first, with explicit power labels, e.g. "s^2 + 3*s + 2".
  std::string to_string(const std::string& var = "s") const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();
  std::vector<double> c_;
};

Polynomial operator+(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a, const Polynomial& b);
Polynomial operator*(Polynomial a, double k);
Polynomial operator*(double k, Polynomial a);
/// Exact convolution of the coefficient sequences.
Polynomial poly_mul(const Polynomial& a, const Polynomial& b);
inline Polynomial operator*(const Polynomial& a, const Polynomial& b) { return poly_mul(a, b); }
Polynomial pow(const Polynomial& p, int n);

struct DivMod {
  Polynomial quotient;
  Polynomial remainder;
};
/// Polynomial long division. Throws on a zero divisor.
DivMod divmod(const Polynomial& num, const Polynomial& den);

/// Residual bound every returned root satisfies:
/// |p(r)| <= kRootResidualBound * sum_k |c_k| |r|^k.
inline constexpr double kRootResidualBound = 1e-8;

/**
 * All degree() roots of p, with multiplicity, as eigenvalues of the
 * balanced companion matrix. Throws invalid_input for degree < 1 and
 * numeric_failure when a root misses kRootResidualBound.
 */
std::vector<Complex> roots(const Polynomial& p);

/// Groups roots that lie within `rel_tol` (relative to max(1, |r|)) of each
/// other. For display only; stability logic works on raw roots.
struct RootCluster {
  Complex center;
  int multiplicity;
};
std::vector<RootCluster> cluster_roots(std::span<const Complex> r, double rel_tol = 1e-3);

}  // namespace dpp
