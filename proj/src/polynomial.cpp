#include "dpp/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "dpp/error.hpp"
#include "linalg.hpp"

namespace dpp {

Polynomial::Polynomial(std::vector<double> ascending) : c_(std::move(ascending)) { trim(); }

Polynomial::Polynomial(std::initializer_list<double> ascending) : c_(ascending) { trim(); }

Polynomial Polynomial::from_descending(std::span<const double> descending) {
  return Polynomial(std::vector<double>(descending.rbegin(), descending.rend()));
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots) {
  std::vector<Complex> acc{1.0};
  for (const Complex& r : roots) {
    std::vector<Complex> next(acc.size() + 1, 0.0);
    for (std::size_t k = 0; k < acc.size(); ++k) {
      next[k + 1] += acc[k];
      next[k] -= r * acc[k];
    }
    acc = std::move(next);
  }
  std::vector<double> re(acc.size());
  std::transform(acc.begin(), acc.end(), re.begin(), [](Complex z) { return z.real(); });
  return Polynomial(std::move(re));
}

Polynomial Polynomial::monomial(int power, double coeff) {
  if (power < 0) throw invalid_input("monomial power must be >= 0");
  std::vector<double> c(static_cast<std::size_t>(power) + 1, 0.0);
  c.back() = coeff;
  return Polynomial(std::move(c));
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

double Polynomial::operator[](int k) const noexcept {
  if (k < 0 || k >= static_cast<int>(c_.size())) return 0.0;
  return c_[static_cast<std::size_t>(k)];
}

double Polynomial::operator()(double s) const noexcept {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Complex Polynomial::operator()(Complex s) const noexcept {
  Complex acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

double Polynomial::abs_scale(double s_abs) const noexcept {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s_abs + std::abs(*it);
  return acc;
}

double Polynomial::norm2() const noexcept {
  double acc = 0.0;
  for (double v : c_) acc += v * v;
  return std::sqrt(acc);
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (double& v : r.c_) v = -v;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (rhs.c_.size() > c_.size()) c_.resize(rhs.c_.size(), 0.0);
  for (std::size_t k = 0; k < rhs.c_.size(); ++k) c_[k] += rhs.c_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  if (rhs.c_.size() > c_.size()) c_.resize(rhs.c_.size(), 0.0);
  for (std::size_t k = 0; k < rhs.c_.size(); ++k) c_[k] -= rhs.c_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(double k) {
  for (double& v : c_) v *= k;
  trim();
  return *this;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<double> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Polynomial(std::move(d));
}

std::string Polynomial::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    double v = c_[static_cast<std::size_t>(k)];
    if (v == 0.0) continue;
    if (first) {
      if (v < 0) os << "-";
    } else {
      os << (v < 0 ? " - " : " + ");
    }
    double a = std::abs(v);
    if (k == 0 || a != 1.0) {
      os << a;
      if (k > 0) os << "*";
    }
    if (k == 1) os << var;
    if (k > 1) os << var << "^" << k;
    first = false;
  }
  return os.str();
}

Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
Polynomial operator*(Polynomial a, double k) { return a *= k; }
Polynomial operator*(double k, Polynomial a) { return a *= k; }

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  std::vector<double> r(x.size() + y.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
  return Polynomial(std::move(r));
}

Polynomial pow(const Polynomial& p, int n) {
  if (n < 0) throw invalid_input("negative polynomial power");
  Polynomial r{1.0};
  for (int i = 0; i < n; ++i) r = poly_mul(r, p);
  return r;
}

DivMod divmod(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw invalid_input("polynomial division by zero");
  if (num.degree() < den.degree()) return {Polynomial{}, num};
  std::vector<double> rem = num.coeffs();
  const auto& d = den.coeffs();
  const int nd = den.degree();
  std::vector<double> q(static_cast<std::size_t>(num.degree() - nd) + 1, 0.0);
  for (int k = num.degree() - nd; k >= 0; --k) {
    double f = rem[static_cast<std::size_t>(k + nd)] / d.back();
    q[static_cast<std::size_t>(k)] = f;
    for (int j = 0; j <= nd; ++j) rem[static_cast<std::size_t>(k + j)] -= f * d[static_cast<std::size_t>(j)];
    rem[static_cast<std::size_t>(k + nd)] = 0.0;
  }
  rem.resize(static_cast<std::size_t>(nd));
  return {Polynomial(std::move(q)), Polynomial(std::move(rem))};
}

std::vector<Complex> roots(const Polynomial& p) {
  if (p.degree() < 1) throw invalid_input("roots: polynomial must have degree >= 1");
  const auto& c = p.coeffs();

  // Exact zeros at the origin come off first.
  std::size_t zeros = 0;
  while (c[zeros] == 0.0) ++zeros;
  std::vector<Complex> out(zeros, Complex(0.0, 0.0));
  const int n = p.degree() - static_cast<int>(zeros);
  if (n == 0) return out;

  const double lead = c.back();
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) comp(0, k) = -c[zeros + static_cast<std::size_t>(n - 1 - k)] / lead;
  for (int k = 1; k < n; ++k) comp(k, k - 1) = 1.0;
  balance(comp, nullptr);

  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw numeric_failure("roots: eigenvalue iteration did not converge");
  const auto& ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    Complex r = ev(i);
    double scale = p.abs_scale(std::abs(r));
    double resid = std::abs(p(r));
    if (resid > kRootResidualBound * scale) {
      std::ostringstream os;
      os << "roots: residual " << resid / scale << " exceeds bound at root " << r;
      throw numeric_failure(os.str());
    }
    out.push_back(r);
  }
  return out;
}

std::vector<RootCluster> cluster_roots(std::span<const Complex> r, double rel_tol) {
  std::vector<RootCluster> out;
  std::vector<bool> used(r.size(), false);
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (used[i]) continue;
    Complex sum = r[i];
    int mult = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < r.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(r[j] - r[i]) <= rel_tol * std::max(1.0, std::abs(r[i]))) {
        used[j] = true;
        sum += r[j];
        ++mult;
      }
    }
    out.push_back({sum / static_cast<double>(mult), mult});
  }
  return out;
}

}  // namespace dpp
