#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "knotforge/errors.hpp"

namespace knotforge {

using Integer = boost::multiprecision::cpp_int;

/// Integer polynomial in t and 1/t.
///
/// Stored densely from the lowest nonzero degree up to the highest; both ends are nonzero,
/// and the zero polynomial has no coefficients at all.
class LaurentPolynomial {
 public:
  LaurentPolynomial() = default;
  LaurentPolynomial(long long constant) : coeffs_{Integer(constant)} { trim(); }  // NOLINT(implicit)

  static LaurentPolynomial monomial(Integer c, int degree) {
    LaurentPolynomial p;
    p.low_ = degree;
    p.coeffs_.push_back(std::move(c));
    p.trim();
    return p;
  }

  /// coeffs[k] is the coefficient of t^(low + k).
  static LaurentPolynomial from_coefficients(int low, std::vector<Integer> coeffs) {
    LaurentPolynomial p;
    p.low_ = low;
    p.coeffs_ = std::move(coeffs);
    p.trim();
    return p;
  }

  static LaurentPolynomial t() { return monomial(1, 1); }

  bool is_zero() const { return coeffs_.empty(); }
  int min_degree() const { return low_; }
  int max_degree() const { return low_ + static_cast<int>(coeffs_.size()) - 1; }

  Integer coefficient(int degree) const {
    if (is_zero() || degree < low_ || degree > max_degree()) return 0;
    return coeffs_[static_cast<std::size_t>(degree - low_)];
  }

  /// Coefficients from min_degree() to max_degree().
  const std::vector<Integer>& coefficients() const { return coeffs_; }

  /// Nonzero terms keyed by degree.
  std::map<int, Integer> terms() const {
    std::map<int, Integer> m;
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
      if (coeffs_[k] != 0) m.emplace(low_ + static_cast<int>(k), coeffs_[k]);
    return m;
  }

  Integer at_one() const {
    Integer sum = 0;
    for (const Integer& c : coeffs_) sum += c;
    return sum;
  }

  /// Multiplied by +-t^k so that the lowest degree is 0 and the constant term is positive.
  LaurentPolynomial normalized() const {
    if (is_zero()) return *this;
    LaurentPolynomial p = *this;
    p.low_ = 0;
    if (p.coeffs_.front() < 0)
      for (Integer& c : p.coeffs_) c = -c;
    return p;
  }

  bool is_palindromic() const {
    for (std::size_t i = 0, j = coeffs_.size(); i < j--; ++i)
      if (coeffs_[i] != coeffs_[j]) return false;
    return true;
  }

  LaurentPolynomial operator-() const {
    LaurentPolynomial p = *this;
    for (Integer& c : p.coeffs_) c = -c;
    return p;
  }

  friend LaurentPolynomial operator+(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const int low = std::min(a.low_, b.low_);
    const int high = std::max(a.max_degree(), b.max_degree());
    std::vector<Integer> c(static_cast<std::size_t>(high - low + 1));
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k + static_cast<std::size_t>(a.low_ - low)] += a.coeffs_[k];
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k + static_cast<std::size_t>(b.low_ - low)] += b.coeffs_[k];
    return from_coefficients(low, std::move(c));
  }

  friend LaurentPolynomial operator-(const LaurentPolynomial& a, const LaurentPolynomial& b) { return a + (-b); }

  friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Integer> c(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return from_coefficients(a.low_ + b.low_, std::move(c));
  }

  LaurentPolynomial& operator+=(const LaurentPolynomial& o) { return *this = *this + o; }
  LaurentPolynomial& operator-=(const LaurentPolynomial& o) { return *this = *this - o; }
  LaurentPolynomial& operator*=(const LaurentPolynomial& o) { return *this = *this * o; }

  /// Division that must leave no remainder; throws otherwise. Units t^k divide freely.
  friend LaurentPolynomial exact_divide(const LaurentPolynomial& num, const LaurentPolynomial& den) {
    if (den.is_zero()) throw Error("division by the zero polynomial");
    if (num.is_zero()) return {};
    std::vector<Integer> rem = num.coeffs_;
    const std::size_t dn = den.coeffs_.size();
    if (rem.size() < dn) throw Error("inexact polynomial division");
    std::vector<Integer> q(rem.size() - dn + 1);
    const Integer& lead = den.coeffs_.back();
    for (std::size_t k = q.size(); k-- > 0;) {
      Integer& top = rem[k + dn - 1];
      if (top == 0) continue;
      Integer r;
      boost::multiprecision::divide_qr(top, lead, q[k], r);
      if (r != 0) throw Error("inexact polynomial division");
      for (std::size_t j = 0; j < dn; ++j) rem[k + j] -= q[k] * den.coeffs_[j];
    }
    for (const Integer& r : rem)
      if (r != 0) throw Error("inexact polynomial division");
    return from_coefficients(num.low_ - den.low_, std::move(q));
  }

  bool operator==(const LaurentPolynomial& o) const { return low_ == o.low_ && coeffs_ == o.coeffs_; }

  /// Human-readable form, e.g. "1 - t + t^2" or "-t^-1 + 3 - t".
  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      Integer c = coeffs_[k];
      if (c == 0) continue;
      const int d = low_ + static_cast<int>(k);
      const bool neg = c < 0;
      if (neg) c = -c;
      if (first) os << (neg ? "-" : "");
      else os << (neg ? " - " : " + ");
      first = false;
      if (d == 0) {
        os << c;
        continue;
      }
      if (c != 1) os << c;
      os << "t";
      if (d != 1) os << "^" << d;
    }
    return os.str();
  }

 private:
  void trim() {
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
    if (lead == coeffs_.size()) {
      coeffs_.clear();
      low_ = 0;
      return;
    }
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
    low_ += static_cast<int>(lead);
    while (coeffs_.back() == 0) coeffs_.pop_back();
  }

  int low_ = 0;
  std::vector<Integer> coeffs_;
};

using LaurentMatrix = std::vector<std::vector<LaurentPolynomial>>;

/// Determinant by fraction-free (Bareiss) elimination with row pivoting. The empty matrix has
/// determinant 1.
inline LaurentPolynomial determinant(LaurentMatrix m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  LaurentPolynomial prev_pivot = 1;
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < n && m[r][k].is_zero()) ++r;
      if (r == n) return {};
      std::swap(m[k], m[r]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        LaurentPolynomial v = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        m[i][j] = exact_divide(v, prev_pivot);
      }
      m[i][k] = {};
    }
    prev_pivot = m[k][k];
  }
  return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

}  // namespace knotforge
