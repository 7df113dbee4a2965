#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "lapgraph/errors.hpp"
#include "lapgraph/rational.hpp"

namespace lapgraph {

/// Truncated formal power series with exact rational coefficients.
///
/// Holds the coefficients of x^0 .. x^order. Every operation states the order
/// of its result explicitly; nothing is ever extended past what was supplied.
class PowerSeries {
 public:
  /// The zero series of the given order.
  explicit PowerSeries(int order) : coeffs_(checked_size(order)) {}

  explicit PowerSeries(std::vector<BigRational> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw ValidationError("a power series needs at least one coefficient");
  }

  static PowerSeries constant(const BigRational& c, int order) {
    PowerSeries s(order);
    s.coeffs_[0] = c;
    return s;
  }

  /// The series x, truncated at `order` (which must be >= 1).
  static PowerSeries identity(int order) {
    if (order < 1) throw ValidationError("x needs truncation order >= 1");
    PowerSeries s(order);
    s.coeffs_[1] = 1;
    return s;
  }

  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const BigRational& operator[](int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
  const std::vector<BigRational>& coefficients() const noexcept { return coeffs_; }

  PowerSeries truncated(int order) const {
    if (order > this->order()) {
      throw ValidationError("cannot truncate a series of order " + std::to_string(this->order()) +
                            " to order " + std::to_string(order));
    }
    return PowerSeries(std::vector<BigRational>(coeffs_.begin(), coeffs_.begin() + order + 1));
  }

  /// Multiply by x keeping the same order (the top coefficient falls off).
  PowerSeries shifted() const {
    PowerSeries s(order());
    for (int i = order(); i >= 1; --i) s.coeffs_[i] = coeffs_[i - 1];
    return s;
  }

  friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
    PowerSeries s(std::min(a.order(), b.order()));
    for (int i = 0; i <= s.order(); ++i) s.coeffs_[i] = a.coeffs_[i] + b.coeffs_[i];
    return s;
  }

  friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) {
    PowerSeries s(std::min(a.order(), b.order()));
    for (int i = 0; i <= s.order(); ++i) s.coeffs_[i] = a.coeffs_[i] - b.coeffs_[i];
    return s;
  }

  friend PowerSeries operator*(const BigRational& c, const PowerSeries& a) {
    PowerSeries s(a.order());
    for (int i = 0; i <= s.order(); ++i) s.coeffs_[i] = c * a.coeffs_[i];
    return s;
  }

  friend bool operator==(const PowerSeries& a, const PowerSeries& b) { return a.coeffs_ == b.coeffs_; }

  /// Index of the first coefficient where the two series differ, or -1 when
  /// they agree through min(a.order, b.order).
  friend int first_difference(const PowerSeries& a, const PowerSeries& b) {
    int top = std::min(a.order(), b.order());
    for (int i = 0; i <= top; ++i) {
      if (a.coeffs_[i] != b.coeffs_[i]) return i;
    }
    return -1;
  }

 private:
  static std::size_t checked_size(int order) {
    if (order < 0) throw ValidationError("series order must be non-negative");
    return static_cast<std::size_t>(order) + 1;
  }

  std::vector<BigRational> coeffs_;
};

/// Cauchy product truncated at min(a.order, b.order).
inline PowerSeries series_mul(const PowerSeries& a, const PowerSeries& b) {
  int order = std::min(a.order(), b.order());
  std::vector<BigRational> out(static_cast<std::size_t>(order) + 1);
  for (int i = 0; i <= order; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; i + j <= order; ++j) out[i + j] += a[i] * b[j];
  }
  return PowerSeries(std::move(out));
}

inline PowerSeries series_pow(const PowerSeries& a, unsigned exponent) {
  PowerSeries result = PowerSeries::constant(1, a.order());
  PowerSeries base = a;
  while (exponent) {
    if (exponent & 1U) result = series_mul(result, base);
    exponent >>= 1U;
    if (exponent) base = series_mul(base, base);
  }
  return result;
}

/// exp(a) for a series with zero constant term, from n*b_n = sum_j j*a_j*b_{n-j}.
inline PowerSeries series_exp(const PowerSeries& a) {
  if (a[0] != 0) {
    throw ValidationError("series_exp needs a zero constant term, got " + to_string(a[0]));
  }
  std::vector<BigRational> b(static_cast<std::size_t>(a.order()) + 1);
  b[0] = 1;
  for (int n = 1; n <= a.order(); ++n) {
    BigRational acc = 0;
    for (int j = 1; j <= n; ++j) {
      if (a[j] != 0) acc += j * a[j] * b[n - j];
    }
    b[n] = acc / n;
  }
  return PowerSeries(std::move(b));
}

inline PowerSeries series_derivative(const PowerSeries& a) {
  if (a.order() < 1) throw ValidationError("derivative needs a series of order >= 1");
  std::vector<BigRational> d(static_cast<std::size_t>(a.order()));
  for (int i = 1; i <= a.order(); ++i) d[i - 1] = i * a[i];
  return PowerSeries(std::move(d));
}

}  // namespace lapgraph
