#pragma once

// Polynomials in beta truncated at a fixed order. Every O(c^-n) statement in the
// frame calculations is expressed through this type.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <initializer_list>
#include <vector>

#include "gravlink/errors.hpp"

namespace gravlink {

inline constexpr int kDefaultSeriesOrder = 4;

class TruncatedSeries {
 public:
  explicit TruncatedSeries(int order = kDefaultSeriesOrder)
      : coefficients_(static_cast<std::size_t>(check_order(order)) + 1, 0.0) {}

  // Coefficients past `order` are dropped; missing ones are zero.
  TruncatedSeries(std::initializer_list<double> coefficients, int order)
      : TruncatedSeries(std::vector<double>(coefficients), order) {}

  TruncatedSeries(std::vector<double> coefficients, int order) : TruncatedSeries(order) {
    const std::size_t n = std::min(coefficients.size(), coefficients_.size());
    std::copy_n(coefficients.begin(), n, coefficients_.begin());
  }

  static TruncatedSeries constant(double value, int order = kDefaultSeriesOrder) {
    TruncatedSeries s(order);
    s.coefficients_[0] = value;
    return s;
  }

  // coefficient * beta^power; zero if power exceeds the order.
  static TruncatedSeries monomial(double coefficient, int power, int order = kDefaultSeriesOrder) {
    TruncatedSeries s(order);
    if (power < 0) throw DomainError("monomial power must be non-negative");
    if (power <= order) s.coefficients_[static_cast<std::size_t>(power)] = coefficient;
    return s;
  }

  int order() const { return static_cast<int>(coefficients_.size()) - 1; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  double operator[](int power) const { return coefficients_.at(static_cast<std::size_t>(power)); }

  TruncatedSeries truncated(int order) const {
    return TruncatedSeries(coefficients_, std::min(order, this->order()));
  }

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    TruncatedSeries out(std::min(a.order(), b.order()));
    for (std::size_t i = 0; i < out.coefficients_.size(); ++i)
      out.coefficients_[i] = a.coefficients_[i] + b.coefficients_[i];
    return out;
  }

  friend TruncatedSeries operator-(const TruncatedSeries& a) {
    TruncatedSeries out(a.order());
    for (std::size_t i = 0; i < out.coefficients_.size(); ++i) out.coefficients_[i] = -a.coefficients_[i];
    return out;
  }

  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return a + (-b); }

  // Cauchy product, truncated to the smaller operand order.
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    const int n = std::min(a.order(), b.order());
    TruncatedSeries out(n);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; i + j <= n; ++j)
        out.coefficients_[static_cast<std::size_t>(i + j)] +=
            a.coefficients_[static_cast<std::size_t>(i)] * b.coefficients_[static_cast<std::size_t>(j)];
    return out;
  }

  friend TruncatedSeries operator*(double s, const TruncatedSeries& a) {
    TruncatedSeries out = a;
    for (double& c : out.coefficients_) c *= s;
    return out;
  }

 private:
  static int check_order(int order) {
    if (order < 0) throw DomainError("series order must be non-negative");
    return order;
  }

  std::vector<double> coefficients_;
};

inline TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b) { return a + b; }
inline TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) { return a * b; }
inline TruncatedSeries series_neg(const TruncatedSeries& a) { return -a; }

// Multiplicative inverse by recursive division; the constant term must be nonzero.
inline TruncatedSeries series_inverse(const TruncatedSeries& a) {
  const double a0 = a[0];
  if (a0 == 0.0) throw DomainError("series with zero constant term has no inverse");
  std::vector<double> c(static_cast<std::size_t>(a.order()) + 1, 0.0);
  c[0] = 1.0 / a0;
  for (int n = 1; n <= a.order(); ++n) {
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) acc += a[k] * c[static_cast<std::size_t>(n - k)];
    c[static_cast<std::size_t>(n)] = -acc / a0;
  }
  return TruncatedSeries(std::move(c), a.order());
}

// gamma^p = (1 - beta^2)^(-p/2) expanded about beta = 0. Non-negative p uses the
// binomial series with rising factorials in p/2; negative p inverts gamma^|p|.
inline TruncatedSeries gamma_power_series(int p, int order = kDefaultSeriesOrder) {
  if (order < 0) throw DomainError("series order must be non-negative");
  if (p < 0) return series_inverse(gamma_power_series(-p, order));
  std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
  const double a = 0.5 * p;
  double term = 1.0;  // (a)_k / k!
  for (int k = 0; 2 * k <= order; ++k) {
    c[static_cast<std::size_t>(2 * k)] = term;
    term *= (a + k) / (k + 1);
  }
  return TruncatedSeries(std::move(c), order);
}

inline double evaluate(const TruncatedSeries& s, double beta) {
  if (!(std::abs(beta) < 1.0)) throw DomainError("series evaluation requires |beta| < 1");
  double acc = 0.0;
  const auto& c = s.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * beta + *it;
  return acc;
}

}  // namespace gravlink
