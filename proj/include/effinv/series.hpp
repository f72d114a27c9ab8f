#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "effinv/rational.hpp"
#include "effinv/ring.hpp"

namespace effinv {

class SeriesError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultTruncationOrder = 24;

namespace detail {

inline bool value_is_zero(const Rational& x) { return x == 0; }
inline bool value_is_zero(const GradedElement& x) { return x.is_zero(); }

inline bool constant_term_vanishes(const Rational& x) { return x == 0; }
inline bool constant_term_vanishes(const GradedElement& x) {
  return x.constant_term() == 0;
}

inline Rational unit_value(const Rational&) { return Rational(1); }
inline GradedElement unit_value(const GradedElement& a) {
  return a.one_like();
}

inline Rational value_power(const Rational& x, int n) {
  Rational out = 1;
  for (int i = 0; i < n; ++i) out *= x;
  return out;
}
inline GradedElement value_power(const GradedElement& x, int n) {
  return pow(x, static_cast<unsigned>(n));
}

}  // namespace detail

/// Truncated Laurent series in u = 1/t.  Positive powers of t are kept
/// separately from the tail so mixed expressions such as t * X / (-t - psi)
/// stay exact; the tail holds the coefficients of t^{-k} for k = 0..order.
template <typename Coeff>
class LaurentSeries {
 public:
  explicit LaurentSeries(int order) : tail_(order + 1), order_(order) {
    if (order < 0) throw SeriesError("truncation order must be >= 0");
  }

  int order() const { return order_; }

  /// Coefficient of t^power (power <= 0 reads the tail).
  Coeff coefficient(int power) const {
    if (power > 0) {
      auto it = poly_.find(power);
      return it == poly_.end() ? Coeff{} : it->second;
    }
    int k = -power;
    if (k > order_) return Coeff{};
    return tail_[k];
  }

  void set_coefficient(int power, Coeff value) {
    if (power > 0) {
      if (detail::value_is_zero(value))
        poly_.erase(power);
      else
        poly_[power] = std::move(value);
      return;
    }
    int k = -power;
    if (k > order_) return;  // beyond truncation
    tail_[k] = std::move(value);
  }

  void add_to(int power, const Coeff& value) {
    set_coefficient(power, coefficient(power) + value);
  }

  const std::map<int, Coeff>& positive_part() const { return poly_; }

  bool is_zero() const {
    if (!poly_.empty()) return false;
    for (const Coeff& c : tail_)
      if (!detail::value_is_zero(c)) return false;
    return true;
  }

  friend LaurentSeries operator+(const LaurentSeries& a,
                                 const LaurentSeries& b) {
    a.requireSameShape(b);
    LaurentSeries out = a;
    for (const auto& [p, c] : b.poly_) out.add_to(p, c);
    for (int k = 0; k <= a.order_; ++k) out.add_to(-k, b.tail_[k]);
    return out;
  }

  friend LaurentSeries operator-(const LaurentSeries& a) {
    LaurentSeries out = a;
    for (auto& [p, c] : out.poly_) c = -c;
    for (auto& c : out.tail_) c = -c;
    return out;
  }

  friend LaurentSeries operator-(const LaurentSeries& a,
                                 const LaurentSeries& b) {
    return a + (-b);
  }

  /// Cauchy product, truncated below t^{-order}.
  friend LaurentSeries operator*(const LaurentSeries& a,
                                 const LaurentSeries& b) {
    a.requireSameShape(b);
    LaurentSeries out(a.order_);
    a.for_each([&](int pa, const Coeff& ca) {
      b.for_each([&](int pb, const Coeff& cb) {
        int p = pa + pb;
        if (p < -a.order_) return;
        out.add_to(p, ca * cb);
      });
    });
    return out;
  }

  friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
    a.requireSameShape(b);
    for (const auto& [p, c] : a.poly_)
      if (!(b.coefficient(p) == c)) return false;
    for (const auto& [p, c] : b.poly_)
      if (!(a.coefficient(p) == c)) return false;
    for (int k = 0; k <= a.order_; ++k)
      if (!(a.tail_[k] == b.tail_[k])) return false;
    return true;
  }

  friend bool operator!=(const LaurentSeries& a, const LaurentSeries& b) {
    return !(a == b);
  }

  LaurentSeries scaled(const Coeff& s) const {
    LaurentSeries out(order_);
    for (const auto& [p, c] : poly_) out.set_coefficient(p, s * c);
    for (int k = 0; k <= order_; ++k) out.tail_[k] = s * tail_[k];
    return out;
  }

  template <typename Fn>
  LaurentSeries mapped(Fn&& fn) const {
    LaurentSeries out(order_);
    for (const auto& [p, c] : poly_) out.set_coefficient(p, fn(c));
    for (int k = 0; k <= order_; ++k) out.tail_[k] = fn(tail_[k]);
    return out;
  }

 private:
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [p, c] : poly_) fn(p, c);
    for (int k = 0; k <= order_; ++k)
      if (!detail::value_is_zero(tail_[k])) fn(-k, tail_[k]);
  }

  void requireSameShape(const LaurentSeries& other) const {
    if (order_ != other.order_) throw SeriesError("truncation order mismatch");
  }

  std::map<int, Coeff> poly_;  // powers >= 1
  std::vector<Coeff> tail_;    // tail_[k] = coefficient of t^{-k}
  int order_;
};

enum class PoleSign { Plus, Minus };

/// Expansion of 1/(t - a) (Plus) or 1/(-t - a) (Minus) in powers of 1/t:
/// the t^{-k-1} coefficient is a^k, resp. (-1)^{k+1} a^k.  The shift `a`
/// must have zero constant term; truncation handles non-nilpotent shifts.
template <typename Coeff>
LaurentSeries<Coeff> expand_pole(PoleSign sign, const Coeff& a, int order) {
  if (!detail::constant_term_vanishes(a))
    throw SeriesError("pole shift must have zero constant term");
  LaurentSeries<Coeff> out(order);
  Coeff p = detail::unit_value(a);
  for (int k = 0; k + 1 <= order; ++k) {
    if (k > 0) {
      p = p * a;
      if (detail::value_is_zero(p)) break;
    }
    if (sign == PoleSign::Plus)
      out.add_to(-k - 1, p);
    else
      out.add_to(-k - 1, k % 2 == 0 ? -p : p);
  }
  return out;
}

/// Checks mul(1/(t-a), 1/(t-b)) against the closed double-pole form
///   (1/t) * sum_{k>=1} t^{-k} sum_{k'=0}^{k-1} a^{k'} b^{k-1-k'}
/// coefficientwise up to the truncation order.
template <typename Coeff>
bool verify_double_pole(const Coeff& a, const Coeff& b, int order) {
  LaurentSeries<Coeff> lhs = expand_pole(PoleSign::Plus, a, order) *
                             expand_pole(PoleSign::Plus, b, order);
  LaurentSeries<Coeff> rhs(order);
  for (int k = 1; k + 1 <= order; ++k) {
    Coeff sum{};
    for (int kp = 0; kp <= k - 1; ++kp) {
      Coeff term = detail::value_power(a, kp);
      int rest = k - 1 - kp;
      if (rest > 0) term = term * detail::value_power(b, rest);
      sum = sum + term;
    }
    rhs.add_to(-k - 1, sum);
  }
  return lhs == rhs;
}

}  // namespace effinv
