#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "linloop/dyadic.hpp"

namespace linloop {

class IntervalDivisionByZero : public std::domain_error {
 public:
  IntervalDivisionByZero() : std::domain_error("interval division: divisor contains zero") {}
};

/// Closed interval [lo, hi] with dyadic endpoints.
///
/// Every operation rounds the lower endpoint down and the upper endpoint up
/// at the working precision, so results always contain the exact image of
/// the operands. The working precision of a result is the larger of the two
/// operand precisions.
class DyadicInterval {
 public:
  DyadicInterval() : DyadicInterval(0L, kDefaultPrecision) {}
  DyadicInterval(long value, mpfr_prec_t prec);
  DyadicInterval(Dyadic lo, Dyadic hi, mpfr_prec_t prec);

  static DyadicInterval point(const Dyadic& value, mpfr_prec_t prec);
  /// Smallest interval with `prec`-bit endpoints containing q.
  static DyadicInterval enclose(const Rational& q, mpfr_prec_t prec);
  static DyadicInterval enclose(const Rational& lo, const Rational& hi, mpfr_prec_t prec);

  [[nodiscard]] const Dyadic& lo() const { return lo_; }
  [[nodiscard]] const Dyadic& hi() const { return hi_; }
  [[nodiscard]] mpfr_prec_t precision() const { return prec_; }
  [[nodiscard]] DyadicInterval with_precision(mpfr_prec_t prec) const;

  [[nodiscard]] bool contains(const Rational& q) const { return lo_.compare(q) <= 0 && hi_.compare(q) >= 0; }
  [[nodiscard]] bool contains(const Dyadic& x) const { return lo_ <= x && x <= hi_; }
  [[nodiscard]] bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  [[nodiscard]] bool is_positive() const { return lo_.sign() > 0; }
  [[nodiscard]] bool is_negative() const { return hi_.sign() < 0; }
  [[nodiscard]] bool is_point() const { return lo_ == hi_; }
  [[nodiscard]] bool subset_of(const DyadicInterval& other) const {
    return other.lo_ <= lo_ && hi_ <= other.hi_;
  }

  /// Upper bound on hi - lo.
  [[nodiscard]] Dyadic width() const;
  /// A dyadic inside [lo, hi], close to the centre.
  [[nodiscard]] Dyadic midpoint() const;
  /// min |x| over the interval (exact).
  [[nodiscard]] Dyadic mignitude() const;
  /// max |x| over the interval (exact).
  [[nodiscard]] Dyadic magnitude() const;
  [[nodiscard]] std::pair<DyadicInterval, DyadicInterval> bisect() const;

  [[nodiscard]] std::string to_string() const;

 private:
  Dyadic lo_;
  Dyadic hi_;
  mpfr_prec_t prec_;
};

DyadicInterval operator+(const DyadicInterval& x, const DyadicInterval& y);
DyadicInterval operator-(const DyadicInterval& x, const DyadicInterval& y);
DyadicInterval operator*(const DyadicInterval& x, const DyadicInterval& y);
/// Throws IntervalDivisionByZero when 0 is in y.
DyadicInterval operator/(const DyadicInterval& x, const DyadicInterval& y);
DyadicInterval operator-(const DyadicInterval& x);
DyadicInterval operator/(const DyadicInterval& x, long k);

DyadicInterval& operator+=(DyadicInterval& x, const DyadicInterval& y);
DyadicInterval& operator-=(DyadicInterval& x, const DyadicInterval& y);

/// Tight enclosure of {t^2 : t in x}.
DyadicInterval sqr(const DyadicInterval& x);
DyadicInterval hull(const DyadicInterval& x, const DyadicInterval& y);

inline DyadicInterval iv_add(const DyadicInterval& x, const DyadicInterval& y) { return x + y; }
inline DyadicInterval iv_sub(const DyadicInterval& x, const DyadicInterval& y) { return x - y; }
inline DyadicInterval iv_mul(const DyadicInterval& x, const DyadicInterval& y) { return x * y; }
inline DyadicInterval iv_div(const DyadicInterval& x, const DyadicInterval& y) { return x / y; }

}  // namespace linloop
