#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

namespace linloop {

using Integer = mpz_class;
using Rational = mpq_class;

/// Precision used when no other precision is implied by the operands.
inline constexpr mpfr_prec_t kDefaultPrecision = 53;

/// An arbitrary-precision dyadic number m * 2^e backed by an MPFR value.
///
/// A Dyadic carries its own mantissa precision. Constructors that take no
/// rounding mode are exact; arithmetic goes through the `rounded` helpers,
/// which always name a rounding direction.
class Dyadic {
 public:
  Dyadic() : Dyadic(0L) {}
  explicit Dyadic(long value);
  /// Exactly `mantissa * 2^exponent`.
  Dyadic(const Integer& mantissa, long exponent);

  /// Rounds `q` to `prec` mantissa bits in direction `rnd`.
  static Dyadic round(const Rational& q, mpfr_prec_t prec, mpfr_rnd_t rnd);
  static Dyadic round(const Dyadic& x, mpfr_prec_t prec, mpfr_rnd_t rnd);

  Dyadic(const Dyadic& other);
  Dyadic(Dyadic&& other) noexcept;
  Dyadic& operator=(const Dyadic& other);
  Dyadic& operator=(Dyadic&& other) noexcept;
  ~Dyadic();

  [[nodiscard]] mpfr_srcptr get() const { return value_; }
  [[nodiscard]] mpfr_ptr get() { return value_; }
  [[nodiscard]] mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  [[nodiscard]] int sign() const { return mpfr_sgn(value_); }
  [[nodiscard]] bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  [[nodiscard]] double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  [[nodiscard]] Rational to_rational() const;
  /// Exact decimal rational form, "p" or "p/q".
  [[nodiscard]] std::string to_string() const { return to_rational().get_str(); }

  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);
  friend bool operator==(const Dyadic& a, const Dyadic& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }

  [[nodiscard]] int compare(const Rational& q) const { return mpfr_cmp_q(value_, q.get_mpq_t()); }

 private:
  struct Uninit {};
  Dyadic(Uninit, mpfr_prec_t prec) { mpfr_init2(value_, prec); }

  friend Dyadic make_dyadic(mpfr_prec_t prec);

  mpfr_t value_;
};

/// An uninitialised-value Dyadic of the given precision (value is zero).
Dyadic make_dyadic(mpfr_prec_t prec);

Dyadic operator-(const Dyadic& x);
Dyadic abs(const Dyadic& x);
/// Exact multiplication by 2^e.
Dyadic ldexp(const Dyadic& x, long e);
/// One unit in the last place below / above `x` at precision `prec`.
Dyadic next_below(const Dyadic& x, mpfr_prec_t prec);
Dyadic next_above(const Dyadic& x, mpfr_prec_t prec);
const Dyadic& min(const Dyadic& a, const Dyadic& b);
const Dyadic& max(const Dyadic& a, const Dyadic& b);

namespace rounded {
Dyadic add(const Dyadic& a, const Dyadic& b, mpfr_prec_t prec, mpfr_rnd_t rnd);
Dyadic sub(const Dyadic& a, const Dyadic& b, mpfr_prec_t prec, mpfr_rnd_t rnd);
Dyadic mul(const Dyadic& a, const Dyadic& b, mpfr_prec_t prec, mpfr_rnd_t rnd);
Dyadic div(const Dyadic& a, const Dyadic& b, mpfr_prec_t prec, mpfr_rnd_t rnd);
Dyadic sqrt(const Dyadic& a, mpfr_prec_t prec, mpfr_rnd_t rnd);
}  // namespace rounded

}  // namespace linloop
