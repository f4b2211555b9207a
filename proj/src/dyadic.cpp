#include "linloop/dyadic.hpp"

#include <algorithm>

namespace linloop {

namespace {

mpfr_prec_t bits_for(const Integer& z) {
  if (z == 0) return MPFR_PREC_MIN < 2 ? 2 : MPFR_PREC_MIN;
  auto bits = static_cast<mpfr_prec_t>(mpz_sizeinbase(z.get_mpz_t(), 2));
  return std::max<mpfr_prec_t>(bits, 2);
}

}  // namespace

Dyadic make_dyadic(mpfr_prec_t prec) {
  Dyadic d(Dyadic::Uninit{}, std::max<mpfr_prec_t>(prec, MPFR_PREC_MIN));
  mpfr_set_zero(d.value_, 1);
  return d;
}

Dyadic::Dyadic(long value) {
  mpfr_init2(value_, 64);
  mpfr_set_si(value_, value, MPFR_RNDN);
}

Dyadic::Dyadic(const Integer& mantissa, long exponent) {
  mpfr_init2(value_, bits_for(mantissa));
  mpfr_set_z_2exp(value_, mantissa.get_mpz_t(), exponent, MPFR_RNDN);
}

Dyadic Dyadic::round(const Rational& q, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  Dyadic d = make_dyadic(prec);
  mpfr_set_q(d.value_, q.get_mpq_t(), rnd);
  return d;
}

Dyadic Dyadic::round(const Dyadic& x, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  Dyadic d = make_dyadic(prec);
  mpfr_set(d.value_, x.value_, rnd);
  return d;
}

Dyadic::Dyadic(const Dyadic& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Dyadic::Dyadic(Dyadic&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Dyadic& Dyadic::operator=(const Dyadic& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Dyadic& Dyadic::operator=(Dyadic&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Dyadic::~Dyadic() { mpfr_clear(value_); }

Rational Dyadic::to_rational() const {
  if (is_zero()) return Rational(0);
  Integer mantissa;
  mpfr_exp_t e = mpfr_get_z_2exp(mantissa.get_mpz_t(), value_);
  Rational q(mantissa);
  if (e >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return q;
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Dyadic operator-(const Dyadic& x) {
  Dyadic d = make_dyadic(x.precision());
  mpfr_neg(d.get(), x.get(), MPFR_RNDN);
  return d;
}

Dyadic abs(const Dyadic& x) {
  Dyadic d = make_dyadic(x.precision());
  mpfr_abs(d.get(), x.get(), MPFR_RNDN);
  return d;
}

Dyadic ldexp(const Dyadic& x, long e) {
  Dyadic d = make_dyadic(x.precision());
  mpfr_mul_2si(d.get(), x.get(), e, MPFR_RNDN);
  return d;
}

Dyadic next_below(const Dyadic& x, mpfr_prec_t prec) {
  Dyadic d = Dyadic::round(x, std::max(prec, x.precision()), MPFR_RNDD);
  mpfr_nextbelow(d.get());
  return d;
}

Dyadic next_above(const Dyadic& x, mpfr_prec_t prec) {
  Dyadic d = Dyadic::round(x, std::max(prec, x.precision()), MPFR_RNDU);
  mpfr_nextabove(d.get());
  return d;
}

const Dyadic& min(const Dyadic& a, const Dyadic& b) { return b < a ? b : a; }
const Dyadic& max(const Dyadic& a, const Dyadic& b) { return a < b ? b : a; }

namespace rounded {

Dyadic add(const Dyadic& a, const Dyadic& b, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  Dyadic d = make_dyadic(prec);
  mpfr_add(d.get(), a.get(), b.get(), rnd);
  return d;
}

Dyadic sub(const Dyadic& a, const Dyadic& b, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  Dyadic d = make_dyadic(prec);
  mpfr_sub(d.get(), a.get(), b.get(), rnd);
  return d;
}

Dyadic mul(const Dyadic& a, const Dyadic& b, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  Dyadic d = make_dyadic(prec);
  mpfr_mul(d.get(), a.get(), b.get(), rnd);
  return d;
}

Dyadic div(const Dyadic& a, const Dyadic& b, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  Dyadic d = make_dyadic(prec);
  mpfr_div(d.get(), a.get(), b.get(), rnd);
  return d;
}

Dyadic sqrt(const Dyadic& a, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  Dyadic d = make_dyadic(prec);
  mpfr_sqrt(d.get(), a.get(), rnd);
  return d;
}

}  // namespace rounded

}  // namespace linloop
