#include "linloop/interval.hpp"

#include <algorithm>
#include <array>

namespace linloop {

namespace {

using rounded::add;
using rounded::div;
using rounded::mul;
using rounded::sub;

mpfr_prec_t joint(const DyadicInterval& x, const DyadicInterval& y) {
  return std::max(x.precision(), y.precision());
}

}  // namespace

DyadicInterval::DyadicInterval(long value, mpfr_prec_t prec) : lo_(value), hi_(value), prec_(prec) {}

DyadicInterval::DyadicInterval(Dyadic lo, Dyadic hi, mpfr_prec_t prec)
    : lo_(std::move(lo)), hi_(std::move(hi)), prec_(prec) {
  if (hi_ < lo_) throw std::invalid_argument("DyadicInterval: lo > hi");
}

DyadicInterval DyadicInterval::point(const Dyadic& value, mpfr_prec_t prec) {
  return DyadicInterval(value, value, prec);
}

DyadicInterval DyadicInterval::enclose(const Rational& q, mpfr_prec_t prec) {
  return {Dyadic::round(q, prec, MPFR_RNDD), Dyadic::round(q, prec, MPFR_RNDU), prec};
}

DyadicInterval DyadicInterval::enclose(const Rational& lo, const Rational& hi, mpfr_prec_t prec) {
  return {Dyadic::round(lo, prec, MPFR_RNDD), Dyadic::round(hi, prec, MPFR_RNDU), prec};
}

DyadicInterval DyadicInterval::with_precision(mpfr_prec_t prec) const {
  DyadicInterval r = *this;
  r.prec_ = prec;
  return r;
}

Dyadic DyadicInterval::width() const { return sub(hi_, lo_, prec_, MPFR_RNDU); }

Dyadic DyadicInterval::midpoint() const {
  mpfr_prec_t p = std::max({prec_, lo_.precision(), hi_.precision()});
  return ldexp(add(lo_, hi_, p, MPFR_RNDN), -1);
}

Dyadic DyadicInterval::mignitude() const {
  if (contains_zero()) return Dyadic(0L);
  return lo_.sign() > 0 ? lo_ : abs(hi_);
}

Dyadic DyadicInterval::magnitude() const { return max(abs(lo_), abs(hi_)); }

std::pair<DyadicInterval, DyadicInterval> DyadicInterval::bisect() const {
  Dyadic m = midpoint();
  return {DyadicInterval(lo_, m, prec_), DyadicInterval(m, hi_, prec_)};
}

std::string DyadicInterval::to_string() const {
  return "[" + lo_.to_string() + "," + hi_.to_string() + "]";
}

DyadicInterval operator+(const DyadicInterval& x, const DyadicInterval& y) {
  mpfr_prec_t p = joint(x, y);
  return {add(x.lo(), y.lo(), p, MPFR_RNDD), add(x.hi(), y.hi(), p, MPFR_RNDU), p};
}

DyadicInterval operator-(const DyadicInterval& x, const DyadicInterval& y) {
  mpfr_prec_t p = joint(x, y);
  return {sub(x.lo(), y.hi(), p, MPFR_RNDD), sub(x.hi(), y.lo(), p, MPFR_RNDU), p};
}

DyadicInterval operator-(const DyadicInterval& x) { return {-x.hi(), -x.lo(), x.precision()}; }

DyadicInterval operator*(const DyadicInterval& x, const DyadicInterval& y) {
  mpfr_prec_t p = joint(x, y);
  // Sign-case split keeps the common nonnegative cases to two products.
  if (x.lo().sign() >= 0 && y.lo().sign() >= 0) {
    return {mul(x.lo(), y.lo(), p, MPFR_RNDD), mul(x.hi(), y.hi(), p, MPFR_RNDU), p};
  }
  std::array<const Dyadic*, 2> xs{&x.lo(), &x.hi()};
  std::array<const Dyadic*, 2> ys{&y.lo(), &y.hi()};
  Dyadic lo = mul(*xs[0], *ys[0], p, MPFR_RNDD);
  Dyadic hi = mul(*xs[0], *ys[0], p, MPFR_RNDU);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (i == 0 && j == 0) continue;
      Dyadic l = mul(*xs[i], *ys[j], p, MPFR_RNDD);
      Dyadic h = mul(*xs[i], *ys[j], p, MPFR_RNDU);
      if (l < lo) lo = std::move(l);
      if (hi < h) hi = std::move(h);
    }
  }
  return {std::move(lo), std::move(hi), p};
}

DyadicInterval operator/(const DyadicInterval& x, const DyadicInterval& y) {
  if (y.contains_zero()) throw IntervalDivisionByZero();
  mpfr_prec_t p = joint(x, y);
  std::array<const Dyadic*, 2> xs{&x.lo(), &x.hi()};
  std::array<const Dyadic*, 2> ys{&y.lo(), &y.hi()};
  Dyadic lo = div(*xs[0], *ys[0], p, MPFR_RNDD);
  Dyadic hi = div(*xs[0], *ys[0], p, MPFR_RNDU);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (i == 0 && j == 0) continue;
      Dyadic l = div(*xs[i], *ys[j], p, MPFR_RNDD);
      Dyadic h = div(*xs[i], *ys[j], p, MPFR_RNDU);
      if (l < lo) lo = std::move(l);
      if (hi < h) hi = std::move(h);
    }
  }
  return {std::move(lo), std::move(hi), p};
}

DyadicInterval operator/(const DyadicInterval& x, long k) {
  if (k == 0) throw IntervalDivisionByZero();
  mpfr_prec_t p = x.precision();
  Dyadic a = make_dyadic(p);
  Dyadic b = make_dyadic(p);
  if (k > 0) {
    mpfr_div_si(a.get(), x.lo().get(), k, MPFR_RNDD);
    mpfr_div_si(b.get(), x.hi().get(), k, MPFR_RNDU);
  } else {
    mpfr_div_si(a.get(), x.hi().get(), k, MPFR_RNDD);
    mpfr_div_si(b.get(), x.lo().get(), k, MPFR_RNDU);
  }
  return {std::move(a), std::move(b), p};
}

DyadicInterval& operator+=(DyadicInterval& x, const DyadicInterval& y) { return x = x + y; }
DyadicInterval& operator-=(DyadicInterval& x, const DyadicInterval& y) { return x = x - y; }

DyadicInterval sqr(const DyadicInterval& x) {
  mpfr_prec_t p = x.precision();
  if (x.lo().sign() >= 0) return {mul(x.lo(), x.lo(), p, MPFR_RNDD), mul(x.hi(), x.hi(), p, MPFR_RNDU), p};
  if (x.hi().sign() <= 0) return {mul(x.hi(), x.hi(), p, MPFR_RNDD), mul(x.lo(), x.lo(), p, MPFR_RNDU), p};
  const Dyadic& m = x.magnitude();
  return {Dyadic(0L), mul(m, m, p, MPFR_RNDU), p};
}

DyadicInterval hull(const DyadicInterval& x, const DyadicInterval& y) {
  return {min(x.lo(), y.lo()), max(x.hi(), y.hi()), joint(x, y)};
}

}  // namespace linloop
