#include "linloop/spectral.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <utility>

namespace linloop {

namespace {

using rounded::add;
using rounded::mul;

// Cells kept per quadtree level before refinement stops early.
constexpr std::size_t kCellCap = 4096;
// Extra bisections allowed per contour edge when validating a winding number.
constexpr int kContourDepth = 48;

struct Complex {
  DyadicInterval re;
  DyadicInterval im;
};

Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }

Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

// Exact dyadic from a rational whose denominator is a power of two.
Dyadic exact_dyadic(const Rational& q) {
  const mpz_class& den = q.get_den();
  auto shift = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)) - 1;
  return Dyadic(q.get_num(), -shift);
}

// Taylor coefficients of poly at the point (cr, ci).
std::vector<Complex> taylor(const IntervalPolynomial& poly, const Dyadic& cr, const Dyadic& ci, mpfr_prec_t prec) {
  const std::size_t d = poly.degree();
  std::vector<Complex> b;
  b.reserve(d + 1);
  for (const auto& c : poly.coefficients) b.push_back({c, DyadicInterval(0L, prec)});
  const Complex z{DyadicInterval::point(cr, prec), DyadicInterval::point(ci, prec)};
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t j = d; j-- > k;) b[j] = b[j] + z * b[j + 1];
  }
  return b;
}

Dyadic upper_modulus(const Complex& c, mpfr_prec_t prec) {
  Dyadic re = c.re.magnitude();
  Dyadic im = c.im.magnitude();
  Dyadic s = add(mul(re, re, prec, MPFR_RNDU), mul(im, im, prec, MPFR_RNDU), prec, MPFR_RNDU);
  return rounded::sqrt(s, prec, MPFR_RNDU);
}

Dyadic lower_modulus_sq(const Complex& c, mpfr_prec_t prec) {
  Dyadic re = c.re.mignitude();
  Dyadic im = c.im.mignitude();
  return add(mul(re, re, prec, MPFR_RNDD), mul(im, im, prec, MPFR_RNDD), prec, MPFR_RNDD);
}

// Upper bound on |sum_{k>=1} t_k h^k| for |h| <= r.
Dyadic tail_bound(const std::vector<Complex>& t, const Dyadic& r, mpfr_prec_t prec) {
  Dyadic sum(0L);
  Dyadic rk(1L);
  for (std::size_t k = 1; k < t.size(); ++k) {
    rk = mul(rk, r, prec, MPFR_RNDU);
    sum = add(sum, mul(upper_modulus(t[k], prec), rk, prec, MPFR_RNDU), prec, MPFR_RNDU);
  }
  return sum;
}

// No root of the family within distance r of (cr, ci).
bool disk_root_free(const IntervalPolynomial& poly, const Dyadic& cr, const Dyadic& ci, const Dyadic& r,
                    mpfr_prec_t prec) {
  auto t = taylor(poly, cr, ci, prec);
  Dyadic tail = tail_bound(t, r, prec);
  return mul(tail, tail, prec, MPFR_RNDU) < lower_modulus_sq(t[0], prec);
}

// Index of an open coordinate half-plane (Re>0, Im>0, Re<0, Im<0) that
// contains the image of the segment disk, if one can be validated.
std::optional<int> segment_half_plane(const IntervalPolynomial& poly, const Dyadic& cr, const Dyadic& ci,
                                      const Dyadic& r, mpfr_prec_t prec) {
  auto t = taylor(poly, cr, ci, prec);
  Dyadic tail = tail_bound(t, r, prec);
  Dyadic neg_tail = -tail;
  if (tail < t[0].re.lo()) return 0;
  if (tail < t[0].im.lo()) return 1;
  if (t[0].re.hi() < neg_tail) return 2;
  if (t[0].im.hi() < neg_tail) return 3;
  return std::nullopt;
}

struct Cell {
  Integer i;
  Integer j;
};

struct Box {
  Integer i0, i1, j0, j1;  // inclusive cell index ranges
};

bool enlarged_overlap(const Box& a, const Box& b) {
  return a.i0 - 1 <= b.i1 + 1 && b.i0 - 1 <= a.i1 + 1 && a.j0 - 1 <= b.j1 + 1 && b.j0 - 1 <= a.j1 + 1;
}

Box merge(const Box& a, const Box& b) {
  return {a.i0 < b.i0 ? a.i0 : b.i0, a.i1 < b.i1 ? b.i1 : a.i1, a.j0 < b.j0 ? a.j0 : b.j0,
          a.j1 < b.j1 ? b.j1 : a.j1};
}

class RootIsolator {
 public:
  RootIsolator(const IntervalPolynomial& poly, mpfr_prec_t prec) : poly_(poly), prec_(prec) {}

  std::vector<ComplexDisk> run();

 private:
  // Grid line index e at level L sits at -2^h + e * 2^(h+1-L).
  [[nodiscard]] Rational line(const Integer& e) const {
    Rational x(Integer(2) * e - (Integer(1) << level_));
    return scale(x);
  }
  [[nodiscard]] Rational scale(Rational x) const {
    long s = h_ - level_;
    if (s >= 0) {
      mpq_mul_2exp(x.get_mpq_t(), x.get_mpq_t(), static_cast<mp_bitcnt_t>(s));
    } else {
      mpq_div_2exp(x.get_mpq_t(), x.get_mpq_t(), static_cast<mp_bitcnt_t>(-s));
    }
    return x;
  }
  [[nodiscard]] bool cell_root_free(const Cell& c) const;
  [[nodiscard]] std::optional<int> winding(const Box& box) const;
  bool walk(const Rational& ax, const Rational& ay, const Rational& bx, const Rational& by, int depth,
            std::vector<int>& planes) const;
  [[nodiscard]] ComplexDisk disk_of(const Box& box, int count) const;
  [[nodiscard]] std::vector<ComplexDisk> fallback() const;

  IntervalPolynomial poly_;
  mpfr_prec_t prec_;
  long h_ = 0;
  long level_ = 0;
};

bool RootIsolator::cell_root_free(const Cell& c) const {
  Rational cx = scale(Rational(Integer(2) * c.i + 1 - (Integer(1) << level_)));
  Rational cy = scale(Rational(Integer(2) * c.j + 1 - (Integer(1) << level_)));
  // 3/4 of the cell width bounds the half-diagonal w / sqrt(2).
  Rational r = scale(Rational(3, 2));
  return disk_root_free(poly_, exact_dyadic(cx), exact_dyadic(cy), exact_dyadic(r), prec_);
}

bool RootIsolator::walk(const Rational& ax, const Rational& ay, const Rational& bx, const Rational& by,
                        int depth, std::vector<int>& planes) const {
  Rational mx = (ax + bx) / 2;
  Rational my = (ay + by) / 2;
  Rational half = (ax == bx) ? abs(by - ay) / 2 : abs(bx - ax) / 2;
  if (auto plane = segment_half_plane(poly_, exact_dyadic(mx), exact_dyadic(my), exact_dyadic(half), prec_)) {
    planes.push_back(*plane);
    return true;
  }
  if (depth >= kContourDepth) return false;
  return walk(ax, ay, mx, my, depth + 1, planes) && walk(mx, my, bx, by, depth + 1, planes);
}

// Winding number of the family along the boundary of `box` enlarged by one
// cell, traversed counterclockwise. Consecutive segments lie in half-planes
// that share the common endpoint's image, so each step turns by at most a
// quarter; the quarter-turns sum to 4 * winding.
std::optional<int> RootIsolator::winding(const Box& box) const {
  const Integer x0 = box.i0 - 1, x1 = box.i1 + 2, y0 = box.j0 - 1, y1 = box.j1 + 2;
  std::vector<std::pair<Integer, Integer>> corners;
  for (Integer x = x0; x < x1; ++x) corners.emplace_back(x, y0);
  for (Integer y = y0; y < y1; ++y) corners.emplace_back(x1, y);
  for (Integer x = x1; x > x0; --x) corners.emplace_back(x, y1);
  for (Integer y = y1; y > y0; --y) corners.emplace_back(x0, y);

  std::vector<int> planes;
  for (std::size_t k = 0; k < corners.size(); ++k) {
    const auto& a = corners[k];
    const auto& b = corners[(k + 1) % corners.size()];
    if (!walk(line(a.first), line(a.second), line(b.first), line(b.second), 0, planes)) return std::nullopt;
  }
  int quarter_turns = 0;
  for (std::size_t k = 0; k < planes.size(); ++k) {
    int d = (planes[(k + 1) % planes.size()] - planes[k] + 4) % 4;
    if (d == 2) return std::nullopt;
    quarter_turns += (d == 3) ? -1 : d;
  }
  if (quarter_turns % 4 != 0) return std::nullopt;
  return quarter_turns / 4;
}

ComplexDisk RootIsolator::disk_of(const Box& box, int count) const {
  Rational xlo = line(box.i0), xhi = line(box.i1 + 1);
  Rational ylo = line(box.j0), yhi = line(box.j1 + 1);
  Dyadic cx = exact_dyadic((xlo + xhi) / 2);
  Dyadic cy = exact_dyadic((ylo + yhi) / 2);
  Dyadic hx = exact_dyadic((xhi - xlo) / 2);
  Dyadic hy = exact_dyadic((yhi - ylo) / 2);
  Dyadic r2 = add(mul(hx, hx, prec_, MPFR_RNDU), mul(hy, hy, prec_, MPFR_RNDU), prec_, MPFR_RNDU);
  return {DyadicInterval::point(cx, prec_), DyadicInterval::point(cy, prec_), rounded::sqrt(r2, prec_, MPFR_RNDU),
          count};
}

std::vector<ComplexDisk> RootIsolator::fallback() const {
  Dyadic zero(0L);
  return {ComplexDisk{DyadicInterval::point(zero, prec_), DyadicInterval::point(zero, prec_),
                      ldexp(Dyadic(1L), h_), static_cast<int>(poly_.degree())}};
}

std::vector<ComplexDisk> RootIsolator::run() {
  const std::size_t degree = poly_.degree();
  if (poly_.leading().contains_zero()) throw LeadingCoefficientContainsZero();
  if (degree == 0) return {};

  // Cauchy bound: every root satisfies |z| <= 1 + max |a_i| / |a_n|.
  Dyadic bound(0L);
  const Dyadic lead = poly_.leading().mignitude();
  for (std::size_t i = 0; i < degree; ++i) {
    bound = max(bound, rounded::div(poly_.coefficients[i].magnitude(), lead, prec_, MPFR_RNDU));
  }
  bound = add(bound, Dyadic(1L), prec_, MPFR_RNDU);
  // Half-width 2^h >= 2 * bound keeps all roots away from the outer square.
  h_ = static_cast<long>(mpfr_get_exp(bound.get())) + 1;

  const long target_bits = std::max<long>(static_cast<long>(prec_) / 4, 8);
  const long final_level = h_ + 1 + target_bits;

  std::vector<Cell> cells{{Integer(0), Integer(0)}};
  level_ = 0;
  for (;;) {
    std::vector<Cell> kept;
    for (auto& c : cells) {
      if (!cell_root_free(c)) kept.push_back(std::move(c));
    }
    cells = std::move(kept);
    if (level_ >= final_level || cells.size() * 4 > kCellCap) break;
    std::vector<Cell> next;
    next.reserve(cells.size() * 4);
    for (const auto& c : cells) {
      for (int di = 0; di < 2; ++di) {
        for (int dj = 0; dj < 2; ++dj) next.push_back({Integer(2) * c.i + di, Integer(2) * c.j + dj});
      }
    }
    cells = std::move(next);
    ++level_;
  }
  if (cells.empty()) return fallback();

  // Connected components (8-neighbourhood) of the surviving cells.
  std::map<std::pair<Integer, Integer>, std::size_t> index;
  for (std::size_t k = 0; k < cells.size(); ++k) index.emplace(std::make_pair(cells[k].i, cells[k].j), k);
  std::vector<std::size_t> parent(cells.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t k = 0; k < cells.size(); ++k) {
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        auto it = index.find({cells[k].i + di, cells[k].j + dj});
        if (it != index.end()) parent[find(k)] = find(it->second);
      }
    }
  }
  std::map<std::size_t, Box> components;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    Box cell_box{cells[k].i, cells[k].i, cells[k].j, cells[k].j};
    auto [it, inserted] = components.try_emplace(find(k), cell_box);
    if (!inserted) it->second = merge(it->second, cell_box);
  }

  std::vector<Box> groups;
  for (auto& [root, box] : components) groups.push_back(box);
  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t a = 0; a < groups.size() && !merged; ++a) {
      for (std::size_t b = a + 1; b < groups.size() && !merged; ++b) {
        if (enlarged_overlap(groups[a], groups[b])) {
          groups[a] = merge(groups[a], groups[b]);
          groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(b));
          merged = true;
        }
      }
    }
  }

  std::vector<ComplexDisk> disks;
  long total = 0;
  for (const auto& g : groups) {
    auto w = winding(g);
    if (!w || *w < 0) return fallback();
    total += *w;
    if (*w > 0) disks.push_back(disk_of(g, *w));
  }
  if (total != static_cast<long>(degree)) return fallback();
  return disks;
}

}  // namespace

bool ComplexDisk::excludes(const Dyadic& c) const {
  DyadicInterval c_iv = DyadicInterval::point(c, center_re.precision());
  DyadicInterval dist2 = sqr(center_re - c_iv) + sqr(center_im);
  DyadicInterval r = DyadicInterval::point(radius, center_re.precision());
  return (sqr(r)).hi() < dist2.lo();
}

bool ComplexDisk::contains(const Rational& re, const Rational& im) const {
  Rational dx = center_re.midpoint().to_rational() - re;
  Rational dy = center_im.midpoint().to_rational() - im;
  Rational r = radius.to_rational();
  return dx * dx + dy * dy <= r * r;
}

std::vector<ComplexDisk> root_enclosures(const IntervalPolynomial& poly, mpfr_prec_t prec) {
  IntervalPolynomial p = poly;
  for (auto& c : p.coefficients) c = c.with_precision(std::max(prec, c.precision()));
  return RootIsolator(p, prec).run();
}

std::vector<RealSegment> real_segments(const std::vector<ComplexDisk>& disks, mpfr_prec_t prec) {
  std::vector<RealSegment> out;
  for (const auto& d : disks) {
    DyadicInterval rad = DyadicInterval::point(d.radius, prec);
    // im-range of the disk must meet 0.
    if ((d.center_im - rad).lo().sign() > 0 || (d.center_im + rad).hi().sign() < 0) continue;
    DyadicInterval lo = d.center_re - rad;
    DyadicInterval hi = d.center_re + rad;
    out.push_back({next_below(lo.lo(), prec), next_above(hi.hi(), prec)});
  }
  std::sort(out.begin(), out.end(), [](const RealSegment& a, const RealSegment& b) { return a.lo < b.lo; });
  return out;
}

std::vector<RealSegment> real_spectrum_above(const IntervalMatrix& a, const Dyadic& r, mpfr_prec_t prec) {
  std::vector<RealSegment> out;
  for (auto& s : real_segments(root_enclosures(char_poly(a), prec), prec)) {
    if (s.hi < r) continue;
    if (s.lo < r) s.lo = r;
    out.push_back(std::move(s));
  }
  return out;
}

SignWitness odd_root_witness(const IntervalPolynomial& poly, const Dyadic& a, const Dyadic& b) {
  mpfr_prec_t prec = poly.coefficients.empty() ? kDefaultPrecision : poly.leading().precision();
  for (const auto& c : poly.coefficients) prec = std::max(prec, c.precision());
  SignWitness w;
  w.value_at_a = poly.evaluate(DyadicInterval::point(a, prec));
  w.value_at_b = poly.evaluate(DyadicInterval::point(b, prec));
  w.verified = a < b && ((w.value_at_a.is_positive() && w.value_at_b.is_negative()) ||
                         (w.value_at_a.is_negative() && w.value_at_b.is_positive()));
  return w;
}

bool verify_value_not_in_spectrum(const IntervalMatrix& a, const Dyadic& c, mpfr_prec_t prec) {
  auto disks = root_enclosures(char_poly(a), prec);
  return std::all_of(disks.begin(), disks.end(), [&](const ComplexDisk& d) { return d.excludes(c); });
}

}  // namespace linloop
