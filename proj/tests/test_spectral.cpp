#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "linloop/spectral.hpp"
#include "support.hpp"

using namespace linloop;
using namespace testing;
namespace ora = linloop::oracle;

namespace {

IntervalPolynomial poly(std::initializer_list<const char*> ascending, mpfr_prec_t prec = 53) {
  IntervalPolynomial p;
  for (const char* c : ascending) p.coefficients.push_back(iv(c, prec));
  return p;
}

int total_count(const std::vector<ComplexDisk>& disks) {
  int s = 0;
  for (const auto& d : disks) s += d.count;
  return s;
}

bool covered(const std::vector<ComplexDisk>& disks, const Rational& re, const Rational& im) {
  for (const auto& d : disks)
    if (d.contains(re, im)) return true;
  return false;
}

Dyadic max_radius(const std::vector<ComplexDisk>& disks) {
  Dyadic r(0L);
  for (const auto& d : disks) r = max(r, d.radius);
  return r;
}

// Companion matrix of prod (t - r_i).
ora::RationalMatrix companion(const std::vector<Rational>& roots) {
  std::vector<Rational> c{Rational(1)};
  for (const auto& r : roots) {
    std::vector<Rational> next(c.size() + 1, Rational(0));
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = next;
  }
  const std::size_t n = roots.size();
  ora::RationalMatrix m(n, n);
  for (std::size_t i = 1; i < n; ++i) m(i, i - 1) = 1;
  for (std::size_t i = 0; i < n; ++i) m(i, n - 1) = -c[i];
  return m;
}

}  // namespace

TEST_CASE("roots of t^2 - 5t + 6") {
  auto disks = root_enclosures(poly({"6", "-5", "1"}, 80), 80);
  CHECK(total_count(disks) == 2);
  CHECK(disks.size() == 2);
  CHECK(covered(disks, q("2"), q("0")));
  CHECK(covered(disks, q("3"), q("0")));
  CHECK(max_radius(disks) <= Dyadic(1, -8));
}

TEST_CASE("roots of t^2 + 1 stay off the real axis") {
  auto disks = root_enclosures(poly({"1", "0", "1"}, 80), 80);
  CHECK(total_count(disks) == 2);
  CHECK(covered(disks, q("0"), q("1")));
  CHECK(covered(disks, q("0"), q("-1")));
  CHECK(real_segments(disks, 80).empty());
}

TEST_CASE("double root at the origin") {
  auto disks = root_enclosures(poly({"0", "0", "1"}, 80), 80);
  CHECK(total_count(disks) == 2);
  CHECK(covered(disks, q("0"), q("0")));
}

TEST_CASE("leading coefficient containing zero is rejected") {
  IntervalPolynomial p = poly({"1", "1"});
  p.coefficients.back() = iv("-1", "1");
  CHECK_THROWS_AS(root_enclosures(p, 53), LeadingCoefficientContainsZero);
}

TEST_CASE("real spectrum above a threshold") {
  CHECK(real_spectrum_above(imat({{"0", "-1"}, {"1", "0"}}), Dyadic(0L), 80).empty());

  auto half = real_spectrum_above(imat({{"1/2"}}, 80), Dyadic(0L), 80);
  REQUIRE(half.size() == 1);
  CHECK(half[0].lo.compare(q("1/2")) <= 0);
  CHECK(half[0].hi.compare(q("1/2")) >= 0);

  auto diag = real_spectrum_above(imat({{"2", "0"}, {"0", "3"}}, 80), Dyadic(1L), 80);
  REQUIRE(diag.size() == 2);
  CHECK(diag[0].lo.compare(q("2")) <= 0);
  CHECK(diag[1].hi.compare(q("3")) >= 0);
}

TEST_CASE("odd root witnesses") {
  CHECK(odd_root_witness(poly({"-2", "1"}), Dyadic(1L), Dyadic(3L)).verified);
  CHECK_FALSE(odd_root_witness(poly({"4", "-4", "1"}), Dyadic(1L), Dyadic(3L)).verified);
  CHECK(odd_root_witness(poly({"6", "-5", "1"}), Dyadic(5, -1), Dyadic(7, -1)).verified);
}

TEST_CASE("even multiplicity families never produce a witness") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<long> k(-64, 64);
  for (int t = 0; t < 200; ++t) {
    Rational c(k(rng), 16);
    c.canonicalize();
    IntervalPolynomial p;
    for (const Rational& x : {Rational(c * c), Rational(-2 * c), Rational(1)})
      p.coefficients.push_back(DyadicInterval::enclose(x, 80));
    Dyadic a(k(rng) - 65, -4);
    Dyadic b(k(rng) + 65, -4);
    CHECK_FALSE(odd_root_witness(p, a, b).verified);
  }
}

TEST_CASE("value exclusion from the spectrum") {
  CHECK(verify_value_not_in_spectrum(imat({{"1/2"}}), Dyadic(1L), 53));
  CHECK_FALSE(verify_value_not_in_spectrum(imat({{"1", "0"}, {"0", "2"}}), Dyadic(1L), 53));
  CHECK_FALSE(verify_value_not_in_spectrum(imat({{"1", "0"}, {"0", "2"}}), Dyadic(1L), 300));
  CHECK(verify_value_not_in_spectrum(imat({{"0", "-1"}, {"1", "0"}}), Dyadic(1L), 53));
}

TEST_CASE("companion matrices: cover soundness, counts and convergence") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> k(-64, 64);
  std::uniform_int_distribution<std::size_t> size(1, 4);
  const mpfr_prec_t prec = 53 + 32 * 8;
  for (int t = 0; t < 50; ++t) {
    std::vector<Rational> roots;
    const std::size_t n = size(rng);
    for (std::size_t i = 0; i < n; ++i) {
      roots.emplace_back(k(rng), 16);
      roots.back().canonicalize();
    }
    auto a = companion(roots);
    auto disks = root_enclosures(char_poly(to_interval(a, prec)), prec);
    CHECK(total_count(disks) == static_cast<int>(n));
    for (const auto& r : roots) CHECK(covered(disks, r, Rational(0)));
    CHECK(max_radius(disks) <= Dyadic(1, -20));

    auto coarse = root_enclosures(char_poly(to_interval(a, 120)), 120);
    auto fine = root_enclosures(char_poly(to_interval(a, 128)), 128);
    CHECK(max_radius(fine) <= max_radius(coarse));
  }
}

TEST_CASE("counts sum to the degree on random matrices") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<long> k(-256, 256);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 1 + t % 4;
    ora::RationalMatrix a(n, n);
    for (auto& x : a.data) x = Rational(k(rng), 256);
    auto disks = root_enclosures(char_poly(to_interval(a, 85)), 85);
    CHECK(total_count(disks) == static_cast<int>(n));
  }
}
