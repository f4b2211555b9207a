#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "support.hpp"

using namespace linloop;
using namespace testing;
namespace ora = linloop::oracle;

TEST_CASE("scalar operations") {
  CHECK((iv("1", "2") + iv("3", "4")).subset_of(iv("4", "6")));
  CHECK(iv("4", "6").subset_of(iv("1", "2") + iv("3", "4")));
  auto prod = iv("1", "2") * iv("-1", "1");
  CHECK(prod.contains(q("-2")));
  CHECK(prod.contains(q("2")));
  CHECK_THROWS_AS(iv("1") / iv("0", "1"), IntervalDivisionByZero);
  CHECK((iv("1") - iv("1/3")).contains(q("2/3")));
}

TEST_CASE("outward rounding encloses non-dyadic rationals") {
  auto third = iv("1/3");
  CHECK(third.contains(q("1/3")));
  CHECK_FALSE(third.is_point());
  CHECK(iv("1/2").is_point());
}

TEST_CASE("matrix products") {
  auto m = imat({{"2", "1"}, {"0", "3"}});
  auto id = IntervalMatrix::identity(2, 53);
  auto p = mat_mul(id, m);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(m(i, j).subset_of(p(i, j)));

  auto y = mat_vec(m, ivec({"1", "1"}));
  CHECK(y[0].contains(q("3")));
  CHECK(y[1].contains(q("3")));

  IntervalMatrix x(1, 1, 53);
  x(0, 0) = iv("1", "2");
  IntervalMatrix z(1, 1, 53);
  z(0, 0) = iv("-1", "1");
  auto s = mat_mul(x, z)(0, 0);
  CHECK(s.contains(q("-2")));
  CHECK(s.contains(q("2")));

  CHECK_THROWS_AS(mat_mul(imat({{"1", "2"}}), imat({{"1", "2"}})), DimensionMismatch);
}

TEST_CASE("interval solve") {
  auto x = interval_solve(imat({{"-1/2"}}), ivec({"1"}));
  CHECK(x[0].contains(q("-2")));

  auto y = interval_solve(IntervalMatrix::identity(2, 53), ivec({"3", "4"}));
  CHECK(y[0].contains(q("3")));
  CHECK(y[1].contains(q("4")));

  CHECK_THROWS_AS(interval_solve(imat({{"0", "0"}, {"0", "0"}}), ivec({"1", "1"})), SingularAtThisPrecision);
}

TEST_CASE("characteristic polynomials") {
  auto p = char_poly(imat({{"2", "1"}, {"0", "3"}}));
  REQUIRE(p.degree() == 2);
  CHECK(p.coefficients[0].contains(q("6")));
  CHECK(p.coefficients[1].contains(q("-5")));
  CHECK(p.coefficients[2].contains(q("1")));

  auto z = char_poly(imat({{"0"}}));
  CHECK(z.coefficients[0].contains(q("0")));
  CHECK(z.coefficients[1].contains(q("1")));

  auto r = char_poly(imat({{"0", "-1"}, {"1", "0"}}));
  CHECK(r.coefficients[0].contains(q("1")));
  CHECK(r.coefficients[1].contains(q("0")));
}

namespace {

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-100000, 100000);
  std::uniform_int_distribution<long> den(1, 1000);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("containment against exact rationals") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10000; ++t) {
    Rational a = random_rational(rng);
    Rational b = random_rational(rng);
    mpfr_prec_t prec = 20 + static_cast<mpfr_prec_t>(t % 5) * 40;
    auto x = DyadicInterval::enclose(a, prec);
    auto y = DyadicInterval::enclose(b, prec);
    REQUIRE((x + y).contains(Rational(a + b)));
    REQUIRE((x - y).contains(Rational(a - b)));
    REQUIRE((x * y).contains(Rational(a * b)));
    if (b != 0) REQUIRE((x / y).contains(Rational(a / b)));
  }
}

TEST_CASE("nestedness under refinement") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 500; ++t) {
    Rational a = random_rational(rng);
    Rational b = random_rational(rng);
    if (b == 0) continue;
    auto lo = [&](mpfr_prec_t p) {
      auto x = DyadicInterval::enclose(a, p);
      auto y = DyadicInterval::enclose(b, p);
      return (x * y + x) / y;
    };
    CHECK(lo(200).subset_of(lo(60)));
  }
}

TEST_CASE("char_poly contains the exact coefficients") {
  std::mt19937_64 rng(3);
  for (std::size_t n : {2u, 3u, 3u}) {
    for (int t = 0; t < 100; ++t) {
      ora::RationalMatrix a(n, n);
      for (auto& x : a.data) x = random_rational(rng);
      auto exact = ora::char_poly(a);
      auto enclosed = char_poly(to_interval(a, 80));
      for (std::size_t k = 0; k <= n; ++k) REQUIRE(enclosed.coefficients[k].contains(exact[k]));
    }
  }
}

TEST_CASE("interval solve contains the exact solution") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    ora::RationalMatrix m(3, 3);
    for (auto& x : m.data) x = random_rational(rng);
    ora::RationalVector rhs{random_rational(rng), random_rational(rng), random_rational(rng)};
    auto exact = ora::solve(m, rhs);
    if (!exact) continue;
    IntervalVector r;
    for (const auto& x : rhs) r.push_back(DyadicInterval::enclose(x, 120));
    try {
      auto x = interval_solve(to_interval(m, 120), r);
      for (std::size_t i = 0; i < 3; ++i) REQUIRE(x[i].contains((*exact)[i]));
    } catch (const SingularAtThisPrecision&) {
    }
  }
}
