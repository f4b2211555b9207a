#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "support.hpp"

using namespace linloop;
using namespace testing;
namespace ora = linloop::oracle;

TEST_CASE("parse linear and affine instances") {
  auto lin = instance(R"({"kind":"linear","A":[["1/2"]],"B":[["1"]]})");
  CHECK(lin.kind == InstanceKind::Linear);
  CHECK(lin.n() == 1);
  CHECK(lin.m() == 1);
  CHECK(lin.a(0, 0).value() == q("1/2"));
  CHECK(lin.b_matrix(0, 0).value() == q("1"));

  auto aff = instance(R"({"kind":"affine","A":[["1/2"]],"b":["-1"],"B":[["1"]],"eta":["0"]})");
  CHECK(aff.kind == InstanceKind::Affine);
  CHECK(aff.b[0].value() == q("-1"));
  CHECK(aff.eta[0].value() == q("0"));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(instance(R"({"kind":"linear","A":[["1/0"]],"B":[["1"]]})"), ZeroDenominatorError);
  CHECK_THROWS_AS(instance(R"({"kind":"linear","A":[["1/2x"]],"B":[["1"]]})"), ParseError);
  CHECK_THROWS_AS(instance(R"({"kind":"linear","A":[],"B":[["1"]]})"), DimensionError);
  CHECK_THROWS_AS(instance(R"({"kind":"linear","A":[["1"]],"B":[]})"), DimensionError);
  CHECK_THROWS_AS(instance(R"({"kind":"linear","A":[["1","2"]],"B":[["1"]]})"), DimensionError);
  CHECK_THROWS_AS(instance(R"({"kind":"affine","A":[["1"]],"b":["1","2"],"B":[["1"]],"eta":["0"]})"),
                  DimensionError);
  CHECK_THROWS_AS(instance(R"({"kind":"linear","A":[["1"]],"B":[["1"]],"b":["1"]})"), ParseError);
  CHECK_THROWS_AS(instance("not json"), ParseError);
}

TEST_CASE("entry grammar") {
  CHECK(parse_entry("-3/6").value() == q("-1/2"));
  CHECK(parse_entry("0.125").value() == q("1/8"));
  CHECK(parse_entry("-1.1").value() == q("-11/10"));
  auto range = parse_entry("[0.9,1.1]");
  REQUIRE(range.is_interval());
  CHECK(range.range().lo == q("9/10"));
  CHECK(range.range().hi == q("11/10"));
  CHECK_THROWS_AS(parse_entry("[2,1]"), ParseError);
}

TEST_CASE("homogenise") {
  auto h = homogenise(instance(R"({"kind":"affine","A":[["1/2"]],"b":["-1"],"B":[["1"]],"eta":["0"]})"));
  CHECK(h == instance(R"({"kind":"linear","A":[["1/2","-1"],["0","1"]],"B":[["1","0"],["0","1"]]})"));

  auto z = homogenise(instance(R"({"kind":"affine","A":[["0"]],"b":["0"],"B":[["1"]],"eta":["0"]})"));
  CHECK(z == instance(R"({"kind":"linear","A":[["0","0"],["0","1"]],"B":[["1","0"],["0","1"]]})"));

  auto w = homogenise(
      instance(R"({"kind":"affine","A":[["1","0"],["0","1"]],"b":["1","2"],"B":[["1","1"]],"eta":["3"]})"));
  CHECK(w == instance(R"({"kind":"linear","A":[["1","0","1"],["0","1","2"],["0","0","1"]],
                          "B":[["1","1","-3"],["0","0","1"]]})"));
}

TEST_CASE("refine") {
  Entry third(q("1/3"));
  bool capped = false;
  auto x = third.refine(2, capped);
  CHECK(x.contains(q("1/3")));
  CHECK(x.width() <= Dyadic(1, -2));
  CHECK_FALSE(capped);

  Entry half(q("1/2"));
  for (unsigned long p : {0ul, 5ul, 300ul}) CHECK(half.refine(p, capped).is_point());

  auto range = parse_entry("[0.9,1.1]");
  auto r = range.refine(10, capped);
  CHECK(capped);
  CHECK(r.contains(q("9/10")));
  CHECK(r.contains(q("11/10")));

  auto inst = instance(R"({"kind":"linear","A":[["[0.9,1.1]"]],"B":[["1"]]})");
  CHECK(refine(inst, 10).precision_capped);
}

TEST_CASE("oracle entries") {
  Entry sqrt2 = Entry::oracle([](unsigned long p) {
    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(p) + 8;
    return DyadicInterval(rounded::sqrt(Dyadic(2L), prec, MPFR_RNDD), rounded::sqrt(Dyadic(2L), prec, MPFR_RNDU),
                          prec);
  });
  bool capped = false;
  auto x = sqrt2.refine(40, capped);
  CHECK(x.width() <= Dyadic(1, -40));
  CHECK(sqr(x).contains(q("2")));

  Entry broken = Entry::oracle([](unsigned long) { return DyadicInterval(Dyadic(0L), Dyadic(1L), 53); });
  CHECK_THROWS_AS(broken.refine(10, capped), OracleError);
}

TEST_CASE("refine is nested and shrinking") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> num(-100000, 100000);
  std::uniform_int_distribution<long> den(1, 999);
  for (int t = 0; t < 500; ++t) {
    Rational v(num(rng), den(rng));
    v.canonicalize();
    Entry e(v);
    bool capped = false;
    DyadicInterval prev = e.refine(0, capped);
    for (unsigned long p = 1; p < 200; p += 7) {
      auto cur = e.refine(p, capped);
      REQUIRE(cur.contains(v));
      REQUIRE(cur.subset_of(prev));
      REQUIRE(cur.width() <= Dyadic(1, -static_cast<long>(p)));
      prev = cur;
    }
  }
}

TEST_CASE("serialize then parse is the identity") {
  for (auto kind : {InstanceKind::Linear, InstanceKind::Affine}) {
    for (const auto& inst : ora::sample_instances(3, 2, kind, 20, 42)) {
      CHECK(parse_instance(serialize_instance(inst)) == inst);
      CHECK(parse_instance(serialize_instance(inst, 2)) == inst);
    }
  }
  auto mixed = instance(R"({"kind":"linear","A":[["[-1/4,3/8]","7/3"],["-2","0.5"]],"B":[["1","-1/9"]]})");
  CHECK(parse_instance(serialize_instance(mixed)) == mixed);
}

TEST_CASE("homogenisation preserves escape steps") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<long> k(-256, 256);
  int compared = 0;
  for (std::size_t n : {1u, 2u, 3u}) {
    for (const auto& inst : ora::sample_instances(n, 2, InstanceKind::Affine, 30, 100 + n)) {
      auto lin = homogenise(inst);
      auto a = ora::RationalMatrix::from_entries(inst.a);
      auto bm = ora::RationalMatrix::from_entries(inst.b_matrix);
      auto b = ora::from_entries(inst.b);
      auto eta = ora::from_entries(inst.eta);
      for (int s = 0; s < 20; ++s) {
        ora::RationalVector x;
        for (std::size_t i = 0; i < n; ++i) x.emplace_back(k(rng), 64);
        if (!ora::inside(bm, eta, x, ora::Boundary::Open)) continue;
        ora::RationalVector xh = x;
        xh.emplace_back(1);
        auto r1 = ora::simulate_escape(a, b, bm, eta, x, 60);
        auto r2 = ora::simulate_escape(ora::RationalMatrix::from_entries(lin.a),
                                       ora::RationalMatrix::from_entries(lin.b_matrix), xh, 60);
        CHECK(r1.status == r2.status);
        CHECK(r1.steps == r2.steps);
        ++compared;
      }
    }
  }
  CHECK(compared > 50);
}
