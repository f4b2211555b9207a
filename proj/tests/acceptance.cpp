// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "linloop/decide.hpp"
#include "linloop/oracle.hpp"
#include "linloop/spectral.hpp"
#include "support.hpp"

using namespace linloop;
using namespace testing;
namespace ora = linloop::oracle;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Decided {
  std::string label;
  LoopInstance inst;
  Verdict verdict;
};

// Every decided instance of criteria 1-4, audited by 5 and 7.
std::vector<Decided> corpus;

struct Criterion {
  int id;
  std::string name;
  bool passed = true;
  std::ostringstream notes;

  void fail(const std::string& why) {
    passed = false;
    notes << " | " << why;
  }
};

std::string verdict_name(const Verdict& v) { return outcome_name(v.outcome); }

Verdict timed_decide(Criterion& c, const std::string& label, const LoopInstance& inst, double limit, unsigned budget = 8) {
  auto t0 = Clock::now();
  Verdict v = decide(inst, budget);
  double s = seconds_since(t0);
  if (s >= limit) c.fail(label + " took " + std::to_string(s) + " s");
  corpus.push_back({label, inst, v});
  return v;
}

void expect(Criterion& c, const std::string& label, const Verdict& v, Outcome want) {
  if (v.outcome != want) c.fail(label + ": got " + verdict_name(v) + ", want " + outcome_name(want));
}

const char* kHalvingShift = R"({"kind":"affine","A":[["1/2"]],"b":["-1"],"B":[["1"]],"eta":["0"]})";
const char* kHalvingLinear = R"({"kind":"linear","A":[["1/2"]],"B":[["1"]]})";
const char* kHalvingAffine = R"({"kind":"affine","A":[["1/2"]],"b":["0"],"B":[["1"]],"eta":["0"]})";

void halving_instances(Criterion& c) {
  auto f1 = instance(kHalvingShift);
  auto f2 = instance(kHalvingLinear);
  auto f2a = instance(kHalvingAffine);
  expect(c, "halving shift affine", timed_decide(c, "halving shift affine", f1, 10), Outcome::RobustEscaping);
  expect(c, "halving linear", timed_decide(c, "halving linear", f2, 10), Outcome::RobustTrapped);
  expect(c, "halving affine", timed_decide(c, "halving affine", f2a, 10), Outcome::Unknown);
  expect(c, "halving shift homogenised", timed_decide(c, "halving shift homogenised", homogenise(f1), 10), Outcome::Unknown);
  expect(c, "halving affine homogenised", timed_decide(c, "halving affine homogenised", homogenise(f2a), 10),
         Outcome::Unknown);
}

void curated_suite(Criterion& c) {
  expect(c, "rotation",
         timed_decide(c, "rotation", instance(R"({"kind":"linear","A":[["0","-1"],["1","0"]],"B":[["1","0"],["0","1"]]})"),
                      30),
         Outcome::RobustEscaping);
  expect(c, "doubling map", timed_decide(c, "doubling map", instance(R"({"kind":"linear","A":[["2"]],"B":[["1"]]})"), 30),
         Outcome::RobustTrapped);

  auto fixed = timed_decide(c, "fixed point",
                            instance(R"({"kind":"affine","A":[["1/2"]],"b":["1"],"B":[["1"]],"eta":["0"]})"), 30);
  expect(c, "fixed point", fixed, Outcome::RobustTrapped);
  if (!fixed.certificate || fixed.certificate->formula != Formula::AffineTrappedFixedPoint ||
      !fixed.certificate->fixed_point || !fixed.certificate->fixed_point->fixed_point[0].contains(Rational(2))) {
    c.fail("fixed point: certificate is not a fixed-point enclosure containing 2");
  }

  expect(c, "identity boundary",
         timed_decide(c, "identity boundary", instance(R"({"kind":"linear","A":[["1","0"],["0","1"]],"B":[["1","0"]]})"),
                      30),
         Outcome::Unknown);
}

void oracle_agreement(Criterion& c) {
  std::size_t halted = 0;
  std::size_t unknown_off_boundary = 0;
  std::size_t index = 0;
  for (std::size_t m : {1u, 2u, 3u}) {
    const std::size_t count = m == 1 ? 168 : 166;
    for (const auto& inst : ora::sample_instances(1, m, InstanceKind::Linear, count, 2024 + m)) {
      const std::string label = "1x1 #" + std::to_string(index++);
      Verdict v = timed_decide(c, label, inst, 30);
      const Rational a = inst.a(0, 0).value();
      const auto col = ora::RationalMatrix::from_entries(inst.b_matrix).data;
      const auto truth = ora::decide_1x1(a, col);
      if (v.outcome == Outcome::Unknown) {
        if (!ora::is_boundary_1x1(a, col)) ++unknown_off_boundary;
        continue;
      }
      ++halted;
      const bool says_trapped = v.outcome == Outcome::RobustTrapped;
      if (says_trapped != (truth == ora::Answer::Trapped)) {
        c.fail(label + " contradicts the closed form: " + serialize_instance(inst));
      }
    }
  }
  c.notes << " halted " << halted << "/" << index << ", unknown off the boundary " << unknown_off_boundary;
}

void measure_zero_boundary(Criterion& c) {
  auto t0 = Clock::now();
  std::size_t halted = 0;
  std::size_t total = 0;
  std::uint64_t seed = 9000;
  for (std::size_t n : {2u, 3u}) {
    for (std::size_t m : {1u, 2u, 3u}) {
      const std::size_t count = (n == 2 && m < 3) ? 34 : 33;
      for (const auto& inst : ora::sample_instances(n, m, InstanceKind::Linear, count, seed++)) {
        const std::string label = "random " + std::to_string(n) + "x" + std::to_string(m) + " #" + std::to_string(total);
        Verdict v = timed_decide(c, label, inst, 1800);
        ++total;
        if (v.outcome != Outcome::Unknown) ++halted;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  c.notes << " halted " << halted << "/" << total << " in " << elapsed << " s";
  if (total != 200) c.fail("sampled " + std::to_string(total) + " instances, want 200");
  if (halted * 10 < total * 9) c.fail("halting rate below 90%");
  if (elapsed > 1800) c.fail("runtime above 30 min");
}

void simulation_audits(Criterion& c) {
  std::size_t audited = 0;
  for (const auto& d : corpus) {
    if (d.verdict.outcome == Outcome::Unknown) continue;
    auto result = ora::audit_verdict(d.inst, d.verdict);
    ++audited;
    if (!result.passed) c.fail(d.label + ": " + result.detail);
  }
  c.notes << " audited " << audited << " verified verdicts";
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-1000000, 1000000);
  std::uniform_int_distribution<long> den(1, 9999);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

ora::RationalMatrix companion(const std::vector<Rational>& roots) {
  std::vector<Rational> coeff{Rational(1)};
  for (const auto& r : roots) {
    std::vector<Rational> next(coeff.size() + 1, Rational(0));
    for (std::size_t k = 0; k < coeff.size(); ++k) {
      next[k + 1] += coeff[k];
      next[k] -= r * coeff[k];
    }
    coeff = next;
  }
  const std::size_t n = roots.size();
  ora::RationalMatrix m(n, n);
  for (std::size_t i = 1; i < n; ++i) m(i, i - 1) = 1;
  for (std::size_t i = 0; i < n; ++i) m(i, n - 1) = -coeff[i];
  return m;
}

void numerics_properties(Criterion& c) {
  std::mt19937_64 rng(6);
  std::size_t misses = 0;
  for (int t = 0; t < 10000; ++t) {
    Rational a = random_rational(rng);
    Rational b = random_rational(rng);
    auto x = DyadicInterval::enclose(a, 53);
    auto y = DyadicInterval::enclose(b, 53);
    if (!iv_add(x, y).contains(Rational(a + b))) ++misses;
    if (!iv_sub(x, y).contains(Rational(a - b))) ++misses;
    if (!iv_mul(x, y).contains(Rational(a * b))) ++misses;
    if (b != 0 && !iv_div(x, y).contains(Rational(a / b))) ++misses;
  }
  if (misses) c.fail(std::to_string(misses) + " scalar containment failures");

  std::size_t poly_misses = 0;
  for (int t = 0; t < 200; ++t) {
    ora::RationalMatrix a(3, 3);
    for (auto& x : a.data) x = random_rational(rng);
    auto exact = ora::char_poly(a);
    auto enclosed = char_poly(to_interval(a, 53));
    for (std::size_t k = 0; k <= 3; ++k) {
      if (!enclosed.coefficients[k].contains(exact[k])) ++poly_misses;
    }
  }
  if (poly_misses) c.fail(std::to_string(poly_misses) + " char_poly containment failures");

  const mpfr_prec_t prec = working_precision(BudgetSchedule::precision(8));
  std::uniform_int_distribution<long> root(-128, 128);
  std::uniform_int_distribution<std::size_t> size(1, 4);
  std::size_t root_misses = 0;
  std::size_t wide = 0;
  for (int t = 0; t < 50; ++t) {
    std::vector<Rational> roots;
    const std::size_t n = size(rng);
    for (std::size_t i = 0; i < n; ++i) {
      roots.emplace_back(root(rng), 32);
      roots.back().canonicalize();
    }
    auto disks = root_enclosures(char_poly(to_interval(companion(roots), prec)), prec);
    for (const auto& r : roots) {
      bool hit = false;
      for (const auto& d : disks) hit = hit || d.contains(r, Rational(0));
      if (!hit) ++root_misses;
    }
    for (const auto& d : disks) {
      if (d.radius > Dyadic(1, -20)) ++wide;
    }
  }
  if (root_misses) c.fail(std::to_string(root_misses) + " known roots outside every disk");
  if (wide) c.fail(std::to_string(wide) + " disks wider than 2^-20");
}

struct CheckPair {
  bool escaping;
  bool trapped;
};

CheckPair check_both(const LoopInstance& inst, unsigned beta) {
  auto d = refine(inst, BudgetSchedule::precision(beta));
  if (d.kind == InstanceKind::Linear) {
    return {check_robust_escaping_linear(d.a, d.b_matrix, beta).verified(),
            check_robust_trapped_linear(d.a, d.b_matrix, beta).verified()};
  }
  return {check_robust_escaping_affine(d.a, d.b, d.b_matrix, d.eta, beta).verified(),
          check_robust_trapped_affine(d.a, d.b, d.b_matrix, d.eta, beta).verified()};
}

void exclusion_and_monotonicity(Criterion& c) {
  std::size_t exclusive_violations = 0;
  std::size_t monotone_violations = 0;
  for (const auto& d : corpus) {
    CheckPair prev{false, false};
    for (unsigned beta = 0; beta <= 8; ++beta) {
      CheckPair cur = check_both(d.inst, beta);
      if (cur.escaping && cur.trapped) {
        ++exclusive_violations;
        c.fail(d.label + ": both checkers verified at budget " + std::to_string(beta));
      }
      if ((prev.escaping && !cur.escaping) || (prev.trapped && !cur.trapped)) {
        ++monotone_violations;
        c.fail(d.label + ": verification lost at budget " + std::to_string(beta));
      }
      prev = cur;
    }
  }
  c.notes << " checked " << corpus.size() << " instances at budgets 0..8";
}

}  // namespace

int main() {
  struct Step {
    int id;
    const char* name;
    void (*run)(Criterion&);
  };
  const Step steps[] = {
      {1, "halving map instances and their homogenisations", halving_instances},
      {2, "curated suite", curated_suite},
      {3, "1x1 closed-form agreement", oracle_agreement},
      {4, "random instances halt within budget 8", measure_zero_boundary},
      {5, "simulation audits of verified verdicts", simulation_audits},
      {6, "numerics properties", numerics_properties},
      {7, "mutual exclusion and budget monotonicity", exclusion_and_monotonicity},
  };

  bool all = true;
  for (const auto& step : steps) {
    Criterion criterion{step.id, step.name};
    auto t0 = Clock::now();
    try {
      step.run(criterion);
    } catch (const std::exception& e) {
      criterion.fail(std::string("exception: ") + e.what());
    }
    all = all && criterion.passed;
    std::printf("[%s] criterion %d: %s (%.1f s)%s\n", criterion.passed ? "PASS" : "FAIL", criterion.id,
                criterion.name.c_str(), seconds_since(t0), criterion.notes.str().c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
