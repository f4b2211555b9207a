#include "linloop/semidecision.hpp"

#include <algorithm>
#include <array>
#include <string_view>
#include <utility>

#include "linloop/instance.hpp"

namespace linloop {

namespace {

struct Node {
  DyadicInterval lambda;
  IntervalVector v;
  int depth;
};

bool norm_may_be_one(std::span<const DyadicInterval> v, DyadicInterval& norm_sq) {
  norm_sq = sqr(v[0]);
  for (std::size_t i = 1; i < v.size(); ++i) norm_sq += sqr(v[i]);
  return norm_sq.contains(Rational(1));
}

// Some coordinate of (A - lambda I) v provably nonzero.
bool residual_excludes_zero(const IntervalMatrix& a, const DyadicInterval& lambda, std::span<const DyadicInterval> v) {
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    DyadicInterval acc = (a(i, i) - lambda) * v[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) acc += a(i, j) * v[j];
    }
    if (!acc.contains_zero()) return true;
  }
  return false;
}

IntervalVector seed_cube(std::size_t n, mpfr_prec_t prec) {
  Dyadic h = sphere_seed_halfwidth();
  return IntervalVector(n, DyadicInterval(-h, h, prec));
}

// All 2^n halvings of v, in a fixed order.
std::vector<IntervalVector> split_all(const IntervalVector& v) {
  std::vector<IntervalVector> out{IntervalVector{}};
  for (const auto& coord : v) {
    auto [left, right] = coord.bisect();
    std::vector<IntervalVector> next;
    next.reserve(out.size() * 2);
    for (const auto& prefix : out) {
      next.push_back(prefix);
      next.back().push_back(left);
      next.push_back(prefix);
      next.back().push_back(right);
    }
    out = std::move(next);
  }
  return out;
}

Dyadic max_width(const IntervalVector& v) {
  Dyadic w(0L);
  for (const auto& c : v) w = max(w, c.width());
  return w;
}

Dyadic grid_floor(const Dyadic& x, long bits) {
  Rational q = x.to_rational();
  mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(bits));
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return Dyadic(f, -bits);
}

Dyadic grid_ceil(const Dyadic& x, long bits) {
  Rational q = x.to_rational();
  mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(bits));
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return Dyadic(c, -bits);
}

CoverLimits limits_for(unsigned budget) {
  return {BudgetSchedule::depth(budget), working_precision(BudgetSchedule::precision(budget)),
          BudgetSchedule::max_boxes(budget)};
}

void absorb(CoverStats& total, const CoverStats& part) {
  total.boxes += part.boxes;
  total.max_depth = std::max(total.max_depth, part.max_depth);
  total.precision = std::max(total.precision, part.precision);
}

CheckResult make_result(Formula formula, unsigned budget) {
  CheckResult r;
  r.certificate.formula = formula;
  r.certificate.budget = budget;
  r.certificate.precision = BudgetSchedule::precision(budget);
  r.certificate.depth_limit = BudgetSchedule::depth(budget);
  r.certificate.cover.precision = working_precision(r.certificate.precision);
  return r;
}

CheckResult escaping_cover(Formula formula, const IntervalMatrix& a, const IntervalMatrix& b_matrix,
                           const Dyadic& threshold, unsigned budget) {
  CheckResult r = make_result(formula, budget);
  const CoverLimits limits = limits_for(budget);
  r.certificate.segments = real_spectrum_above(a, threshold, limits.precision);
  BudgetedResult cover = cover_verify(r.certificate.segments, a, some_row_negative(b_matrix), limits);
  r.certificate.cover = cover.stats;
  r.status = cover.status;
  return r;
}

// Odd-multiplicity eigenvalue above `threshold` whose unit eigenvectors are
// all strictly signed under B.
CheckResult odd_eigen_clause(Formula formula, const IntervalMatrix& a, const IntervalMatrix& b_matrix,
                             const Dyadic& threshold, unsigned budget) {
  CheckResult r = make_result(formula, budget);
  const CoverLimits limits = limits_for(budget);
  const IntervalPolynomial poly = char_poly(a);
  const auto segments = real_segments(root_enclosures(poly, limits.precision), limits.precision);
  const BoxPredicate pred = strictly_signed(b_matrix);
  for (const auto& [lo, hi] : bracket_candidates(segments, threshold, budget)) {
    SignWitness witness = odd_root_witness(poly, lo, hi);
    if (!witness.verified) continue;
    std::vector<RealSegment> bracket{RealSegment{lo, hi}};
    BudgetedResult cover = cover_verify(bracket, a, pred, limits);
    absorb(r.certificate.cover, cover.stats);
    if (cover.verified()) {
      r.status = CoverStatus::Verified;
      r.certificate.segments = std::move(bracket);
      r.certificate.sign_change = SignChangeEvidence{lo, hi, witness.value_at_a, witness.value_at_b};
      r.certificate.cover.max_depth = cover.stats.max_depth;
      return r;
    }
  }
  return r;
}

template <typename Round>
CheckResult replay_rounds(unsigned budget, Round round) {
  CheckResult last;
  CoverStats total;
  for (unsigned beta = 0; beta <= budget; ++beta) {
    last = round(beta);
    absorb(total, last.certificate.cover);
    if (last.verified()) break;
  }
  if (!last.verified()) last.certificate.cover = total;
  return last;
}

}  // namespace

Dyadic sphere_seed_halfwidth() { return Dyadic(Integer(17), -4); }

std::vector<SphereBox> sphere_cover(std::size_t n, int depth, mpfr_prec_t prec) {
  std::vector<SphereBox> level;
  DyadicInterval norm;
  IntervalVector seed = seed_cube(n, prec);
  if (norm_may_be_one(seed, norm)) level.push_back({seed, norm});
  for (int d = 0; d < depth; ++d) {
    std::vector<SphereBox> next;
    for (const auto& box : level) {
      for (auto& child : split_all(box.coords)) {
        if (norm_may_be_one(child, norm)) next.push_back({std::move(child), norm});
      }
    }
    level = std::move(next);
  }
  return level;
}

BudgetedResult cover_verify(const std::vector<RealSegment>& segments, const IntervalMatrix& a,
                            const BoxPredicate& pred, const CoverLimits& limits) {
  BudgetedResult result;
  result.stats.precision = limits.precision;
  result.status = CoverStatus::Verified;
  const std::size_t n = a.rows();
  DyadicInterval norm;

  for (const auto& segment : segments) {
    std::vector<Node> stack;
    stack.push_back({DyadicInterval(segment.lo, segment.hi, limits.precision), seed_cube(n, limits.precision), 0});
    while (!stack.empty()) {
      Node node = std::move(stack.back());
      stack.pop_back();
      ++result.stats.boxes;
      result.stats.max_depth = std::max(result.stats.max_depth, node.depth);
      if (!norm_may_be_one(node.v, norm)) continue;
      if (residual_excludes_zero(a, node.lambda, node.v)) continue;
      if (pred(node.lambda, node.v)) continue;
      if (node.depth >= limits.max_depth || result.stats.boxes >= limits.max_boxes) {
        result.status = CoverStatus::Exhausted;
        return result;
      }
      std::vector<DyadicInterval> lambdas;
      if (max_width(node.v) < node.lambda.width()) {
        auto [l, r] = node.lambda.bisect();
        lambdas = {std::move(l), std::move(r)};
      } else {
        lambdas = {node.lambda};
      }
      auto children = split_all(node.v);
      for (auto it = lambdas.rbegin(); it != lambdas.rend(); ++it) {
        for (auto c = children.rbegin(); c != children.rend(); ++c) stack.push_back({*it, *c, node.depth + 1});
      }
    }
  }
  return result;
}

BoxPredicate some_row_negative(const IntervalMatrix& b) {
  return [b](const DyadicInterval&, std::span<const DyadicInterval> v) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      if (dot(b.row(j), v).is_negative()) return true;
    }
    return false;
  };
}

BoxPredicate strictly_signed(const IntervalMatrix& b) {
  return [b](const DyadicInterval&, std::span<const DyadicInterval> v) {
    bool all_positive = true;
    bool all_negative = true;
    for (std::size_t j = 0; j < b.rows() && (all_positive || all_negative); ++j) {
      DyadicInterval s = dot(b.row(j), v);
      all_positive = all_positive && s.is_positive();
      all_negative = all_negative && s.is_negative();
    }
    return all_positive || all_negative;
  };
}

const char* formula_name(Formula f) {
  switch (f) {
    case Formula::LinearEscaping: return "linear_escaping";
    case Formula::LinearTrapped: return "linear_trapped";
    case Formula::AffineEscaping: return "affine_escaping";
    case Formula::AffineTrappedFixedPoint: return "affine_trapped_fixed_point";
    case Formula::AffineTrappedEigen: return "affine_trapped_eigen";
  }
  return "unknown";
}

std::optional<Formula> formula_from_name(std::string_view name) {
  for (Formula f : {Formula::LinearEscaping, Formula::LinearTrapped, Formula::AffineEscaping,
                    Formula::AffineTrappedFixedPoint, Formula::AffineTrappedEigen}) {
    if (name == formula_name(f)) return f;
  }
  return std::nullopt;
}

std::vector<std::pair<Dyadic, Dyadic>> bracket_candidates(const std::vector<RealSegment>& segments,
                                                          const Dyadic& threshold, unsigned budget) {
  const long range_bits = BudgetSchedule::grid_bits(budget);
  const Dyadic range = ldexp(Dyadic(1L), range_bits);
  const Dyadic neg_range = -range;
  std::vector<std::pair<Dyadic, Dyadic>> out;
  auto offer = [&](Dyadic a, Dyadic b) {
    if (!(threshold < a) || !(a < b) || a < neg_range || range < b) return;
    for (const auto& [x, y] : out) {
      if (x == a && y == b) return;
    }
    out.emplace_back(std::move(a), std::move(b));
  };

  for (const auto& s : segments) {
    if (s.hi <= threshold) continue;
    const mpfr_prec_t prec = std::max(s.lo.precision(), s.hi.precision()) + 8;
    // Tight bracket: one segment width beyond each end.
    Dyadic w = rounded::sub(s.hi, s.lo, prec, MPFR_RNDU);
    Dyadic a = rounded::sub(s.lo, w, prec, MPFR_RNDD);
    Dyadic b = rounded::add(s.hi, w, prec, MPFR_RNDU);
    if (a <= threshold && threshold < s.lo) {
      a = ldexp(rounded::add(threshold, s.lo, prec + 64, MPFR_RNDN), -1);
    }
    offer(a, b);

    for (long g = range_bits; g >= 0; --g) {
      const Dyadic step = ldexp(Dyadic(1L), -g);
      Dyadic ga = grid_floor(s.lo, g);
      if (ga == s.lo) ga = rounded::sub(ga, step, prec + 64, MPFR_RNDN);
      Dyadic gb = grid_ceil(s.hi, g);
      if (gb == s.hi) gb = rounded::add(gb, step, prec + 64, MPFR_RNDN);
      if (ga <= threshold) {
        ga = rounded::add(grid_floor(threshold, g), step, prec + 64, MPFR_RNDN);
        if (!(ga < s.lo)) continue;
      }
      offer(std::move(ga), std::move(gb));
    }
  }
  return out;
}

CheckResult escaping_linear_round(const IntervalMatrix& a, const IntervalMatrix& b_matrix, unsigned budget) {
  return escaping_cover(Formula::LinearEscaping, a, b_matrix, Dyadic(0L), budget);
}

CheckResult trapped_linear_round(const IntervalMatrix& a, const IntervalMatrix& b_matrix, unsigned budget) {
  return odd_eigen_clause(Formula::LinearTrapped, a, b_matrix, Dyadic(0L), budget);
}

CheckResult escaping_affine_round(const IntervalMatrix& a, const IntervalVector& b, const IntervalMatrix& b_matrix,
                                  const IntervalVector& eta, unsigned budget) {
  HomogenisedData hom = homogenise(a, b, b_matrix, eta);
  return escaping_cover(Formula::AffineEscaping, hom.a, hom.b_matrix, Dyadic(1L), budget);
}

CheckResult trapped_affine_round(const IntervalMatrix& a, const IntervalVector& b, const IntervalMatrix& b_matrix,
                                 const IntervalVector& eta, unsigned budget) {
  CheckResult r = make_result(Formula::AffineTrappedFixedPoint, budget);
  const mpfr_prec_t prec = working_precision(r.certificate.precision);
  if (verify_value_not_in_spectrum(a, Dyadic(1L), prec)) {
    try {
      IntervalVector solution = interval_solve(a - IntervalMatrix::identity(a.rows(), prec), b);
      IntervalVector margins = mat_vec(b_matrix, solution);
      for (std::size_t j = 0; j < margins.size(); ++j) margins[j] += eta[j];
      if (std::all_of(margins.begin(), margins.end(), [](const DyadicInterval& x) { return x.is_negative(); })) {
        IntervalVector fixed;
        for (const auto& s : solution) fixed.push_back(-s);
        r.status = CoverStatus::Verified;
        r.certificate.fixed_point = FixedPointEvidence{std::move(solution), std::move(fixed), std::move(margins)};
        return r;
      }
    } catch (const SingularAtThisPrecision&) {
      // retried at the next budget
    }
  }
  return odd_eigen_clause(Formula::AffineTrappedEigen, a, b_matrix, Dyadic(1L), budget);
}

CheckResult check_robust_escaping_linear(const IntervalMatrix& a, const IntervalMatrix& b_matrix, unsigned budget) {
  return replay_rounds(budget, [&](unsigned beta) { return escaping_linear_round(a, b_matrix, beta); });
}

CheckResult check_robust_trapped_linear(const IntervalMatrix& a, const IntervalMatrix& b_matrix, unsigned budget) {
  return replay_rounds(budget, [&](unsigned beta) { return trapped_linear_round(a, b_matrix, beta); });
}

CheckResult check_robust_escaping_affine(const IntervalMatrix& a, const IntervalVector& b,
                                         const IntervalMatrix& b_matrix, const IntervalVector& eta, unsigned budget) {
  return replay_rounds(budget, [&](unsigned beta) { return escaping_affine_round(a, b, b_matrix, eta, beta); });
}

CheckResult check_robust_trapped_affine(const IntervalMatrix& a, const IntervalVector& b,
                                        const IntervalMatrix& b_matrix, const IntervalVector& eta, unsigned budget) {
  return replay_rounds(budget, [&](unsigned beta) { return trapped_affine_round(a, b, b_matrix, eta, beta); });
}

}  // namespace linloop
