#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "linloop/interval_matrix.hpp"
#include "linloop/spectral.hpp"

namespace linloop {

/// How one budget level maps onto precision, subdivision depth and the
/// dyadic grid scanned for sign-change endpoints.
struct BudgetSchedule {
  static unsigned long precision(unsigned budget) { return 53 + 32ul * budget; }
  static int depth(unsigned budget) { return 4 + 2 * static_cast<int>(budget); }
  /// Grid denominator 2^grid_bits, values in [-2^grid_bits, 2^grid_bits].
  static long grid_bits(unsigned budget) { return static_cast<long>(budget) + 2; }
  /// Box examinations allowed per cover proof.
  static std::size_t max_boxes(unsigned budget) { return 400000ul + 100000ul * budget; }
};

/// Axis-aligned box in R^n that may meet the unit sphere.
struct SphereBox {
  IntervalVector coords;
  DyadicInterval norm_sq;
};

/// Half-width of the cube [-1-delta, 1+delta]^n that seeds every sphere cover.
Dyadic sphere_seed_halfwidth();

/// Retained boxes after `depth` uniform halvings of the seed cube; a box is
/// retained iff its norm_sq interval contains 1. The union covers S^{n-1}.
std::vector<SphereBox> sphere_cover(std::size_t n, int depth, mpfr_prec_t prec);

struct CoverStats {
  std::size_t boxes = 0;
  int max_depth = 0;
  mpfr_prec_t precision = 0;
};

enum class CoverStatus { Verified, Exhausted };

struct BudgetedResult {
  CoverStatus status = CoverStatus::Exhausted;
  CoverStats stats;
  [[nodiscard]] bool verified() const { return status == CoverStatus::Verified; }
};

struct CoverLimits {
  int max_depth = 4;
  mpfr_prec_t precision = kDefaultPrecision;
  std::size_t max_boxes = 400000;
};

/// Sound interval test on a (lambda box, v box) pair: true only if the open
/// predicate holds for every point of the pair.
using BoxPredicate = std::function<bool(const DyadicInterval& lambda, std::span<const DyadicInterval> v)>;

/// Proves: for all lambda in the segments and unit v, A v = lambda v implies
/// pred. Each pair is discharged when some coordinate of (A - lambda I) v
/// excludes 0 or pred holds; otherwise it is split, up to the depth limit.
BudgetedResult cover_verify(const std::vector<RealSegment>& segments, const IntervalMatrix& a,
                            const BoxPredicate& pred, const CoverLimits& limits);

/// exists j: sup(B_j v) < 0
BoxPredicate some_row_negative(const IntervalMatrix& b);
/// inf(B v) > 0 componentwise, or sup(B v) < 0 componentwise
BoxPredicate strictly_signed(const IntervalMatrix& b);

enum class Formula {
  LinearEscaping,
  LinearTrapped,
  AffineEscaping,
  AffineTrappedFixedPoint,
  AffineTrappedEigen,
};

const char* formula_name(Formula f);
std::optional<Formula> formula_from_name(std::string_view name);

struct SignChangeEvidence {
  Dyadic a;
  Dyadic b;
  DyadicInterval value_at_a;
  DyadicInterval value_at_b;
};

struct FixedPointEvidence {
  IntervalVector solution;     // (A - I)^{-1} b
  IntervalVector fixed_point;  // -(A - I)^{-1} b
  IntervalVector margins;      // B (A - I)^{-1} b + eta, all < 0
};

/// Finite evidence behind a verified formula. Every numeric field was
/// produced by interval evaluation at `precision` bits.
struct Certificate {
  Formula formula = Formula::LinearEscaping;
  unsigned budget = 0;
  unsigned long precision = 0;
  int depth_limit = 0;
  CoverStats cover;
  std::vector<RealSegment> segments;
  std::optional<SignChangeEvidence> sign_change;
  std::optional<FixedPointEvidence> fixed_point;
};

struct CheckResult {
  CoverStatus status = CoverStatus::Exhausted;
  Certificate certificate;
  [[nodiscard]] bool verified() const { return status == CoverStatus::Verified; }
};

/// Candidate (a, b) endpoints bracketing real root clusters above r, tried
/// in order: a tight bracket around each segment, then grid brackets from
/// the finest grid of this budget to the coarsest.
std::vector<std::pair<Dyadic, Dyadic>> bracket_candidates(const std::vector<RealSegment>& segments,
                                                          const Dyadic& threshold, unsigned budget);

// Single budget rounds on interval data already refined for that budget.
CheckResult escaping_linear_round(const IntervalMatrix& a, const IntervalMatrix& b_matrix, unsigned budget);
CheckResult trapped_linear_round(const IntervalMatrix& a, const IntervalMatrix& b_matrix, unsigned budget);
CheckResult escaping_affine_round(const IntervalMatrix& a, const IntervalVector& b, const IntervalMatrix& b_matrix,
                                  const IntervalVector& eta, unsigned budget);
CheckResult trapped_affine_round(const IntervalMatrix& a, const IntervalVector& b, const IntervalMatrix& b_matrix,
                                 const IntervalVector& eta, unsigned budget);

// Budgeted checkers. Each replays rounds 0..budget and stops at the first
// verified round, so Verified at one budget stays Verified at every larger
// budget.
CheckResult check_robust_escaping_linear(const IntervalMatrix& a, const IntervalMatrix& b_matrix, unsigned budget);
CheckResult check_robust_trapped_linear(const IntervalMatrix& a, const IntervalMatrix& b_matrix, unsigned budget);
CheckResult check_robust_escaping_affine(const IntervalMatrix& a, const IntervalVector& b,
                                         const IntervalMatrix& b_matrix, const IntervalVector& eta, unsigned budget);
CheckResult check_robust_trapped_affine(const IntervalMatrix& a, const IntervalVector& b,
                                        const IntervalMatrix& b_matrix, const IntervalVector& eta, unsigned budget);

}  // namespace linloop
