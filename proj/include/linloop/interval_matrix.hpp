#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "linloop/interval.hpp"

namespace linloop {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by interval_solve when no pivot excludes zero. Retriable at a
/// higher precision; it never certifies singularity.
class SingularAtThisPrecision : public std::runtime_error {
 public:
  SingularAtThisPrecision() : std::runtime_error("no pivot interval excludes zero at this precision") {}
};

using IntervalVector = std::vector<DyadicInterval>;

/// Dense row-major matrix of intervals.
class IntervalMatrix {
 public:
  IntervalMatrix() = default;
  IntervalMatrix(std::size_t rows, std::size_t cols, mpfr_prec_t prec);

  static IntervalMatrix identity(std::size_t n, mpfr_prec_t prec);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  DyadicInterval& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const DyadicInterval& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  [[nodiscard]] std::span<const DyadicInterval> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }
  [[nodiscard]] const std::vector<DyadicInterval>& entries() const { return entries_; }

  /// Largest working precision over all entries.
  [[nodiscard]] mpfr_prec_t precision() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<DyadicInterval> entries_;
};

DyadicInterval dot(std::span<const DyadicInterval> x, std::span<const DyadicInterval> y);
IntervalMatrix mat_mul(const IntervalMatrix& x, const IntervalMatrix& y);
IntervalVector mat_vec(const IntervalMatrix& x, std::span<const DyadicInterval> v);
IntervalMatrix operator-(const IntervalMatrix& x, const IntervalMatrix& y);

/// Gaussian elimination with partial pivoting in interval arithmetic.
///
/// The pivot in each column is the candidate with the largest mignitude;
/// ties go to the lowest row. The result contains every solution of
/// M0 x = r0 with M0 in `m` and r0 in `rhs`.
IntervalVector interval_solve(const IntervalMatrix& m, std::span<const DyadicInterval> rhs);

/// Polynomial with interval coefficients, lowest degree first.
struct IntervalPolynomial {
  std::vector<DyadicInterval> coefficients;

  [[nodiscard]] std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
  [[nodiscard]] const DyadicInterval& leading() const { return coefficients.back(); }
  [[nodiscard]] DyadicInterval evaluate(const DyadicInterval& x) const;
};

/// Monic characteristic polynomial det(tI - A) via the Faddeev-LeVerrier
/// recurrence. The only divisions are by the integers 1..n.
IntervalPolynomial char_poly(const IntervalMatrix& a);

}  // namespace linloop
