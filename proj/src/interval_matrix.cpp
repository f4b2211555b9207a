#include "linloop/interval_matrix.hpp"

#include <algorithm>
#include <utility>

namespace linloop {

IntervalMatrix::IntervalMatrix(std::size_t rows, std::size_t cols, mpfr_prec_t prec)
    : rows_(rows), cols_(cols), entries_(rows * cols, DyadicInterval(0L, prec)) {}

IntervalMatrix IntervalMatrix::identity(std::size_t n, mpfr_prec_t prec) {
  IntervalMatrix m(n, n, prec);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = DyadicInterval(1L, prec);
  return m;
}

mpfr_prec_t IntervalMatrix::precision() const {
  mpfr_prec_t p = MPFR_PREC_MIN;
  for (const auto& e : entries_) p = std::max(p, e.precision());
  return p;
}

DyadicInterval dot(std::span<const DyadicInterval> x, std::span<const DyadicInterval> y) {
  if (x.size() != y.size()) throw DimensionMismatch("dot: length mismatch");
  if (x.empty()) return {};
  DyadicInterval acc = x[0] * y[0];
  for (std::size_t i = 1; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

IntervalMatrix mat_mul(const IntervalMatrix& x, const IntervalMatrix& y) {
  if (x.cols() != y.rows()) throw DimensionMismatch("mat_mul: inner dimensions differ");
  IntervalMatrix r(x.rows(), y.cols(), std::max(x.precision(), y.precision()));
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < y.cols(); ++j) {
      DyadicInterval acc = x(i, 0) * y(0, j);
      for (std::size_t k = 1; k < x.cols(); ++k) acc += x(i, k) * y(k, j);
      r(i, j) = std::move(acc);
    }
  }
  return r;
}

IntervalVector mat_vec(const IntervalMatrix& x, std::span<const DyadicInterval> v) {
  if (x.cols() != v.size()) throw DimensionMismatch("mat_vec: dimension mismatch");
  IntervalVector r;
  r.reserve(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) r.push_back(dot(x.row(i), v));
  return r;
}

IntervalMatrix operator-(const IntervalMatrix& x, const IntervalMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw DimensionMismatch("matrix subtraction: shape mismatch");
  IntervalMatrix r = x;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) r(i, j) = x(i, j) - y(i, j);
  }
  return r;
}

IntervalVector interval_solve(const IntervalMatrix& m, std::span<const DyadicInterval> rhs) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw DimensionMismatch("interval_solve: matrix not square");
  if (rhs.size() != n) throw DimensionMismatch("interval_solve: rhs length mismatch");

  IntervalMatrix a = m;
  IntervalVector r(rhs.begin(), rhs.end());

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    Dyadic best = a(col, col).mignitude();
    for (std::size_t row = col + 1; row < n; ++row) {
      Dyadic mig = a(row, col).mignitude();
      if (best < mig) {
        best = std::move(mig);
        pivot = row;
      }
    }
    if (best.is_zero()) throw SingularAtThisPrecision();
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      std::swap(r[col], r[pivot]);
    }
    for (std::size_t row = col + 1; row < n; ++row) {
      DyadicInterval factor = a(row, col) / a(col, col);
      for (std::size_t j = col + 1; j < n; ++j) a(row, j) -= factor * a(col, j);
      a(row, col) = DyadicInterval(0L, a(row, col).precision());
      r[row] -= factor * r[col];
    }
  }

  IntervalVector x(n);
  for (std::size_t i = n; i-- > 0;) {
    DyadicInterval acc = r[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a(i, j) * x[j];
    x[i] = acc / a(i, i);
  }
  return x;
}

DyadicInterval IntervalPolynomial::evaluate(const DyadicInterval& x) const {
  if (coefficients.empty()) return DyadicInterval(0L, x.precision());
  DyadicInterval acc = coefficients.back();
  for (std::size_t i = coefficients.size() - 1; i-- > 0;) acc = acc * x + coefficients[i];
  return acc;
}

IntervalPolynomial char_poly(const IntervalMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionMismatch("char_poly: matrix not square");
  const mpfr_prec_t prec = a.precision();

  // M_1 = I, c_{n-k} = -tr(A M_k) / k, M_{k+1} = A M_k + c_{n-k} I.
  IntervalPolynomial poly;
  poly.coefficients.assign(n + 1, DyadicInterval(0L, prec));
  poly.coefficients[n] = DyadicInterval(1L, prec);

  IntervalMatrix m = IntervalMatrix::identity(n, prec);
  for (std::size_t k = 1; k <= n; ++k) {
    IntervalMatrix am = mat_mul(a, m);
    DyadicInterval trace = am(0, 0);
    for (std::size_t i = 1; i < n; ++i) trace += am(i, i);
    DyadicInterval c = -(trace / static_cast<long>(k));
    poly.coefficients[n - k] = c;
    if (k < n) {
      for (std::size_t i = 0; i < n; ++i) am(i, i) += c;
      m = std::move(am);
    }
  }
  return poly;
}

}  // namespace linloop
