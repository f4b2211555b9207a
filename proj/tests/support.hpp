#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "linloop/instance.hpp"
#include "linloop/interval_matrix.hpp"
#include "linloop/oracle.hpp"

namespace testing {

using linloop::DyadicInterval;
using linloop::IntervalMatrix;
using linloop::IntervalVector;
using linloop::Rational;

inline Rational q(const char* s) {
  Rational r(s, 10);
  r.canonicalize();
  return r;
}

inline DyadicInterval iv(const char* s, mpfr_prec_t prec = 53) { return DyadicInterval::enclose(q(s), prec); }

inline DyadicInterval iv(const char* lo, const char* hi, mpfr_prec_t prec = 53) {
  return DyadicInterval::enclose(q(lo), q(hi), prec);
}

inline IntervalMatrix imat(std::initializer_list<std::initializer_list<const char*>> rows, mpfr_prec_t prec = 53) {
  IntervalMatrix m(rows.size(), rows.begin()->size(), prec);
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (const char* s : r) m(i, j++) = iv(s, prec);
    ++i;
  }
  return m;
}

inline IntervalVector ivec(std::initializer_list<const char*> xs, mpfr_prec_t prec = 53) {
  IntervalVector v;
  for (const char* s : xs) v.push_back(iv(s, prec));
  return v;
}

inline IntervalMatrix to_interval(const linloop::oracle::RationalMatrix& m, mpfr_prec_t prec) {
  IntervalMatrix out(m.rows, m.cols, prec);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) out(i, j) = DyadicInterval::enclose(m(i, j), prec);
  }
  return out;
}

inline linloop::LoopInstance instance(const std::string& json) { return linloop::parse_instance(json); }

}  // namespace testing
