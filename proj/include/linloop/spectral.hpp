#pragma once

#include <cstddef>
#include <vector>

#include "linloop/interval_matrix.hpp"

namespace linloop {

class LeadingCoefficientContainsZero : public std::domain_error {
 public:
  LeadingCoefficientContainsZero() : std::domain_error("leading coefficient interval contains zero") {}
};

/// Disk {z : |z - center| <= radius} holding `count` roots (with multiplicity).
struct ComplexDisk {
  DyadicInterval center_re;
  DyadicInterval center_im;
  Dyadic radius;
  int count = 0;

  /// True when the disk provably excludes the real point c.
  [[nodiscard]] bool excludes(const Dyadic& c) const;
  /// Exact containment test for a complex rational point.
  [[nodiscard]] bool contains(const Rational& re, const Rational& im) const;
};

struct RealSegment {
  Dyadic lo;
  Dyadic hi;
};

/// Covers all complex roots of every polynomial in the interval family.
///
/// Quadtree subdivision of a square around the Cauchy bound; a cell is
/// dropped once a Taylor-disk bound proves the family has no root there.
/// Surviving cells are clustered, and each cluster's root count is the
/// winding number of the family along a surrounding grid rectangle. Counts
/// always sum to the degree. If a winding count cannot be validated, a
/// single disk around the origin is returned.
std::vector<ComplexDisk> root_enclosures(const IntervalPolynomial& poly, mpfr_prec_t prec);

/// Real-axis shadows of the disks that meet the real axis, widened by one
/// ulp. Not clipped to any threshold.
std::vector<RealSegment> real_segments(const std::vector<ComplexDisk>& disks, mpfr_prec_t prec);

/// Segments covering every real eigenvalue >= r of every matrix in `a`.
std::vector<RealSegment> real_spectrum_above(const IntervalMatrix& a, const Dyadic& r, mpfr_prec_t prec);

struct SignWitness {
  bool verified = false;
  DyadicInterval value_at_a;
  DyadicInterval value_at_b;
};

/// Verified iff poly(a) and poly(b) have validated strict opposite signs,
/// which certifies an odd-multiplicity root in (a, b) for the whole family.
SignWitness odd_root_witness(const IntervalPolynomial& poly, const Dyadic& a, const Dyadic& b);

/// Verified only if every root disk at precision `prec` excludes c.
bool verify_value_not_in_spectrum(const IntervalMatrix& a, const Dyadic& c, mpfr_prec_t prec);

}  // namespace linloop
