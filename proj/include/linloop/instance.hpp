#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "linloop/interval_matrix.hpp"

namespace linloop {

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InstanceError {
 public:
  using InstanceError::InstanceError;
};

class ZeroDenominatorError : public ParseError {
 public:
  using ParseError::ParseError;
};

class DimensionError : public InstanceError {
 public:
  using InstanceError::InstanceError;
};

class OracleError : public InstanceError {
 public:
  using InstanceError::InstanceError;
};

/// Closed rational interval used for physically uncertain entries.
struct RationalRange {
  Rational lo;
  Rational hi;
};

/// One real number of a loop instance: an exact rational, a fixed interval,
/// or a precision-indexed oracle.
///
/// An oracle must return, for every p, an interval of width <= 2^-p that
/// contains the represented real, nested in p. Fixed intervals cap the
/// precision that refinement can reach.
class Entry {
 public:
  using Oracle = std::function<DyadicInterval(unsigned long)>;

  Entry() : source_(Rational(0)) {}
  explicit Entry(Rational value);
  static Entry interval(Rational lo, Rational hi);
  static Entry oracle(Oracle fn);

  [[nodiscard]] bool is_exact() const { return std::holds_alternative<Rational>(source_); }
  [[nodiscard]] bool is_interval() const { return std::holds_alternative<RationalRange>(source_); }
  [[nodiscard]] bool is_oracle() const { return std::holds_alternative<Oracle>(source_); }
  [[nodiscard]] const Rational& value() const { return std::get<Rational>(source_); }
  [[nodiscard]] const RationalRange& range() const { return std::get<RationalRange>(source_); }

  /// Enclosure at precision p. Sets `capped` when the result is wider
  /// than 2^-p (fixed interval entries).
  DyadicInterval refine(unsigned long p, bool& capped) const;

  [[nodiscard]] Entry negated() const;
  /// Entry-string form; throws for oracle entries.
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const Entry& a, const Entry& b);

 private:
  std::variant<Rational, RationalRange, Oracle> source_;
};

struct EntryMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Entry> entries;

  EntryMatrix() = default;
  EntryMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}

  Entry& operator()(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
  const Entry& operator()(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }

  friend bool operator==(const EntryMatrix&, const EntryMatrix&) = default;
};

enum class InstanceKind { Linear, Affine };

/// A linear instance (A, B) or an affine instance (A, b, B, eta).
/// Immutable after construction in practice; all members are values.
struct LoopInstance {
  InstanceKind kind = InstanceKind::Linear;
  EntryMatrix a;
  EntryMatrix b_matrix;
  std::vector<Entry> b;    // affine only
  std::vector<Entry> eta;  // affine only

  [[nodiscard]] std::size_t n() const { return a.rows; }
  [[nodiscard]] std::size_t m() const { return b_matrix.rows; }
  [[nodiscard]] bool is_rational() const;

  /// Throws DimensionError when shapes are inconsistent.
  void validate() const;

  friend bool operator==(const LoopInstance&, const LoopInstance&) = default;
};

/// Interval data of an instance at one precision.
struct RefinedInstance {
  InstanceKind kind = InstanceKind::Linear;
  IntervalMatrix a;
  IntervalMatrix b_matrix;
  IntervalVector b;
  IntervalVector eta;
  unsigned long precision = 0;
  bool precision_capped = false;
};

/// Parses one entry string: "p", "p/q", "d.ddd" or "[lo,hi]".
Entry parse_entry(std::string_view text);

/// Parses an instance file (JSON object with kind, A, B[, b, eta]).
LoopInstance parse_instance(std::string_view text);
std::string serialize_instance(const LoopInstance& inst, int indent = -1);

/// A-hat = [[A, b], [0, 1]], B-hat = [[B, -eta], [0, 1]] as a linear instance.
LoopInstance homogenise(const LoopInstance& affine);

struct HomogenisedData {
  IntervalMatrix a;
  IntervalMatrix b_matrix;
};
HomogenisedData homogenise(const IntervalMatrix& a, const IntervalVector& b, const IntervalMatrix& b_matrix,
                           const IntervalVector& eta);

/// Every returned interval has width <= 2^-p unless capped by a fixed
/// interval entry, contains the represented real, and is nested in p.
RefinedInstance refine(const LoopInstance& inst, unsigned long p);

/// Working precision (mantissa bits) attached to data refined at p.
mpfr_prec_t working_precision(unsigned long p);

}  // namespace linloop
