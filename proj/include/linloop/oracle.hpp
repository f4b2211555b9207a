#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "linloop/decide.hpp"
#include "linloop/instance.hpp"

namespace linloop {

/// Exact reference machinery. Nothing here rounds.
namespace oracle {

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using RationalVector = std::vector<Rational>;

struct RationalMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> data;

  RationalMatrix() = default;
  RationalMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  RationalMatrix(std::size_t r, std::size_t c, std::vector<Rational> values);
  static RationalMatrix identity(std::size_t n);
  /// Throws PreconditionError unless every entry is an exact rational.
  static RationalMatrix from_entries(const EntryMatrix& m);

  Rational& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

RationalVector from_entries(const std::vector<Entry>& v);
RationalVector mat_vec(const RationalMatrix& m, const RationalVector& x);
RationalMatrix mat_mul(const RationalMatrix& x, const RationalMatrix& y);
Rational dot(const RationalVector& x, const RationalVector& y);

/// Ascending coefficients of det(lambda I - A), monic.
RationalVector char_poly(const RationalMatrix& a);
Rational evaluate(const RationalVector& poly, const Rational& x);
/// Unique solution of M x = rhs, or nullopt when M is singular.
std::optional<RationalVector> solve(const RationalMatrix& m, const RationalVector& rhs);
/// A nonzero vector of the kernel, or nullopt when M is regular.
std::optional<RationalVector> null_vector(const RationalMatrix& m);

enum class Boundary {
  Open,    // escape when some B_j x <= eta_j
  Closed,  // escape when some B_j x < eta_j
};

enum class SimulationStatus { EscapedAt, StillInside, SizeLimitExceeded };

struct SimulationResult {
  SimulationStatus status = SimulationStatus::StillInside;
  std::size_t steps = 0;  // escape step, or steps completed
};

/// Numerator or denominator bit length that aborts a simulation.
inline constexpr std::size_t kMaxSimulationBits = 1000000;

/// Iterates x -> A x and reports the first k >= 1 whose orbit point leaves
/// P(B). Throws PreconditionError if x itself is not inside.
SimulationResult simulate_escape(const RationalMatrix& a, const RationalMatrix& b_matrix, const RationalVector& x,
                                 std::size_t kmax, Boundary boundary = Boundary::Open);
/// Affine variant: x -> A x + b against P(B, eta) = {x : B x > eta}.
SimulationResult simulate_escape(const RationalMatrix& a, const RationalVector& b, const RationalMatrix& b_matrix,
                                 const RationalVector& eta, const RationalVector& x, std::size_t kmax,
                                 Boundary boundary = Boundary::Open);
SimulationResult simulate_escape(const LoopInstance& inst, const RationalVector& x, std::size_t kmax,
                                 Boundary boundary = Boundary::Open);

bool inside(const RationalMatrix& b_matrix, const RationalVector& eta, const RationalVector& x, Boundary boundary);

enum class Answer { Escaping, Trapped };
const char* answer_name(Answer a);

/// Closed-form answer for n = 1: trapped iff a > 0 and every B_j is
/// nonzero with one common sign.
Answer decide_1x1(const Rational& a, const RationalVector& b_column);

/// True when the 1x1 instance sits on the boundary between the trapped and
/// escaping sets, where any verdict other than Unknown would be suspicious.
bool is_boundary_1x1(const Rational& a, const RationalVector& b_column);

/// v + (eps/4) u1/(B1.B1) - (eps/4) u2/(B2.B2) where u1, u2 are B1, B2 with
/// the component along the other row removed. The result satisfies
/// B1.v' > 0 and B2.v' < 0.
RationalVector perturb_constraint(const RationalVector& v, const RationalVector& b1, const RationalVector& b2,
                                  const Rational& eps);

/// Seed-reproducible instances with entries k/256, k uniform in [-256, 256].
std::vector<LoopInstance> sample_instances(std::size_t n, std::size_t m, InstanceKind kind, std::size_t count,
                                           std::uint64_t seed);
/// Writes `<seed>_<index>.json` files; returns the written paths.
std::vector<std::string> write_samples(const std::vector<LoopInstance>& instances, std::uint64_t seed,
                                       const std::string& directory);

struct AuditResult {
  bool passed = false;
  std::string detail;
  std::size_t points = 0;        // start points simulated
  std::size_t inconclusive = 0;  // stopped by the size guard
};

/// Exhibits a witness whose orbit stays in the closed polyhedron for
/// `steps` steps: the exact fixed point for the fixed-point clause, a
/// close eigenvector approximation for the eigenvalue clauses.
AuditResult audit_trapped(const LoopInstance& inst, const Certificate& cert, std::size_t steps = 200);

/// Rejection-samples up to `points` dyadic start points strictly inside the
/// polyhedron and checks each orbit leaves within `steps` steps.
AuditResult audit_escaping(const LoopInstance& inst, std::size_t points = 100, std::size_t steps = 10000,
                           std::uint64_t seed = 1);

/// Dispatches on the verdict; Unknown passes trivially.
AuditResult audit_verdict(const LoopInstance& inst, const Verdict& verdict);

}  // namespace oracle
}  // namespace linloop
