#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "linloop/instance.hpp"
#include "linloop/semidecision.hpp"

namespace linloop {

enum class Outcome { RobustEscaping, RobustTrapped, Unknown };

const char* outcome_name(Outcome o);

/// Both checkers verified in the same round. The two verified sets are
/// disjoint, so this signals an unsoundness bug.
class InternalContradiction : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct DecideStats {
  unsigned rounds = 0;
  std::size_t boxes = 0;
  unsigned long precision_bits = 0;
  int max_depth = 0;
  bool precision_capped = false;
};

/// Unknown carries no certificate; the two robust outcomes always do.
struct Verdict {
  Outcome outcome = Outcome::Unknown;
  unsigned budget_used = 0;
  std::optional<Certificate> certificate;
  DecideStats stats;
};

/// Dovetails the escaping and trapped checkers over budgets 0..max_budget.
///
/// Each round refines the instance to the round's precision and runs both
/// checkers; the first verified formula decides. Unknown after max_budget
/// is the honest answer for boundary instances.
Verdict decide(const LoopInstance& inst, unsigned max_budget);

/// Re-runs the checks recorded in a certificate at its recorded precision
/// and depth. True iff every recorded fact is reproduced.
bool replay_certificate(const LoopInstance& inst, const Certificate& cert);

std::string certificate_to_json(const Certificate& cert, int indent = -1);
Certificate certificate_from_json(const std::string& text);
/// {verdict, budget_used, certificate?, stats}
std::string verdict_to_json(const Verdict& v, int indent = -1);
std::string verdict_to_text(const Verdict& v);

}  // namespace linloop
