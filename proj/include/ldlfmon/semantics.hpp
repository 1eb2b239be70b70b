// Reference semantics, used as an oracle for the automata pipeline. Truth is
// tabulated per suffix position by structural recursion; path expressions
// become position-to-position reachability matrices (star via transitive
// closure). Quadratic in trace length, so suitable for tests and small
// traces, not for monitoring.
#pragma once

#include <unordered_map>
#include <vector>

#include "ldlfmon/bits.hpp"
#include "ldlfmon/formula.hpp"
#include "ldlfmon/trace.hpp"
#include "ldlfmon/verdict.hpp"

namespace ldlfmon {

class TraceEvaluator {
 public:
  explicit TraceEvaluator(Trace trace);

  size_t length() const { return trace_.size(); }

  // Truth of f on the suffix starting at pos; pos == length() is the empty
  // suffix.
  bool eval_at(Formula f, size_t pos);
  bool satisfies(Formula f) { return eval_at(f, 0); }

  // Whether the segment [from, to) matches the path expression.
  bool path_match(Path r, size_t from, size_t to);

 private:
  const Bits& formula_bits(Formula f);
  const std::vector<Bits>& path_rows(Path r);

  Trace trace_;
  std::unordered_map<Formula, Bits> fmemo_;
  std::unordered_map<Path, std::vector<Bits>> pmemo_;
};

bool satisfies(const Trace& t, Formula f);

// Direct linear-time-logic evaluation on the trace (position 0); agrees with
// translating to the dynamic logic and evaluating there.
bool eval_ltlf(const Trace& t, Ltlf f);

// How a finite prefix can still evolve with respect to a formula.
struct PrefixFlags {
  bool poss_good = false;  // some continuation (possibly empty) satisfies
  bool poss_bad = false;   // some continuation (possibly empty) falsifies
  bool nec_good = false;   // no continuation falsifies
  bool nec_bad = false;    // no continuation satisfies
};

// Flags of a finite prefix by explicit search over continuations whose steps
// draw atoms from `universe`, up to `horizon` appended steps. Exact only
// when the horizon dominates the diameter of the formula's state space (for
// a deterministic automaton, its state count); meant as a ground-truth
// generator for small instances.
PrefixFlags classify_prefix_bruteforce(const Trace& prefix, Formula f,
                                       int horizon,
                                       const std::vector<Prop>& universe);

}  // namespace ldlfmon
