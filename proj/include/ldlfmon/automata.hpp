// Automata pipeline: formula -> NFA (via the symbol-progression function
// delta), end-marker removal, determinization, minimization, boolean
// combinations, prefix closure, regular-expression extraction and on-the-fly
// satisfiability.
#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldlfmon/bits.hpp"
#include "ldlfmon/formula.hpp"
#include "ldlfmon/trace.hpp"

namespace ldlfmon {

inline constexpr size_t kDefaultMaxStates = 1'000'000;

class StateLimitError : public std::runtime_error {
 public:
  explicit StateLimitError(size_t limit)
      : std::runtime_error("state limit of " + std::to_string(limit) +
                           " states exceeded"),
        limit_(limit) {}
  size_t limit() const { return limit_; }

 private:
  size_t limit_;
};

// One transition symbol as the transition function sees it: the atoms that
// hold, plus whether this is the trace's final element.
struct Interp {
  std::vector<Prop> props;  // sorted by id
  bool last = false;
};

// A concrete finite alphabet: either every subset of a set of atoms is a
// symbol, or each symbol is exactly one task atom. Symbols may carry an
// end-marker twin; indexes [0, base_size) are plain and
// [base_size, 2*base_size) are the same symbols marked final.
class Alphabet {
 public:
  enum class Kind { PowerSet, Tasks };

  static std::shared_ptr<const Alphabet> power_set(std::vector<Prop> atoms);
  static std::shared_ptr<const Alphabet> tasks(std::vector<Prop> tasks);

  Kind kind() const { return kind_; }
  bool marked() const { return marked_; }
  const std::vector<Prop>& atoms() const { return atoms_; }
  size_t base_size() const { return steps_.size(); }
  size_t size() const { return steps_.size() * (marked_ ? 2 : 1); }

  const Step& step(size_t sym) const { return steps_[sym % steps_.size()]; }
  bool is_last(size_t sym) const { return sym >= steps_.size(); }
  Interp interp(size_t sym) const;
  std::string symbol_name(size_t sym) const;

  // Index of the plain symbol matching a trace step; atoms outside the
  // alphabet are ignored. Task alphabets require exactly one known task per
  // step and throw std::invalid_argument otherwise.
  size_t index_of(const Step& s) const;

  std::shared_ptr<const Alphabet> with_marker() const;
  std::shared_ptr<const Alphabet> without_marker() const;

 private:
  Kind kind_ = Kind::PowerSet;
  bool marked_ = false;
  std::vector<Prop> atoms_;
  std::vector<Step> steps_;
};

bool same_alphabet(const Alphabet& a, const Alphabet& b);

struct Nfa {
  std::shared_ptr<const Alphabet> alphabet;
  size_t initial = 0;
  Bits accepting;                       // indexed by state
  std::vector<std::vector<Bits>> next;  // [state][symbol] -> state set
  // For formula-built automata: the quoted obligations of each state.
  std::vector<std::vector<Formula>> state_sets;

  size_t num_states() const { return next.size(); }
};

struct Dfa {
  std::shared_ptr<const Alphabet> alphabet;
  size_t initial = 0;
  Bits accepting;
  std::vector<std::vector<size_t>> next;  // complete: [state][symbol]

  size_t num_states() const { return next.size(); }
};

// ---------------------------------------------------------------------------
// Transition function

// Positive boolean formulas over quoted subformulas.
struct PosBool;
using Pb = std::shared_ptr<const PosBool>;
struct PosBool {
  enum class Kind { True, False, Atom, And, Or };
  Kind kind = Kind::True;
  Formula atom = nullptr;
  Pb lhs, rhs;
};

Pb pb_true();
Pb pb_false();
Pb pb_atom(Formula f);
// Constant-folding connectives; atoms are never folded.
Pb pb_and(Pb a, Pb b);
Pb pb_or(Pb a, Pb b);
bool pb_constant(const Pb& b, bool value);
std::string render(const Pb& b);

// Progression of an NNF formula through one symbol; the result's atoms are
// the obligations quoted for the rest of the trace. Star paths unfold
// lazily; re-entering the same star within one call yields the fixpoint
// constant (false under a diamond, true under a box).
Pb delta(Formula f, const Interp& sym);

// Progression over the empty word; always folds to a constant.
Pb delta_eps(Formula f);

// All subset-minimal satisfying atom sets of a positive boolean formula,
// each sorted by node id; ordered smallest-first.
std::vector<std::vector<Formula>> minimal_models(const Pb& b);

// ---------------------------------------------------------------------------
// Construction pipeline

// States are sets of quoted obligations explored forward from {nnf(f)};
// successors on a symbol are the minimal models of the conjoined
// progressions, and a state accepts iff all its obligations hold on the
// empty word. The alphabet is the marked double of `base` (defaulting to
// the power set of the formula's atoms): plain symbols progress, marked
// symbols additionally discharge end-of-trace obligations.
Nfa ldlf_to_nfa(Formula f, std::shared_ptr<const Alphabet> base = nullptr,
                size_t max_states = kDefaultMaxStates);

// Replaces marked-final moves by moves into a fresh accepting `ended` state,
// leaving an automaton over the plain alphabet.
Nfa strip_last(const Nfa& a);

Dfa determinize(const Nfa& a, size_t max_states = kDefaultMaxStates);
Dfa minimize(const Dfa& d);
Dfa complement(Dfa d);

enum class BoolOp { And, Or, Diff, Xor };
Dfa combine(const Dfa& a, const Dfa& b, BoolOp op);

// Widens the accepting set to every state from which acceptance is reachable
// in zero or more steps; the result accepts exactly the prefixes of the
// input's language.
Nfa prefix_automaton(Nfa a);
Dfa prefix_automaton(Dfa d);

Nfa to_nfa(const Dfa& d);

// Running a marked-alphabet automaton feeds the trace's final element as the
// marked twin; plain-alphabet automata read the trace as is.
bool accepts(const Nfa& a, const Trace& t);
bool accepts(const Dfa& d, const Trace& t);
bool language_empty(const Nfa& a);
bool language_empty(const Dfa& d);
bool dfa_equivalent(const Dfa& a, const Dfa& b);

// Regular-expression extraction by state elimination, lowest fan-in*fan-out
// first. Letters are propositional formulas covering the grouped symbols;
// the only test ever emitted is tt? for the empty word; the empty language
// is the letter false.
Path to_regex(const Nfa& a);
Path to_regex(const Dfa& d);

// Satisfiability by on-the-fly search for a reachable accepting state of the
// formula's automaton, without materializing the transition table.
bool check_satisfiable(Formula f,
                       std::shared_ptr<const Alphabet> base = nullptr,
                       size_t max_states = kDefaultMaxStates);
bool check_valid(Formula f, std::shared_ptr<const Alphabet> base = nullptr,
                 size_t max_states = kDefaultMaxStates);
bool check_implies(Formula f, Formula g,
                   std::shared_ptr<const Alphabet> base = nullptr,
                   size_t max_states = kDefaultMaxStates);

std::string to_dot(const Nfa& a);
std::string to_dot(const Dfa& d);

}  // namespace ldlfmon
