// Streaming runtime verification: a minimized automaton whose states each
// carry one verdict, advanced one event at a time, plus the formula-level
// verdict characterizations used for cross-checks and metaconstraints.
#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "ldlfmon/automata.hpp"
#include "ldlfmon/formula.hpp"
#include "ldlfmon/trace.hpp"
#include "ldlfmon/verdict.hpp"

namespace ldlfmon {

// One formula per verdict. On any trace exactly one of the four holds.
struct RvFormulaSet {
  Formula verdict_true;
  Formula verdict_false;
  Formula temp_true;
  Formula temp_false;

  Formula for_verdict(Verdict v) const;
};

// Builds the four verdict characterizations of f. The prefix languages of f
// and !f are recovered from their automata as path expressions, so every
// member is an ordinary formula that can be evaluated, compiled or nested
// inside other formulas.
RvFormulaSet rv_formulas(Formula f,
                         std::shared_ptr<const Alphabet> alphabet = nullptr,
                         size_t max_states = kDefaultMaxStates);

// Verdict of each state of a monitor automaton: true when acceptance cannot
// be left, false when it cannot be reached, the temporary verdicts otherwise.
std::vector<Verdict> color_states(const Dfa& d);

// A deterministic automaton with one verdict per state and a cursor. Cheap
// to copy; one instance monitors one trace at a time.
class Monitor {
 public:
  Monitor(Dfa dfa, std::vector<Verdict> colors, Formula f)
      : dfa_(std::move(dfa)),
        colors_(std::move(colors)),
        formula_(f),
        current_(dfa_.initial) {}

  // Advances by one event and returns the verdict after it. Task steps that
  // the alphabet cannot index throw std::invalid_argument and do not move
  // the cursor.
  Verdict step(const Step& e);
  Verdict step(std::string_view task);

  // Verdict of everything seen so far; before any event, of the empty trace.
  Verdict verdict() const { return colors_[current_]; }

  void reset() {
    current_ = dfa_.initial;
    events_ = 0;
  }

  size_t events_seen() const { return events_; }
  Formula formula() const { return formula_; }
  const Dfa& dfa() const { return dfa_; }
  const std::vector<Verdict>& colors() const { return colors_; }
  size_t current() const { return current_; }

 private:
  Dfa dfa_;
  std::vector<Verdict> colors_;
  Formula formula_;
  size_t current_ = 0;
  size_t events_ = 0;
};

Monitor build_monitor(Formula f,
                      std::shared_ptr<const Alphabet> alphabet = nullptr,
                      size_t max_states = kDefaultMaxStates);

// Verdict of t for f by evaluating the four characterizations with the
// reference evaluator; throws std::logic_error unless exactly one holds.
Verdict rv_classify(const Trace& t, Formula f,
                    std::shared_ptr<const Alphabet> alphabet = nullptr);

// Verdicts after 0, 1, ..., n events of t.
std::vector<Verdict> verdict_timeline(
    Formula f, const Trace& t,
    std::shared_ptr<const Alphabet> alphabet = nullptr);

}  // namespace ldlfmon
