// Declare models: the constraint pattern catalog with its good-prefix
// characterizations, compilation of constraints and metaconstraints to
// formulas over a task alphabet, and the reasoning services built on the
// automata pipeline (consistency, dead tasks, enactment support).
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ldlfmon/automata.hpp"
#include "ldlfmon/formula.hpp"
#include "ldlfmon/trace.hpp"
#include "ldlfmon/verdict.hpp"

namespace ldlfmon {

// The closed pattern catalog. Anything else is expressed as a raw formula.
enum class PatternId : uint8_t {
  Existence,
  Absence2,
  Choice,
  ExclusiveChoice,
  RespondedExistence,
  Coexistence,
  Response,
  Precedence,
  Succession,
  NotCoexistence,
  NegationSuccession,
};

const std::vector<PatternId>& all_patterns();
std::string_view pattern_name(PatternId p);
// Inverse of pattern_name; throws std::invalid_argument on unknown names.
PatternId pattern_from_name(std::string_view name);
size_t pattern_arity(PatternId p);

// The pattern's linear-temporal body over the parameter tasks, translated to
// a dynamic-logic formula. Parameters must be distinct alphabet tasks
// matching the pattern's arity.
Formula instantiate_pattern(PatternId p, const std::vector<Prop>& params,
                            const Alphabet& alphabet);

// The catalog's good-prefix expression, with the "any other task" letter
// expanded to the disjunction of alphabet tasks not among the parameters.
// Language-equal to the prefix automaton of the instantiated formula.
Path pattern_prefix_regex(PatternId p, const std::vector<Prop>& params,
                          const Alphabet& alphabet);

// The verdicts a monitor for the pattern can ever report, in enum order.
std::vector<Verdict> possible_rv_states(PatternId p);

// Either a catalog pattern applied to parameter tasks or a raw formula.
struct Constraint {
  std::string id;
  std::optional<PatternId> pattern;
  std::vector<Prop> params;
  Formula raw = nullptr;
};

// pre and exp are boolean expressions over the model's constraints: pre
// atoms have the form [id]=verdict, exp atoms are bare ids; both combine
// with ! & | and parentheses plus the constants true and false. The guarded
// form defers the expectation to the point where the precondition is first
// established instead of asserting it from the start of the trace.
struct Metaconstraint {
  std::string pre;
  std::string exp;
  bool guarded = false;
};

struct DeclareModel {
  std::vector<Prop> tasks;
  std::vector<Constraint> constraints;
  std::vector<Metaconstraint> metaconstraints;
};

// Task alphabet of the model: one symbol per task.
std::shared_ptr<const Alphabet> model_alphabet(const DeclareModel& m);

// Parses the JSON model format described in the README. Malformed JSON and
// schema violations raise std::invalid_argument naming the offending
// element; metaconstraint references are resolved eagerly.
DeclareModel load_model(const std::string& json_text);

Formula constraint_formula(const DeclareModel& m, const Constraint& c);

// Replaces each pre atom [c]=v with the verdict characterization of the
// referenced constraint and each exp atom with the constraint's formula.
// Plain form: pre -> exp. Guarded form: pre -> [g]exp, where g matches
// exactly the prefixes at which pre first becomes true, so the expectation
// is demanded of what follows the triggering point.
Formula compile_metaconstraint(const Metaconstraint& mc, const DeclareModel& m,
                               size_t max_states = kDefaultMaxStates);

// Conjunction of every constraint and compiled metaconstraint.
Formula model_formula(const DeclareModel& m,
                      size_t max_states = kDefaultMaxStates);

// One interpretation per event, containing exactly that task. Events naming
// tasks outside the alphabet throw std::invalid_argument.
Trace task_trace(const std::vector<std::string>& events,
                 const Alphabet& alphabet);

// "At every instant exactly one task holds" as a formula. The services in
// this module never need it because task alphabets build the property into
// the symbols; tests use it to cross-check that encoding.
Formula declare_assumption(const std::vector<Prop>& tasks);

// Whether some task trace satisfies the whole model.
bool check_consistency(const DeclareModel& m,
                       size_t max_states = kDefaultMaxStates);

// Tasks no satisfying trace ever executes, in model order. The model must be
// consistent; an inconsistent one throws std::invalid_argument.
std::vector<Prop> dead_tasks(const DeclareModel& m,
                             size_t max_states = kDefaultMaxStates);

struct EnactmentInfo {
  // Tasks whose execution next still admits some satisfying completion.
  std::vector<Prop> legal_tasks;
  // Constraints not satisfied by the events seen so far.
  std::vector<std::string> pending_constraint_ids;
  // Whether stopping now satisfies the whole model.
  bool can_end = false;
};

EnactmentInfo enactment_info(const DeclareModel& m,
                             const std::vector<std::string>& events,
                             size_t max_states = kDefaultMaxStates);

}  // namespace ldlfmon
