// Finite traces: each step is the set of atomic propositions true at that
// instant, kept sorted by node id so membership tests can binary search.
#pragma once

#include <initializer_list>
#include <string_view>
#include <vector>

#include "ldlfmon/formula.hpp"

namespace ldlfmon {

struct Step {
  std::vector<Prop> props;
};

using Trace = std::vector<Step>;

Step make_step(std::vector<Prop> props);
Step make_step(std::initializer_list<std::string_view> names);

// Evaluates a propositional formula against the step's atom set.
bool step_holds(const Step& s, Prop p);

}  // namespace ldlfmon
