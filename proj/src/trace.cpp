#include "ldlfmon/trace.hpp"

#include <algorithm>

namespace ldlfmon {

Step make_step(std::vector<Prop> props) {
  std::sort(props.begin(), props.end(),
            [](Prop a, Prop b) { return a->id < b->id; });
  props.erase(std::unique(props.begin(), props.end()), props.end());
  return Step{std::move(props)};
}

Step make_step(std::initializer_list<std::string_view> names) {
  std::vector<Prop> props;
  props.reserve(names.size());
  for (std::string_view n : names) props.push_back(prop_atom(n));
  return make_step(std::move(props));
}

bool step_holds(const Step& s, Prop p) { return prop_eval(p, s.props); }

}  // namespace ldlfmon
