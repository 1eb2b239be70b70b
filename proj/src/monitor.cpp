#include "ldlfmon/monitor.hpp"

#include <stdexcept>

#include "ldlfmon/semantics.hpp"

namespace ldlfmon {

Formula RvFormulaSet::for_verdict(Verdict v) const {
  switch (v) {
    case Verdict::True: return verdict_true;
    case Verdict::False: return verdict_false;
    case Verdict::TempTrue: return temp_true;
    case Verdict::TempFalse: return temp_false;
  }
  throw std::logic_error("bad Verdict");
}

RvFormulaSet rv_formulas(Formula f, std::shared_ptr<const Alphabet> alphabet,
                         size_t max_states) {
  if (!alphabet) alphabet = Alphabet::power_set(props_of(f));
  auto pref_of = [&](Formula g) {
    Dfa d = minimize(
        determinize(strip_last(ldlf_to_nfa(g, alphabet, max_states)),
                    max_states));
    // Minimizing again after the acceptance change keeps the extracted
    // expression small.
    return to_regex(minimize(prefix_automaton(std::move(d))));
  };
  Formula can_good = regex_embed(pref_of(f));
  Formula can_bad = regex_embed(pref_of(f_not(f)));
  RvFormulaSet out;
  out.verdict_true = f_and(can_good, f_not(can_bad));
  out.verdict_false = f_and(can_bad, f_not(can_good));
  out.temp_true = f_and(f, can_bad);
  out.temp_false = f_and(f_not(f), can_good);
  return out;
}

std::vector<Verdict> color_states(const Dfa& d) {
  size_t n = d.num_states();
  size_t nsym = d.alphabet->size();
  std::vector<char> to_acc(n), to_rej(n);
  for (size_t q = 0; q < n; ++q) {
    to_acc[q] = d.accepting.get(q);
    to_rej[q] = !d.accepting.get(q);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t q = 0; q < n; ++q)
      for (size_t sym = 0; sym < nsym; ++sym) {
        size_t t = d.next[q][sym];
        if (!to_acc[q] && to_acc[t]) {
          to_acc[q] = 1;
          changed = true;
        }
        if (!to_rej[q] && to_rej[t]) {
          to_rej[q] = 1;
          changed = true;
        }
      }
  }
  std::vector<Verdict> colors(n);
  for (size_t q = 0; q < n; ++q) {
    if (d.accepting.get(q))
      colors[q] = to_rej[q] ? Verdict::TempTrue : Verdict::True;
    else
      colors[q] = to_acc[q] ? Verdict::TempFalse : Verdict::False;
  }
  return colors;
}

Verdict Monitor::step(const Step& e) {
  size_t sym = dfa_.alphabet->index_of(e);
  current_ = dfa_.next[current_][sym];
  ++events_;
  return colors_[current_];
}

Verdict Monitor::step(std::string_view task) { return step(make_step({task})); }

Monitor build_monitor(Formula f, std::shared_ptr<const Alphabet> alphabet,
                      size_t max_states) {
  Dfa d = minimize(determinize(
      strip_last(ldlf_to_nfa(f, std::move(alphabet), max_states)),
      max_states));
  std::vector<Verdict> colors = color_states(d);
  return Monitor(std::move(d), std::move(colors), f);
}

Verdict rv_classify(const Trace& t, Formula f,
                    std::shared_ptr<const Alphabet> alphabet) {
  RvFormulaSet s = rv_formulas(f, std::move(alphabet));
  int hits = 0;
  Verdict out = Verdict::True;
  for (Verdict v : {Verdict::True, Verdict::False, Verdict::TempTrue,
                    Verdict::TempFalse})
    if (satisfies(t, s.for_verdict(v))) {
      ++hits;
      out = v;
    }
  if (hits != 1)
    throw std::logic_error("verdict characterizations did not partition");
  return out;
}

std::vector<Verdict> verdict_timeline(Formula f, const Trace& t,
                                      std::shared_ptr<const Alphabet> alphabet) {
  Monitor m = build_monitor(f, std::move(alphabet));
  std::vector<Verdict> out{m.verdict()};
  out.reserve(t.size() + 1);
  for (const Step& e : t) out.push_back(m.step(e));
  return out;
}

}  // namespace ldlfmon
