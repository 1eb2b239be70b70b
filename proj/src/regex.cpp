#include "ldlfmon/automata.hpp"

#include <algorithm>
#include <deque>

namespace ldlfmon {

// Regular-expression extraction by state elimination. States are folded into
// a generalized automaton whose edges carry path expressions; eliminating a
// state s rewrites every p -> s -> q pair into p -> q with s's self loop
// starred in the middle.

namespace {

Prop minterm(const Alphabet& a, size_t sym) {
  const std::vector<Prop>& atoms = a.atoms();
  const Step& st = a.step(sym);
  Prop acc = nullptr;
  for (Prop atom : atoms) {
    bool present = std::binary_search(
        st.props.begin(), st.props.end(), atom,
        [](Prop x, Prop y) { return x->id < y->id; });
    Prop lit = present ? atom : prop_not(atom);
    acc = acc ? prop_and(acc, lit) : lit;
  }
  return acc ? acc : prop_true();
}

Prop group_prop(const Alphabet& a, const std::vector<size_t>& syms) {
  if (syms.size() == a.base_size()) return prop_true();
  Prop acc = nullptr;
  for (size_t s : syms) {
    Prop term =
        a.kind() == Alphabet::Kind::Tasks ? a.atoms()[s] : minterm(a, s);
    acc = acc ? prop_or(acc, term) : term;
  }
  return acc;
}

}  // namespace

Path to_regex(const Nfa& a) {
  if (a.alphabet->marked())
    throw std::invalid_argument("regex extraction needs a plain alphabet");
  size_t n = a.num_states();
  size_t nsym = a.alphabet->size();

  // Keep only states on some path from the initial to an accepting state.
  Bits reach(n);
  std::deque<size_t> queue{a.initial};
  reach.set(a.initial);
  while (!queue.empty()) {
    size_t q = queue.front();
    queue.pop_front();
    for (size_t sym = 0; sym < nsym; ++sym)
      a.next[q][sym].for_each_set([&](size_t t) {
        if (!reach.get(t)) {
          reach.set(t);
          queue.push_back(t);
        }
      });
  }
  Bits co = a.accepting;
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t q = 0; q < n; ++q) {
      if (co.get(q)) continue;
      for (size_t sym = 0; sym < nsym && !co.get(q); ++sym)
        if (a.next[q][sym].intersects(co)) {
          co.set(q);
          changed = true;
        }
    }
  }
  if (!(reach.get(a.initial) && co.get(a.initial)))
    return p_letter(prop_false());

  std::vector<size_t> keep;
  std::vector<size_t> idx(n, SIZE_MAX);
  for (size_t q = 0; q < n; ++q)
    if (reach.get(q) && co.get(q)) {
      idx[q] = keep.size();
      keep.push_back(q);
    }
  size_t m = keep.size();
  size_t src = m, dst = m + 1;

  std::vector<std::vector<Path>> edge(m + 2,
                                      std::vector<Path>(m + 2, nullptr));
  auto add = [&](size_t i, size_t j, Path p) {
    edge[i][j] = edge[i][j] ? p_union(edge[i][j], p) : p;
  };
  add(src, idx[a.initial], p_test(f_tt()));
  for (size_t q : keep)
    if (a.accepting.get(q)) add(idx[q], dst, p_test(f_tt()));
  for (size_t q : keep) {
    std::vector<std::vector<size_t>> syms_to(m);
    for (size_t sym = 0; sym < nsym; ++sym)
      a.next[q][sym].for_each_set([&](size_t t) {
        if (idx[t] != SIZE_MAX) syms_to[idx[t]].push_back(sym);
      });
    for (size_t t = 0; t < m; ++t)
      if (!syms_to[t].empty())
        add(idx[q], t, p_letter(group_prop(*a.alphabet, syms_to[t])));
  }

  std::vector<bool> gone(m + 2, false);
  for (size_t round = 0; round < m; ++round) {
    // Eliminate the cheapest state first to keep expressions small.
    size_t best = SIZE_MAX, best_cost = SIZE_MAX;
    for (size_t s = 0; s < m; ++s) {
      if (gone[s]) continue;
      size_t in = 0, out = 0;
      for (size_t p = 0; p < m + 2; ++p) {
        if (gone[p] || p == s) continue;
        if (edge[p][s]) ++in;
        if (edge[s][p]) ++out;
      }
      size_t cost = in * out;
      if (cost < best_cost) {
        best_cost = cost;
        best = s;
      }
    }
    size_t s = best;
    Path loop = edge[s][s];
    for (size_t p = 0; p < m + 2; ++p) {
      if (gone[p] || p == s || !edge[p][s]) continue;
      for (size_t q = 0; q < m + 2; ++q) {
        if (gone[q] || q == s || !edge[s][q]) continue;
        Path mid = edge[p][s];
        if (loop) mid = p_seq(mid, p_star(loop));
        add(p, q, p_seq(mid, edge[s][q]));
      }
    }
    gone[s] = true;
    for (size_t p = 0; p < m + 2; ++p) edge[s][p] = edge[p][s] = nullptr;
  }
  return edge[src][dst] ? edge[src][dst] : p_letter(prop_false());
}

Path to_regex(const Dfa& d) { return to_regex(to_nfa(d)); }

}  // namespace ldlfmon
