#include "ldlfmon/automata.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace ldlfmon {

// ---------------------------------------------------------------------------
// Alphabet

namespace {

bool id_less(Prop a, Prop b) { return a->id < b->id; }

std::vector<Prop> sorted_unique(std::vector<Prop> v) {
  std::sort(v.begin(), v.end(), id_less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void require_atoms(const std::vector<Prop>& v) {
  for (Prop p : v)
    if (p->kind != PropKind::Atom)
      throw std::invalid_argument("alphabet entries must be plain atoms");
}

}  // namespace

std::shared_ptr<const Alphabet> Alphabet::power_set(std::vector<Prop> atoms) {
  atoms = sorted_unique(std::move(atoms));
  require_atoms(atoms);
  if (atoms.size() > 16)
    throw std::invalid_argument("power-set alphabet limited to 16 atoms");
  auto a = std::make_shared<Alphabet>();
  a->kind_ = Kind::PowerSet;
  a->atoms_ = atoms;
  size_t n = atoms.size();
  for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
    std::vector<Prop> ps;
    for (size_t i = 0; i < n; ++i)
      if (mask >> i & 1) ps.push_back(atoms[i]);
    a->steps_.push_back(make_step(std::move(ps)));
  }
  return a;
}

std::shared_ptr<const Alphabet> Alphabet::tasks(std::vector<Prop> tasks) {
  require_atoms(tasks);
  std::vector<Prop> kept;
  for (Prop p : tasks)
    if (std::find(kept.begin(), kept.end(), p) == kept.end())
      kept.push_back(p);
  if (kept.empty())
    throw std::invalid_argument("task alphabet needs at least one task");
  auto a = std::make_shared<Alphabet>();
  a->kind_ = Kind::Tasks;
  a->atoms_ = kept;
  for (Prop p : kept) a->steps_.push_back(make_step(std::vector<Prop>{p}));
  return a;
}

Interp Alphabet::interp(size_t sym) const {
  return Interp{steps_[sym % steps_.size()].props, is_last(sym)};
}

std::string Alphabet::symbol_name(size_t sym) const {
  const Step& s = step(sym);
  std::string out;
  if (kind_ == Kind::Tasks) {
    out = s.props[0]->name;
  } else {
    out = "{";
    for (size_t i = 0; i < s.props.size(); ++i) {
      if (i) out += ",";
      out += s.props[i]->name;
    }
    out += "}";
  }
  if (is_last(sym)) out += "+last";
  return out;
}

size_t Alphabet::index_of(const Step& s) const {
  auto has = [&](Prop p) {
    return std::binary_search(s.props.begin(), s.props.end(), p, id_less);
  };
  if (kind_ == Kind::PowerSet) {
    size_t mask = 0;
    for (size_t i = 0; i < atoms_.size(); ++i)
      if (has(atoms_[i])) mask |= size_t{1} << i;
    return mask;
  }
  size_t found = steps_.size();
  for (size_t i = 0; i < atoms_.size(); ++i) {
    if (!has(atoms_[i])) continue;
    if (found != steps_.size())
      throw std::invalid_argument("step names more than one task");
    found = i;
  }
  if (found == steps_.size())
    throw std::invalid_argument("step names no known task");
  return found;
}

std::shared_ptr<const Alphabet> Alphabet::with_marker() const {
  auto a = std::make_shared<Alphabet>(*this);
  a->marked_ = true;
  return a;
}

std::shared_ptr<const Alphabet> Alphabet::without_marker() const {
  auto a = std::make_shared<Alphabet>(*this);
  a->marked_ = false;
  return a;
}

bool same_alphabet(const Alphabet& a, const Alphabet& b) {
  return a.kind() == b.kind() && a.marked() == b.marked() &&
         a.atoms() == b.atoms();
}

// ---------------------------------------------------------------------------
// Positive boolean formulas

Pb pb_true() {
  static Pb b = std::make_shared<PosBool>(PosBool{PosBool::Kind::True, nullptr, nullptr, nullptr});
  return b;
}

Pb pb_false() {
  static Pb b = std::make_shared<PosBool>(PosBool{PosBool::Kind::False, nullptr, nullptr, nullptr});
  return b;
}

Pb pb_atom(Formula f) {
  return std::make_shared<PosBool>(PosBool{PosBool::Kind::Atom, f, nullptr, nullptr});
}

Pb pb_and(Pb a, Pb b) {
  if (a->kind == PosBool::Kind::False || b->kind == PosBool::Kind::False)
    return pb_false();
  if (a->kind == PosBool::Kind::True) return b;
  if (b->kind == PosBool::Kind::True) return a;
  return std::make_shared<PosBool>(
      PosBool{PosBool::Kind::And, nullptr, std::move(a), std::move(b)});
}

Pb pb_or(Pb a, Pb b) {
  if (a->kind == PosBool::Kind::True || b->kind == PosBool::Kind::True)
    return pb_true();
  if (a->kind == PosBool::Kind::False) return b;
  if (b->kind == PosBool::Kind::False) return a;
  return std::make_shared<PosBool>(
      PosBool{PosBool::Kind::Or, nullptr, std::move(a), std::move(b)});
}

bool pb_constant(const Pb& b, bool value) {
  return b->kind == (value ? PosBool::Kind::True : PosBool::Kind::False);
}

std::string render(const Pb& b) {
  switch (b->kind) {
    case PosBool::Kind::True: return "true";
    case PosBool::Kind::False: return "false";
    case PosBool::Kind::Atom: return "\"" + render(b->atom) + "\"";
    case PosBool::Kind::And:
      return "(" + render(b->lhs) + " & " + render(b->rhs) + ")";
    case PosBool::Kind::Or:
      return "(" + render(b->lhs) + " | " + render(b->rhs) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// delta

namespace {

Pb eps_modal(Formula f, bool diamond);

Pb eps_go(Formula f) {
  switch (f->kind) {
    case FormulaKind::Tt: return pb_true();
    case FormulaKind::Ff: return pb_false();
    case FormulaKind::Prop: return pb_false();
    case FormulaKind::Not:
      return pb_constant(eps_go(f->lhs), true) ? pb_false() : pb_true();
    case FormulaKind::And: return pb_and(eps_go(f->lhs), eps_go(f->rhs));
    case FormulaKind::Or: return pb_or(eps_go(f->lhs), eps_go(f->rhs));
    case FormulaKind::Diamond: return eps_modal(f, true);
    case FormulaKind::Box: return eps_modal(f, false);
  }
  throw std::logic_error("bad FormulaKind");
}

Pb eps_modal(Formula f, bool diamond) {
  Path r = f->path;
  Formula body = f->lhs;
  switch (r->kind) {
    case PathKind::Prop:
      return diamond ? pb_false() : pb_true();
    case PathKind::Test: {
      Pb t = eps_go(r->test);
      Pb b = eps_go(body);
      if (diamond) return pb_and(t, b);
      return pb_or(pb_constant(t, true) ? pb_false() : pb_true(), b);
    }
    case PathKind::Union: {
      Pb a = eps_go(diamond ? f_diamond(r->lhs, body) : f_box(r->lhs, body));
      Pb b = eps_go(diamond ? f_diamond(r->rhs, body) : f_box(r->rhs, body));
      return diamond ? pb_or(a, b) : pb_and(a, b);
    }
    case PathKind::Seq: {
      Formula inner =
          diamond ? f_diamond(r->rhs, body) : f_box(r->rhs, body);
      return eps_go(diamond ? f_diamond(r->lhs, inner) : f_box(r->lhs, inner));
    }
    case PathKind::Star:
      return eps_go(body);
  }
  throw std::logic_error("bad PathKind");
}

struct DeltaCtx {
  const Interp& sym;
  std::unordered_set<Formula> busy;

  bool guard(Prop p) const { return prop_eval(p, sym.props); }

  Pb go(Formula f) {
    switch (f->kind) {
      case FormulaKind::Tt: return pb_true();
      case FormulaKind::Ff: return pb_false();
      case FormulaKind::Prop:
        return guard(f->prop) ? pb_true() : pb_false();
      case FormulaKind::And: return pb_and(go(f->lhs), go(f->rhs));
      case FormulaKind::Or: return pb_or(go(f->lhs), go(f->rhs));
      case FormulaKind::Diamond: return modal(f, true);
      case FormulaKind::Box: return modal(f, false);
      case FormulaKind::Not:
        throw std::invalid_argument("delta needs negation normal form");
    }
    throw std::logic_error("bad FormulaKind");
  }

  Pb modal(Formula f, bool diamond) {
    Path r = f->path;
    Formula body = f->lhs;
    switch (r->kind) {
      case PathKind::Prop: {
        if (!guard(r->prop)) return diamond ? pb_false() : pb_true();
        if (sym.last) return delta_eps(body);
        return pb_atom(body);
      }
      case PathKind::Test: {
        if (diamond) return pb_and(go(r->test), go(body));
        return pb_or(go(nnf(f_not(r->test))), go(body));
      }
      case PathKind::Union: {
        Pb a = go(diamond ? f_diamond(r->lhs, body) : f_box(r->lhs, body));
        Pb b = go(diamond ? f_diamond(r->rhs, body) : f_box(r->rhs, body));
        return diamond ? pb_or(a, b) : pb_and(a, b);
      }
      case PathKind::Seq: {
        Formula inner =
            diamond ? f_diamond(r->rhs, body) : f_box(r->rhs, body);
        return go(diamond ? f_diamond(r->lhs, inner) : f_box(r->lhs, inner));
      }
      case PathKind::Star: {
        // Iterating over tests alone never advances the trace.
        if (r->lhs->test_only) return go(body);
        if (!busy.insert(f).second) return diamond ? pb_false() : pb_true();
        Pb stay = go(body);
        Pb step = go(diamond ? f_diamond(r->lhs, f) : f_box(r->lhs, f));
        busy.erase(f);
        return diamond ? pb_or(stay, step) : pb_and(stay, step);
      }
    }
    throw std::logic_error("bad PathKind");
  }
};

}  // namespace

Pb delta(Formula f, const Interp& sym) {
  DeltaCtx ctx{sym, {}};
  return ctx.go(f);
}

Pb delta_eps(Formula f) { return eps_go(f); }

// ---------------------------------------------------------------------------
// Minimal models

namespace {

void collect_pb_atoms(const Pb& b, std::vector<Formula>& out) {
  switch (b->kind) {
    case PosBool::Kind::Atom: out.push_back(b->atom); return;
    case PosBool::Kind::And:
    case PosBool::Kind::Or:
      collect_pb_atoms(b->lhs, out);
      collect_pb_atoms(b->rhs, out);
      return;
    default: return;
  }
}

bool pb_eval(const Pb& b, const std::unordered_map<Formula, size_t>& index,
             size_t mask) {
  switch (b->kind) {
    case PosBool::Kind::True: return true;
    case PosBool::Kind::False: return false;
    case PosBool::Kind::Atom: return mask >> index.at(b->atom) & 1;
    case PosBool::Kind::And:
      return pb_eval(b->lhs, index, mask) && pb_eval(b->rhs, index, mask);
    case PosBool::Kind::Or:
      return pb_eval(b->lhs, index, mask) || pb_eval(b->rhs, index, mask);
  }
  throw std::logic_error("bad PosBool kind");
}

}  // namespace

std::vector<std::vector<Formula>> minimal_models(const Pb& b) {
  std::vector<Formula> atoms;
  collect_pb_atoms(b, atoms);
  std::sort(atoms.begin(), atoms.end(),
            [](Formula x, Formula y) { return x->id < y->id; });
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  size_t k = atoms.size();
  if (k > 24) throw std::runtime_error("obligation formula too wide");
  std::unordered_map<Formula, size_t> index;
  for (size_t i = 0; i < k; ++i) index.emplace(atoms[i], i);

  std::vector<size_t> masks(size_t{1} << k);
  std::iota(masks.begin(), masks.end(), size_t{0});
  std::stable_sort(masks.begin(), masks.end(), [](size_t a, size_t b) {
    return std::popcount(a) < std::popcount(b);
  });

  std::vector<size_t> kept;
  std::vector<std::vector<Formula>> out;
  for (size_t mask : masks) {
    bool dominated = false;
    for (size_t m : kept)
      if ((m & mask) == m) {
        dominated = true;
        break;
      }
    if (dominated) continue;
    if (!pb_eval(b, index, mask)) continue;
    kept.push_back(mask);
    std::vector<Formula> model;
    for (size_t i = 0; i < k; ++i)
      if (mask >> i & 1) model.push_back(atoms[i]);
    out.push_back(std::move(model));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Formula to NFA

namespace {

struct SetHash {
  size_t operator()(const std::vector<Formula>& v) const {
    size_t h = v.size();
    for (Formula f : v)
      h ^= f->hash + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

bool eps_accepting(const std::vector<Formula>& set) {
  for (Formula f : set)
    if (!pb_constant(delta_eps(f), true)) return false;
  return true;
}

}  // namespace

Nfa ldlf_to_nfa(Formula f, std::shared_ptr<const Alphabet> base,
                size_t max_states) {
  Formula g = nnf(f);
  if (!base)
    base = Alphabet::power_set(props_of(g));
  else if (base->marked())
    base = base->without_marker();
  auto alpha = base->with_marker();
  size_t nsym = alpha->size();

  std::vector<std::vector<Formula>> sets{{g}};
  std::unordered_map<std::vector<Formula>, size_t, SetHash> ids;
  ids.emplace(sets[0], 0);
  std::vector<std::vector<std::vector<size_t>>> succ;
  succ.emplace_back(nsym);
  std::deque<size_t> queue{0};

  while (!queue.empty()) {
    size_t q = queue.front();
    queue.pop_front();
    for (size_t sym = 0; sym < nsym; ++sym) {
      Interp itp = alpha->interp(sym);
      Pb conj = pb_true();
      for (Formula psi : sets[q]) conj = pb_and(conj, delta(psi, itp));
      for (std::vector<Formula>& model : minimal_models(conj)) {
        auto [it, inserted] = ids.emplace(model, sets.size());
        if (inserted) {
          if (sets.size() >= max_states) throw StateLimitError(max_states);
          sets.push_back(std::move(model));
          succ.emplace_back(nsym);
          queue.push_back(it->second);
        }
        succ[q][sym].push_back(it->second);
      }
    }
  }

  size_t n = sets.size();
  Nfa out;
  out.alphabet = alpha;
  out.initial = 0;
  out.accepting = Bits(n);
  out.next.assign(n, std::vector<Bits>(nsym, Bits(n)));
  for (size_t q = 0; q < n; ++q) {
    if (eps_accepting(sets[q])) out.accepting.set(q);
    for (size_t sym = 0; sym < nsym; ++sym)
      for (size_t t : succ[q][sym]) out.next[q][sym].set(t);
  }
  out.state_sets = std::move(sets);
  return out;
}

Nfa strip_last(const Nfa& a) {
  if (!a.alphabet->marked())
    throw std::invalid_argument("expected a marked-alphabet automaton");
  auto base = a.alphabet->without_marker();
  size_t n = a.num_states();
  size_t bsz = base->size();
  Nfa out;
  out.alphabet = base;
  out.initial = a.initial;
  out.accepting = Bits(n + 1);
  a.accepting.for_each_set([&](size_t q) { out.accepting.set(q); });
  out.accepting.set(n);  // the fresh `ended` state
  out.next.assign(n + 1, std::vector<Bits>(bsz, Bits(n + 1)));
  for (size_t q = 0; q < n; ++q) {
    for (size_t sym = 0; sym < bsz; ++sym) {
      a.next[q][sym].for_each_set(
          [&](size_t t) { out.next[q][sym].set(t); });
      if (a.next[q][sym + bsz].intersects(a.accepting))
        out.next[q][sym].set(n);
    }
  }
  out.state_sets = a.state_sets;
  if (!out.state_sets.empty()) out.state_sets.emplace_back();
  return out;
}

// ---------------------------------------------------------------------------
// Subset construction, minimization, boolean combinations

Dfa determinize(const Nfa& a, size_t max_states) {
  size_t n = a.num_states();
  size_t nsym = a.alphabet->size();
  std::unordered_map<Bits, size_t, BitsHash> ids;
  std::vector<Bits> subsets;
  Bits init(n);
  init.set(a.initial);
  ids.emplace(init, 0);
  subsets.push_back(init);

  Dfa out;
  out.alphabet = a.alphabet;
  out.initial = 0;
  // FIFO processing keeps row order aligned with id order.
  for (size_t q = 0; q < subsets.size(); ++q) {
    std::vector<size_t> row(nsym);
    for (size_t sym = 0; sym < nsym; ++sym) {
      Bits target(n);
      subsets[q].for_each_set([&](size_t s) { target |= a.next[s][sym]; });
      auto [it, inserted] = ids.emplace(target, subsets.size());
      if (inserted) {
        if (subsets.size() >= max_states) throw StateLimitError(max_states);
        subsets.push_back(std::move(target));
      }
      row[sym] = it->second;
    }
    out.next.push_back(std::move(row));
  }
  out.accepting = Bits(subsets.size());
  for (size_t q = 0; q < subsets.size(); ++q)
    if (subsets[q].intersects(a.accepting)) out.accepting.set(q);
  return out;
}

Dfa minimize(const Dfa& d) {
  size_t nsym = d.alphabet->size();
  // Restrict to reachable states.
  std::vector<size_t> order;
  std::vector<size_t> idx(d.num_states(), SIZE_MAX);
  order.push_back(d.initial);
  idx[d.initial] = 0;
  for (size_t i = 0; i < order.size(); ++i)
    for (size_t sym = 0; sym < nsym; ++sym) {
      size_t t = d.next[order[i]][sym];
      if (idx[t] == SIZE_MAX) {
        idx[t] = order.size();
        order.push_back(t);
      }
    }
  size_t n = order.size();
  std::vector<std::vector<size_t>> next(n, std::vector<size_t>(nsym));
  std::vector<bool> acc(n);
  for (size_t i = 0; i < n; ++i) {
    acc[i] = d.accepting.get(order[i]);
    for (size_t sym = 0; sym < nsym; ++sym)
      next[i][sym] = idx[d.next[order[i]][sym]];
  }

  // Partition refinement to the coarsest congruence.
  std::vector<size_t> cls(n);
  {
    std::unordered_map<int, size_t> first;
    for (size_t i = 0; i < n; ++i) {
      auto [it, ins] = first.emplace(acc[i] ? 1 : 0, first.size());
      cls[i] = it->second;
    }
  }
  size_t count = 0;
  for (size_t c : cls) count = std::max(count, c + 1);
  for (;;) {
    struct VecHash {
      size_t operator()(const std::vector<size_t>& v) const {
        size_t h = v.size();
        for (size_t x : v)
          h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
      }
    };
    std::unordered_map<std::vector<size_t>, size_t, VecHash> sig_ids;
    std::vector<size_t> ncls(n);
    for (size_t i = 0; i < n; ++i) {
      std::vector<size_t> sig;
      sig.reserve(nsym + 1);
      sig.push_back(cls[i]);
      for (size_t sym = 0; sym < nsym; ++sym) sig.push_back(cls[next[i][sym]]);
      auto [it, ins] = sig_ids.emplace(std::move(sig), sig_ids.size());
      ncls[i] = it->second;
    }
    if (sig_ids.size() == count) break;
    count = sig_ids.size();
    cls = std::move(ncls);
  }

  // Canonical numbering by breadth-first discovery from the initial class.
  std::vector<size_t> cls_id(count, SIZE_MAX);
  std::vector<size_t> rep;
  cls_id[cls[0]] = 0;
  rep.push_back(0);
  Dfa out;
  out.alphabet = d.alphabet;
  out.initial = 0;
  for (size_t i = 0; i < rep.size(); ++i) {
    std::vector<size_t> row(nsym);
    for (size_t sym = 0; sym < nsym; ++sym) {
      size_t tc = cls[next[rep[i]][sym]];
      if (cls_id[tc] == SIZE_MAX) {
        cls_id[tc] = rep.size();
        // Representative: any member works, take the transition target.
        rep.push_back(next[rep[i]][sym]);
      }
      row[sym] = cls_id[tc];
    }
    out.next.push_back(std::move(row));
  }
  out.accepting = Bits(rep.size());
  for (size_t i = 0; i < rep.size(); ++i)
    if (acc[rep[i]]) out.accepting.set(i);
  return out;
}

Dfa complement(Dfa d) {
  d.accepting.flip();
  return d;
}

Dfa combine(const Dfa& a, const Dfa& b, BoolOp op) {
  if (!same_alphabet(*a.alphabet, *b.alphabet))
    throw std::invalid_argument("combining automata over different alphabets");
  size_t nsym = a.alphabet->size();
  auto key = [&](size_t x, size_t y) { return x * b.num_states() + y; };
  std::unordered_map<size_t, size_t> ids;
  std::vector<std::pair<size_t, size_t>> pairs{{a.initial, b.initial}};
  ids.emplace(key(a.initial, b.initial), 0);
  Dfa out;
  out.alphabet = a.alphabet;
  out.initial = 0;
  for (size_t q = 0; q < pairs.size(); ++q) {
    std::vector<size_t> row(nsym);
    for (size_t sym = 0; sym < nsym; ++sym) {
      size_t x = a.next[pairs[q].first][sym];
      size_t y = b.next[pairs[q].second][sym];
      auto [it, ins] = ids.emplace(key(x, y), pairs.size());
      if (ins) pairs.emplace_back(x, y);
      row[sym] = it->second;
    }
    out.next.push_back(std::move(row));
  }
  out.accepting = Bits(pairs.size());
  for (size_t q = 0; q < pairs.size(); ++q) {
    bool x = a.accepting.get(pairs[q].first);
    bool y = b.accepting.get(pairs[q].second);
    bool v = false;
    switch (op) {
      case BoolOp::And: v = x && y; break;
      case BoolOp::Or: v = x || y; break;
      case BoolOp::Diff: v = x && !y; break;
      case BoolOp::Xor: v = x != y; break;
    }
    if (v) out.accepting.set(q);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Prefix closure, runs, emptiness, equivalence

Nfa prefix_automaton(Nfa a) {
  size_t n = a.num_states();
  size_t nsym = a.alphabet->size();
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
  a.accepting = std::move(co);
  return a;
}

Dfa prefix_automaton(Dfa d) {
  size_t n = d.num_states();
  size_t nsym = d.alphabet->size();
  Bits co = d.accepting;
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t q = 0; q < n; ++q) {
      if (co.get(q)) continue;
      for (size_t sym = 0; sym < nsym; ++sym)
        if (co.get(d.next[q][sym])) {
          co.set(q);
          changed = true;
          break;
        }
    }
  }
  d.accepting = std::move(co);
  return d;
}

Nfa to_nfa(const Dfa& d) {
  Nfa out;
  out.alphabet = d.alphabet;
  out.initial = d.initial;
  out.accepting = d.accepting;
  size_t n = d.num_states();
  size_t nsym = d.alphabet->size();
  out.next.assign(n, std::vector<Bits>(nsym, Bits(n)));
  for (size_t q = 0; q < n; ++q)
    for (size_t sym = 0; sym < nsym; ++sym)
      out.next[q][sym].set(d.next[q][sym]);
  return out;
}

bool accepts(const Nfa& a, const Trace& t) {
  size_t n = a.num_states();
  size_t bsz = a.alphabet->base_size();
  Bits cur(n);
  cur.set(a.initial);
  for (size_t i = 0; i < t.size(); ++i) {
    size_t sym = a.alphabet->index_of(t[i]);
    if (a.alphabet->marked() && i + 1 == t.size()) sym += bsz;
    Bits nxt(n);
    cur.for_each_set([&](size_t q) { nxt |= a.next[q][sym]; });
    cur = std::move(nxt);
  }
  return cur.intersects(a.accepting);
}

bool accepts(const Dfa& d, const Trace& t) {
  size_t bsz = d.alphabet->base_size();
  size_t cur = d.initial;
  for (size_t i = 0; i < t.size(); ++i) {
    size_t sym = d.alphabet->index_of(t[i]);
    if (d.alphabet->marked() && i + 1 == t.size()) sym += bsz;
    cur = d.next[cur][sym];
  }
  return d.accepting.get(cur);
}

// Reachability over plain symbols only: a marked symbol can occur only as
// the final element, which acceptance already accounts for.
bool language_empty(const Nfa& a) {
  size_t n = a.num_states();
  size_t limit = a.alphabet->base_size();
  Bits seen(n);
  std::deque<size_t> queue{a.initial};
  seen.set(a.initial);
  while (!queue.empty()) {
    size_t q = queue.front();
    queue.pop_front();
    if (a.accepting.get(q)) return false;
    for (size_t sym = 0; sym < limit; ++sym)
      a.next[q][sym].for_each_set([&](size_t t) {
        if (!seen.get(t)) {
          seen.set(t);
          queue.push_back(t);
        }
      });
  }
  return true;
}

bool language_empty(const Dfa& d) {
  size_t n = d.num_states();
  size_t limit = d.alphabet->base_size();
  Bits seen(n);
  std::deque<size_t> queue{d.initial};
  seen.set(d.initial);
  while (!queue.empty()) {
    size_t q = queue.front();
    queue.pop_front();
    if (d.accepting.get(q)) return false;
    for (size_t sym = 0; sym < limit; ++sym) {
      size_t t = d.next[q][sym];
      if (!seen.get(t)) {
        seen.set(t);
        queue.push_back(t);
      }
    }
  }
  return true;
}

bool dfa_equivalent(const Dfa& a, const Dfa& b) {
  if (!same_alphabet(*a.alphabet, *b.alphabet))
    throw std::invalid_argument("comparing automata over different alphabets");
  size_t nsym = a.alphabet->size();
  auto key = [&](size_t x, size_t y) { return x * b.num_states() + y; };
  std::unordered_set<size_t> seen;
  std::deque<std::pair<size_t, size_t>> queue{{a.initial, b.initial}};
  seen.insert(key(a.initial, b.initial));
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    if (a.accepting.get(x) != b.accepting.get(y)) return false;
    for (size_t sym = 0; sym < nsym; ++sym) {
      size_t nx = a.next[x][sym];
      size_t ny = b.next[y][sym];
      if (seen.insert(key(nx, ny)).second) queue.emplace_back(nx, ny);
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// On-the-fly satisfiability

bool check_satisfiable(Formula f, std::shared_ptr<const Alphabet> base,
                       size_t max_states) {
  Formula g = nnf(f);
  if (!base)
    base = Alphabet::power_set(props_of(g));
  else if (base->marked())
    base = base->without_marker();
  size_t nsym = base->size();

  std::vector<std::vector<Formula>> sets{{g}};
  std::unordered_map<std::vector<Formula>, size_t, SetHash> ids;
  ids.emplace(sets[0], 0);
  if (eps_accepting(sets[0])) return true;
  for (size_t q = 0; q < sets.size(); ++q) {
    for (size_t sym = 0; sym < nsym; ++sym) {
      Interp itp = base->interp(sym);
      Pb conj = pb_true();
      for (Formula psi : sets[q]) conj = pb_and(conj, delta(psi, itp));
      for (std::vector<Formula>& model : minimal_models(conj)) {
        auto [it, inserted] = ids.emplace(model, sets.size());
        if (!inserted) continue;
        if (eps_accepting(model)) return true;
        if (sets.size() >= max_states) throw StateLimitError(max_states);
        sets.push_back(std::move(model));
      }
    }
  }
  return false;
}

bool check_valid(Formula f, std::shared_ptr<const Alphabet> base,
                 size_t max_states) {
  return !check_satisfiable(f_not(f), base, max_states);
}

bool check_implies(Formula f, Formula g,
                   std::shared_ptr<const Alphabet> base, size_t max_states) {
  return !check_satisfiable(f_and(f, f_not(g)), base, max_states);
}

// ---------------------------------------------------------------------------
// Graphviz rendering

namespace {

std::string state_label(const Nfa& a, size_t q) {
  if (q >= a.state_sets.size()) return std::to_string(q);
  std::string s = "{";
  for (size_t i = 0; i < a.state_sets[q].size(); ++i) {
    if (i) s += ", ";
    s += render(a.state_sets[q][i]);
  }
  s += "}";
  return s;
}

}  // namespace

std::string to_dot(const Nfa& a) {
  std::string s = "digraph nfa {\n  rankdir=LR;\n  __start [shape=point];\n";
  for (size_t q = 0; q < a.num_states(); ++q) {
    s += "  q" + std::to_string(q) + " [shape=" +
         (a.accepting.get(q) ? "doublecircle" : "circle") + ", label=\"" +
         state_label(a, q) + "\"];\n";
  }
  s += "  __start -> q" + std::to_string(a.initial) + ";\n";
  for (size_t q = 0; q < a.num_states(); ++q) {
    std::unordered_map<size_t, std::string> grouped;
    for (size_t sym = 0; sym < a.alphabet->size(); ++sym)
      a.next[q][sym].for_each_set([&](size_t t) {
        std::string& lbl = grouped[t];
        if (!lbl.empty()) lbl += ", ";
        lbl += a.alphabet->symbol_name(sym);
      });
    for (size_t t = 0; t < a.num_states(); ++t) {
      auto it = grouped.find(t);
      if (it == grouped.end()) continue;
      s += "  q" + std::to_string(q) + " -> q" + std::to_string(t) +
           " [label=\"" + it->second + "\"];\n";
    }
  }
  s += "}\n";
  return s;
}

std::string to_dot(const Dfa& d) { return to_dot(to_nfa(d)); }

}  // namespace ldlfmon
