#include "ldlfmon/formula.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace ldlfmon {

namespace {

inline size_t hash_mix(size_t seed, size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

template <typename Node>
struct NodeHash {
  size_t operator()(const std::unique_ptr<Node>& n) const { return n->hash; }
};

bool same(const PropNode& a, const PropNode& b) {
  return a.kind == b.kind && a.name == b.name && a.lhs == b.lhs &&
         a.rhs == b.rhs;
}
bool same(const FormulaNode& a, const FormulaNode& b) {
  return a.kind == b.kind && a.prop == b.prop && a.lhs == b.lhs &&
         a.rhs == b.rhs && a.path == b.path;
}
bool same(const PathNode& a, const PathNode& b) {
  return a.kind == b.kind && a.prop == b.prop && a.test == b.test &&
         a.lhs == b.lhs && a.rhs == b.rhs;
}
bool same(const LtlfNode& a, const LtlfNode& b) {
  return a.kind == b.kind && a.prop == b.prop && a.lhs == b.lhs &&
         a.rhs == b.rhs;
}

template <typename Node>
struct NodeEq {
  bool operator()(const std::unique_ptr<Node>& a,
                  const std::unique_ptr<Node>& b) const {
    return a->hash == b->hash && same(*a, *b);
  }
};

template <typename Node>
using InternSet =
    std::unordered_set<std::unique_ptr<Node>, NodeHash<Node>, NodeEq<Node>>;

struct Tables {
  std::mutex mu;
  uint32_t next_id = 0;
  InternSet<PropNode> props;
  InternSet<FormulaNode> formulas;
  InternSet<PathNode> paths;
  InternSet<LtlfNode> ltlfs;
};

Tables& tables() {
  static Tables t;
  return t;
}

template <typename Node>
const Node* intern(InternSet<Node>& set, std::unique_ptr<Node> cand) {
  Tables& t = tables();
  std::lock_guard<std::mutex> lock(t.mu);
  auto it = set.find(cand);
  if (it != set.end()) return it->get();
  cand->id = t.next_id++;
  const Node* out = cand.get();
  set.insert(std::move(cand));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Propositional constructors

static Prop intern_prop(PropKind k, std::string name, Prop l, Prop r) {
  auto n = std::make_unique<PropNode>();
  n->kind = k;
  n->name = std::move(name);
  n->lhs = l;
  n->rhs = r;
  size_t h = hash_mix(static_cast<size_t>(k), std::hash<std::string>{}(n->name));
  h = hash_mix(h, l ? l->hash : 0);
  h = hash_mix(h, r ? r->hash : 1);
  n->hash = h;
  return intern(tables().props, std::move(n));
}

Prop prop_true() {
  static Prop p = intern_prop(PropKind::True, "", nullptr, nullptr);
  return p;
}
Prop prop_false() {
  static Prop p = intern_prop(PropKind::False, "", nullptr, nullptr);
  return p;
}
Prop prop_atom(std::string_view name) {
  if (name.empty()) throw std::invalid_argument("empty atom name");
  return intern_prop(PropKind::Atom, std::string(name), nullptr, nullptr);
}
Prop prop_not(Prop p) { return intern_prop(PropKind::Not, "", p, nullptr); }
Prop prop_and(Prop a, Prop b) { return intern_prop(PropKind::And, "", a, b); }
Prop prop_or(Prop a, Prop b) { return intern_prop(PropKind::Or, "", a, b); }

bool prop_eval(Prop p, const std::vector<Prop>& true_atoms) {
  switch (p->kind) {
    case PropKind::True: return true;
    case PropKind::False: return false;
    case PropKind::Atom:
      return std::binary_search(true_atoms.begin(), true_atoms.end(), p,
                                [](Prop a, Prop b) { return a->id < b->id; });
    case PropKind::Not: return !prop_eval(p->lhs, true_atoms);
    case PropKind::And:
      return prop_eval(p->lhs, true_atoms) && prop_eval(p->rhs, true_atoms);
    case PropKind::Or:
      return prop_eval(p->lhs, true_atoms) || prop_eval(p->rhs, true_atoms);
  }
  throw std::logic_error("bad PropKind");
}

void collect_atoms(Prop p, std::vector<Prop>& out) {
  switch (p->kind) {
    case PropKind::True:
    case PropKind::False: return;
    case PropKind::Atom: out.push_back(p); return;
    case PropKind::Not: collect_atoms(p->lhs, out); return;
    case PropKind::And:
    case PropKind::Or:
      collect_atoms(p->lhs, out);
      collect_atoms(p->rhs, out);
      return;
  }
}

static void sort_unique_props(std::vector<Prop>& v) {
  std::sort(v.begin(), v.end(), [](Prop a, Prop b) { return a->id < b->id; });
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// ---------------------------------------------------------------------------
// LDLf formula constructors

static Formula intern_formula(FormulaKind k, Prop p, Formula l, Formula r,
                              Path path) {
  auto n = std::make_unique<FormulaNode>();
  n->kind = k;
  n->prop = p;
  n->lhs = l;
  n->rhs = r;
  n->path = path;
  size_t h = hash_mix(0x1f0 + static_cast<size_t>(k), p ? p->hash : 0);
  h = hash_mix(h, l ? l->hash : 0);
  h = hash_mix(h, r ? r->hash : 1);
  h = hash_mix(h, path ? path->hash : 2);
  n->hash = h;
  return intern(tables().formulas, std::move(n));
}

Formula f_tt() {
  static Formula f =
      intern_formula(FormulaKind::Tt, nullptr, nullptr, nullptr, nullptr);
  return f;
}
Formula f_ff() {
  static Formula f =
      intern_formula(FormulaKind::Ff, nullptr, nullptr, nullptr, nullptr);
  return f;
}
Formula f_prop(Prop p) {
  switch (p->kind) {
    case PropKind::And: return f_and(f_prop(p->lhs), f_prop(p->rhs));
    case PropKind::Or: return f_or(f_prop(p->lhs), f_prop(p->rhs));
    case PropKind::Not: return f_diamond(p_letter(p), f_tt());
    default:
      return intern_formula(FormulaKind::Prop, p, nullptr, nullptr, nullptr);
  }
}
Formula f_prop(std::string_view atom) { return f_prop(prop_atom(atom)); }
Formula f_not(Formula f) {
  return intern_formula(FormulaKind::Not, nullptr, f, nullptr, nullptr);
}
Formula f_and(Formula a, Formula b) {
  return intern_formula(FormulaKind::And, nullptr, a, b, nullptr);
}
Formula f_or(Formula a, Formula b) {
  return intern_formula(FormulaKind::Or, nullptr, a, b, nullptr);
}
Formula f_implies(Formula a, Formula b) { return f_or(f_not(a), b); }
Formula f_diamond(Path r, Formula f) {
  return intern_formula(FormulaKind::Diamond, nullptr, f, nullptr, r);
}
Formula f_box(Path r, Formula f) {
  return intern_formula(FormulaKind::Box, nullptr, f, nullptr, r);
}

// ---------------------------------------------------------------------------
// Path constructors

static Path intern_path(PathKind k, bool test_only, Prop p, Formula t, Path l,
                        Path r) {
  auto n = std::make_unique<PathNode>();
  n->kind = k;
  n->test_only = test_only;
  n->prop = p;
  n->test = t;
  n->lhs = l;
  n->rhs = r;
  size_t h = hash_mix(0x2f0 + static_cast<size_t>(k), p ? p->hash : 0);
  h = hash_mix(h, t ? t->hash : 0);
  h = hash_mix(h, l ? l->hash : 1);
  h = hash_mix(h, r ? r->hash : 2);
  n->hash = h;
  return intern(tables().paths, std::move(n));
}

Path p_letter(Prop p) {
  return intern_path(PathKind::Prop, false, p, nullptr, nullptr, nullptr);
}
Path p_test(Formula f) {
  return intern_path(PathKind::Test, true, nullptr, f, nullptr, nullptr);
}

bool is_false_letter(Path p) {
  return p->kind == PathKind::Prop && p->prop == prop_false();
}
bool is_epsilon_test(Path p) {
  return p->kind == PathKind::Test && p->test == f_tt();
}

static void collect_union(Path p, std::vector<Path>& out) {
  if (p->kind == PathKind::Union) {
    collect_union(p->lhs, out);
    collect_union(p->rhs, out);
  } else {
    out.push_back(p);
  }
}

Path p_union(Path a, Path b) {
  std::vector<Path> branches;
  collect_union(a, branches);
  collect_union(b, branches);
  std::vector<Path> kept;
  for (Path p : branches) {
    if (is_false_letter(p)) continue;
    if (std::find(kept.begin(), kept.end(), p) == kept.end()) kept.push_back(p);
  }
  if (kept.empty()) return p_letter(prop_false());
  Path acc = kept[0];
  for (size_t i = 1; i < kept.size(); ++i) {
    acc = intern_path(PathKind::Union, acc->test_only && kept[i]->test_only,
                      nullptr, nullptr, acc, kept[i]);
  }
  return acc;
}

Path p_seq(Path a, Path b) {
  if (is_false_letter(a) || is_false_letter(b)) return p_letter(prop_false());
  if (is_epsilon_test(a)) return b;
  if (is_epsilon_test(b)) return a;
  return intern_path(PathKind::Seq, a->test_only && b->test_only, nullptr,
                     nullptr, a, b);
}

Path p_star(Path a) {
  if (is_false_letter(a) || is_epsilon_test(a)) return p_test(f_tt());
  if (a->kind == PathKind::Star) return a;
  return intern_path(PathKind::Star, a->test_only, nullptr, nullptr, a,
                     nullptr);
}

Formula end_formula() {
  static Formula f = f_box(p_letter(prop_true()), f_ff());
  return f;
}
Formula last_formula() {
  static Formula f = f_diamond(p_letter(prop_true()), end_formula());
  return f;
}

// ---------------------------------------------------------------------------
// Negation normal form

namespace {

struct NnfCtx {
  std::unordered_map<Formula, Formula> pos, neg;
  std::unordered_map<Path, Path> path;

  Formula down(Formula f);
  Formula down_neg(Formula f);
  Path down_path(Path p);
};

Formula NnfCtx::down(Formula f) {
  auto it = pos.find(f);
  if (it != pos.end()) return it->second;
  Formula out;
  switch (f->kind) {
    case FormulaKind::Tt:
    case FormulaKind::Ff:
    case FormulaKind::Prop: out = f; break;
    case FormulaKind::Not: out = down_neg(f->lhs); break;
    case FormulaKind::And: out = f_and(down(f->lhs), down(f->rhs)); break;
    case FormulaKind::Or: out = f_or(down(f->lhs), down(f->rhs)); break;
    case FormulaKind::Diamond:
      out = f_diamond(down_path(f->path), down(f->lhs));
      break;
    case FormulaKind::Box:
      out = f_box(down_path(f->path), down(f->lhs));
      break;
    default: throw std::logic_error("bad FormulaKind");
  }
  pos.emplace(f, out);
  return out;
}

Formula NnfCtx::down_neg(Formula f) {
  auto it = neg.find(f);
  if (it != neg.end()) return it->second;
  Formula out;
  switch (f->kind) {
    case FormulaKind::Tt: out = f_ff(); break;
    case FormulaKind::Ff: out = f_tt(); break;
    case FormulaKind::Prop:
      // not(phi) for propositional phi is [phi]ff: false wherever phi holds,
      // true past the end of the trace.
      out = f_box(p_letter(f->prop), f_ff());
      break;
    case FormulaKind::Not: out = down(f->lhs); break;
    case FormulaKind::And: out = f_or(down_neg(f->lhs), down_neg(f->rhs)); break;
    case FormulaKind::Or: out = f_and(down_neg(f->lhs), down_neg(f->rhs)); break;
    case FormulaKind::Diamond:
      out = f_box(down_path(f->path), down_neg(f->lhs));
      break;
    case FormulaKind::Box:
      out = f_diamond(down_path(f->path), down_neg(f->lhs));
      break;
    default: throw std::logic_error("bad FormulaKind");
  }
  neg.emplace(f, out);
  return out;
}

Path NnfCtx::down_path(Path p) {
  auto it = path.find(p);
  if (it != path.end()) return it->second;
  Path out;
  switch (p->kind) {
    case PathKind::Prop: out = p; break;
    case PathKind::Test: out = p_test(down(p->test)); break;
    case PathKind::Union: out = p_union(down_path(p->lhs), down_path(p->rhs)); break;
    case PathKind::Seq: out = p_seq(down_path(p->lhs), down_path(p->rhs)); break;
    case PathKind::Star: out = p_star(down_path(p->lhs)); break;
    default: throw std::logic_error("bad PathKind");
  }
  path.emplace(p, out);
  return out;
}

bool is_nnf_path(Path p);

bool is_nnf_rec(Formula f) {
  switch (f->kind) {
    case FormulaKind::Tt:
    case FormulaKind::Ff:
    case FormulaKind::Prop: return true;
    case FormulaKind::Not: return false;
    case FormulaKind::And:
    case FormulaKind::Or: return is_nnf_rec(f->lhs) && is_nnf_rec(f->rhs);
    case FormulaKind::Diamond:
    case FormulaKind::Box:
      return is_nnf_path(f->path) && is_nnf_rec(f->lhs);
  }
  return false;
}

bool is_nnf_path(Path p) {
  switch (p->kind) {
    case PathKind::Prop: return true;
    case PathKind::Test: return is_nnf_rec(p->test);
    case PathKind::Union:
    case PathKind::Seq: return is_nnf_path(p->lhs) && is_nnf_path(p->rhs);
    case PathKind::Star: return is_nnf_path(p->lhs);
  }
  return false;
}

}  // namespace

Formula nnf(Formula f) {
  NnfCtx ctx;
  return ctx.down(f);
}

bool is_nnf(Formula f) { return is_nnf_rec(f); }

// ---------------------------------------------------------------------------
// Empty-trace truth value

static bool path_empty_value(Path p);

bool holds_on_empty(Formula f) {
  switch (f->kind) {
    case FormulaKind::Tt: return true;
    case FormulaKind::Ff: return false;
    case FormulaKind::Prop: return false;
    case FormulaKind::Not: return !holds_on_empty(f->lhs);
    case FormulaKind::And:
      return holds_on_empty(f->lhs) && holds_on_empty(f->rhs);
    case FormulaKind::Or:
      return holds_on_empty(f->lhs) || holds_on_empty(f->rhs);
    case FormulaKind::Diamond:
      return path_empty_value(f->path) && holds_on_empty(f->lhs);
    case FormulaKind::Box:
      return !path_empty_value(f->path) || holds_on_empty(f->lhs);
  }
  throw std::logic_error("bad FormulaKind");
}

// Whether the path can match the empty segment at the end of the trace:
// letters cannot, tests follow their formula, star always can.
static bool path_empty_value(Path p) {
  switch (p->kind) {
    case PathKind::Prop: return false;
    case PathKind::Test: return holds_on_empty(p->test);
    case PathKind::Union:
      return path_empty_value(p->lhs) || path_empty_value(p->rhs);
    case PathKind::Seq:
      return path_empty_value(p->lhs) && path_empty_value(p->rhs);
    case PathKind::Star: return true;
  }
  throw std::logic_error("bad PathKind");
}

Formula regex_embed(Path r) { return f_diamond(r, end_formula()); }

// ---------------------------------------------------------------------------
// props_of

namespace {

struct PropCollector {
  std::unordered_set<const void*> seen;
  std::vector<Prop> out;

  void walk(Prop p) {
    if (p) collect_atoms(p, out);
  }
  void walk(Formula f) {
    if (!f || !seen.insert(f).second) return;
    walk(f->prop);
    walk(f->lhs);
    walk(f->rhs);
    walk(f->path);
  }
  void walk(Path p) {
    if (!p || !seen.insert(p).second) return;
    walk(p->prop);
    walk(p->test);
    walk(p->lhs);
    walk(p->rhs);
  }
  void walk(Ltlf f) {
    if (!f || !seen.insert(f).second) return;
    walk(f->prop);
    walk(f->lhs);
    walk(f->rhs);
  }
};

}  // namespace

std::vector<Prop> props_of(Formula f) {
  PropCollector c;
  c.walk(f);
  sort_unique_props(c.out);
  return c.out;
}
std::vector<Prop> props_of(Path r) {
  PropCollector c;
  c.walk(r);
  sort_unique_props(c.out);
  return c.out;
}
std::vector<Prop> props_of(Ltlf f) {
  PropCollector c;
  c.walk(f);
  sort_unique_props(c.out);
  return c.out;
}

// ---------------------------------------------------------------------------
// LTLf constructors

static Ltlf intern_ltlf(LtlfKind k, Prop p, Ltlf l, Ltlf r) {
  auto n = std::make_unique<LtlfNode>();
  n->kind = k;
  n->prop = p;
  n->lhs = l;
  n->rhs = r;
  size_t h = hash_mix(0x3f0 + static_cast<size_t>(k), p ? p->hash : 0);
  h = hash_mix(h, l ? l->hash : 0);
  h = hash_mix(h, r ? r->hash : 1);
  n->hash = h;
  return intern(tables().ltlfs, std::move(n));
}

Ltlf lt_prop(Prop p) {
  if (p->kind != PropKind::Atom && p->kind != PropKind::True &&
      p->kind != PropKind::False)
    throw std::invalid_argument("lt_prop needs an atom or a constant");
  return intern_ltlf(LtlfKind::Prop, p, nullptr, nullptr);
}
Ltlf lt_prop(std::string_view atom) { return lt_prop(prop_atom(atom)); }
Ltlf lt_not(Ltlf f) { return intern_ltlf(LtlfKind::Not, nullptr, f, nullptr); }
Ltlf lt_and(Ltlf a, Ltlf b) { return intern_ltlf(LtlfKind::And, nullptr, a, b); }
Ltlf lt_or(Ltlf a, Ltlf b) { return intern_ltlf(LtlfKind::Or, nullptr, a, b); }
Ltlf lt_implies(Ltlf a, Ltlf b) { return lt_or(lt_not(a), b); }
Ltlf lt_next(Ltlf f) { return intern_ltlf(LtlfKind::Next, nullptr, f, nullptr); }
Ltlf lt_weak_next(Ltlf f) {
  return intern_ltlf(LtlfKind::WeakNext, nullptr, f, nullptr);
}
Ltlf lt_eventually(Ltlf f) {
  return intern_ltlf(LtlfKind::Eventually, nullptr, f, nullptr);
}
Ltlf lt_always(Ltlf f) {
  return intern_ltlf(LtlfKind::Always, nullptr, f, nullptr);
}
Ltlf lt_until(Ltlf a, Ltlf b) {
  return intern_ltlf(LtlfKind::Until, nullptr, a, b);
}

// ---------------------------------------------------------------------------
// LTLf to LDLf

namespace {

// Pins the operand's value on the empty remainder to false (diamond contexts)
// or true (box contexts); on nonempty remainders both are the identity.
Formula strengthen(Formula f) {
  if (f->kind == FormulaKind::Prop) return f_diamond(p_letter(f->prop), f_tt());
  if (!holds_on_empty(f)) return f;
  return f_and(f, f_diamond(p_letter(prop_true()), f_tt()));
}

Formula weaken(Formula f) {
  if (f->kind == FormulaKind::Prop)
    return f_box(p_letter(prop_not(f->prop)), f_ff());
  if (holds_on_empty(f)) return f;
  return f_or(f, end_formula());
}

Path true_step() { return p_letter(prop_true()); }

Formula translate(Ltlf f, std::unordered_map<Ltlf, Formula>& memo) {
  auto it = memo.find(f);
  if (it != memo.end()) return it->second;
  Formula out;
  switch (f->kind) {
    case LtlfKind::Prop: out = f_prop(f->prop); break;
    case LtlfKind::Not: out = f_not(translate(f->lhs, memo)); break;
    case LtlfKind::And:
      out = f_and(translate(f->lhs, memo), translate(f->rhs, memo));
      break;
    case LtlfKind::Or:
      out = f_or(translate(f->lhs, memo), translate(f->rhs, memo));
      break;
    case LtlfKind::Next:
      out = f_diamond(true_step(), strengthen(translate(f->lhs, memo)));
      break;
    case LtlfKind::WeakNext:
      out = f_box(true_step(), weaken(translate(f->lhs, memo)));
      break;
    case LtlfKind::Eventually:
      out = f_diamond(p_star(true_step()), strengthen(translate(f->lhs, memo)));
      break;
    case LtlfKind::Always:
      out = f_box(p_star(true_step()), weaken(translate(f->lhs, memo)));
      break;
    case LtlfKind::Until:
      out = f_diamond(
          p_star(p_seq(p_test(translate(f->lhs, memo)), true_step())),
          strengthen(translate(f->rhs, memo)));
      break;
    default: throw std::logic_error("bad LtlfKind");
  }
  memo.emplace(f, out);
  return out;
}

}  // namespace

Formula ltlf_to_ldlf(Ltlf f) {
  std::unordered_map<Ltlf, Formula> memo;
  return translate(f, memo);
}

}  // namespace ldlfmon
