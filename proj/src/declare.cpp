#include "ldlfmon/declare.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "json.hpp"
#include "ldlfmon/monitor.hpp"
#include "ldlfmon/parser.hpp"

namespace ldlfmon {

namespace {

struct PatternInfo {
  PatternId id;
  std::string_view name;
  size_t arity;
};

// Indexed by the enum value.
const PatternInfo kPatterns[] = {
    {PatternId::Existence, "existence", 1},
    {PatternId::Absence2, "absence2", 1},
    {PatternId::Choice, "choice", 2},
    {PatternId::ExclusiveChoice, "exclusive_choice", 2},
    {PatternId::RespondedExistence, "responded_existence", 2},
    {PatternId::Coexistence, "coexistence", 2},
    {PatternId::Response, "response", 2},
    {PatternId::Precedence, "precedence", 2},
    {PatternId::Succession, "succession", 2},
    {PatternId::NotCoexistence, "not_coexistence", 2},
    {PatternId::NegationSuccession, "negation_succession", 2},
};

const PatternInfo& info(PatternId p) {
  return kPatterns[static_cast<size_t>(p)];
}

Ltlf pattern_body(PatternId p, Prop a, Prop b) {
  Ltlf pa = lt_prop(a);
  Ltlf fa = lt_eventually(pa);
  Ltlf pb = b ? lt_prop(b) : nullptr;
  Ltlf fb = b ? lt_eventually(pb) : nullptr;
  switch (p) {
    case PatternId::Existence:
      return fa;
    case PatternId::Absence2:
      return lt_not(lt_eventually(lt_and(pa, lt_next(fa))));
    case PatternId::Choice:
      return lt_or(fa, fb);
    case PatternId::ExclusiveChoice:
      return lt_and(lt_or(fa, fb), lt_not(lt_and(fa, fb)));
    case PatternId::RespondedExistence:
      return lt_implies(fa, fb);
    case PatternId::Coexistence:
      return lt_and(lt_implies(fa, fb), lt_implies(fb, fa));
    case PatternId::Response:
      return lt_always(lt_implies(pa, fb));
    case PatternId::Precedence:
      return lt_or(lt_until(lt_not(pb), pa), lt_not(fb));
    case PatternId::Succession:
      return lt_and(pattern_body(PatternId::Response, a, b),
                    pattern_body(PatternId::Precedence, a, b));
    case PatternId::NotCoexistence:
      return lt_not(lt_and(fa, fb));
    case PatternId::NegationSuccession:
      return lt_always(lt_implies(pa, lt_not(fb)));
  }
  throw std::invalid_argument("unknown pattern");
}

void check_params(PatternId p, const std::vector<Prop>& params,
                  const Alphabet& alphabet) {
  const PatternInfo& pi = info(p);
  if (params.size() != pi.arity)
    throw std::invalid_argument("pattern '" + std::string(pi.name) +
                                "' takes " + std::to_string(pi.arity) +
                                " parameter(s), got " +
                                std::to_string(params.size()));
  const std::vector<Prop>& atoms = alphabet.atoms();
  for (Prop q : params) {
    if (q == nullptr || q->kind != PropKind::Atom)
      throw std::invalid_argument("pattern parameters must be task atoms");
    if (std::find(atoms.begin(), atoms.end(), q) == atoms.end())
      throw std::invalid_argument("task '" + q->name +
                                  "' is not in the alphabet");
  }
  if (params.size() == 2 && params[0] == params[1])
    throw std::invalid_argument("pattern parameters must be distinct");
}

// Disjunction of the alphabet tasks not among the parameters; false when the
// parameters cover the whole alphabet.
Prop others_letter(const std::vector<Prop>& params, const Alphabet& alphabet) {
  Prop o = nullptr;
  for (Prop t : alphabet.atoms()) {
    if (std::find(params.begin(), params.end(), t) != params.end()) continue;
    o = o ? prop_or(o, t) : t;
  }
  return o ? o : prop_false();
}

const Constraint& find_constraint(const DeclareModel& m,
                                  const std::string& id) {
  for (const Constraint& c : m.constraints)
    if (c.id == id) return c;
  throw std::invalid_argument("unknown constraint id '" + id + "'");
}

// ---------------------------------------------------------------------------
// Metaconstraint expressions

struct MetaExpr;
using MetaExprPtr = std::unique_ptr<MetaExpr>;

struct MetaExpr {
  enum class Kind { True, False, Atom, Not, And, Or };
  Kind kind = Kind::True;
  std::string id;                   // Atom
  Verdict verdict = Verdict::True;  // Atom in a precondition
  MetaExprPtr lhs, rhs;
};

// Grammar, loosest first: or ::= and ('|' and)*; and ::= unary ('&' unary)*;
// unary ::= '!' unary | '(' or ')' | 'true' | 'false' | atom. Preconditions
// write atoms as [id]=verdict, expectations as bare ids.
class MetaExprParser {
 public:
  MetaExprParser(std::string_view text, bool rv_atoms)
      : text_(text), rv_(rv_atoms) {}

  MetaExprPtr parse() {
    MetaExprPtr e = or_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("expression '" + std::string(text_) +
                                "': " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string ident() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
          c == '-' || c == '.')
        ++pos_;
      else
        break;
    }
    if (pos_ == start) fail("expected an identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  static MetaExprPtr node(MetaExpr::Kind k, MetaExprPtr l = nullptr,
                          MetaExprPtr r = nullptr) {
    auto e = std::make_unique<MetaExpr>();
    e->kind = k;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }

  MetaExprPtr or_expr() {
    MetaExprPtr e = and_expr();
    while (eat('|')) e = node(MetaExpr::Kind::Or, std::move(e), and_expr());
    return e;
  }

  MetaExprPtr and_expr() {
    MetaExprPtr e = unary();
    while (eat('&')) e = node(MetaExpr::Kind::And, std::move(e), unary());
    return e;
  }

  MetaExprPtr unary() {
    if (eat('!')) return node(MetaExpr::Kind::Not, unary());
    if (eat('(')) {
      MetaExprPtr e = or_expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (rv_ && eat('[')) {
      MetaExprPtr e = node(MetaExpr::Kind::Atom);
      e->id = ident();
      if (!eat(']')) fail("expected ']'");
      if (!eat('=')) fail("expected '=' after the constraint reference");
      e->verdict = verdict_from_name(ident());
      return e;
    }
    std::string w = ident();
    if (w == "true") return node(MetaExpr::Kind::True);
    if (w == "false") return node(MetaExpr::Kind::False);
    if (rv_) fail("expected [constraint]=verdict, 'true' or 'false'");
    MetaExprPtr e = node(MetaExpr::Kind::Atom);
    e->id = std::move(w);
    return e;
  }

  std::string_view text_;
  bool rv_;
  size_t pos_ = 0;
};

Formula build_meta(const MetaExpr& e,
                   const std::function<Formula(const MetaExpr&)>& atom) {
  switch (e.kind) {
    case MetaExpr::Kind::True: return f_tt();
    case MetaExpr::Kind::False: return f_ff();
    case MetaExpr::Kind::Atom: return atom(e);
    case MetaExpr::Kind::Not: return f_not(build_meta(*e.lhs, atom));
    case MetaExpr::Kind::And:
      return f_and(build_meta(*e.lhs, atom), build_meta(*e.rhs, atom));
    case MetaExpr::Kind::Or:
      return f_or(build_meta(*e.lhs, atom), build_meta(*e.rhs, atom));
  }
  throw std::logic_error("unreachable");
}

void each_atom(const MetaExpr& e,
               const std::function<void(const MetaExpr&)>& f) {
  if (e.kind == MetaExpr::Kind::Atom) f(e);
  if (e.lhs) each_atom(*e.lhs, f);
  if (e.rhs) each_atom(*e.rhs, f);
}

// Restricts the language to words none of whose proper prefixes are
// accepted: every move out of an accepting state leads to a fresh dead
// state, so a run may visit acceptance only as its final configuration.
Dfa first_match(Dfa d) {
  size_t n = d.num_states();
  size_t nsym = d.alphabet->size();
  for (size_t q = 0; q < n; ++q)
    if (d.accepting.get(q)) d.next[q].assign(nsym, n);
  d.next.push_back(std::vector<size_t>(nsym, n));
  Bits acc(n + 1);
  d.accepting.for_each_set([&](size_t q) { acc.set(q); });
  d.accepting = std::move(acc);
  return d;
}

Dfa formula_dfa(Formula f, const std::shared_ptr<const Alphabet>& alpha,
                size_t max_states) {
  return minimize(
      determinize(strip_last(ldlf_to_nfa(f, alpha, max_states)), max_states));
}

}  // namespace

const std::vector<PatternId>& all_patterns() {
  static const std::vector<PatternId> all = [] {
    std::vector<PatternId> v;
    for (const PatternInfo& pi : kPatterns) v.push_back(pi.id);
    return v;
  }();
  return all;
}

std::string_view pattern_name(PatternId p) { return info(p).name; }

PatternId pattern_from_name(std::string_view name) {
  for (const PatternInfo& pi : kPatterns)
    if (pi.name == name) return pi.id;
  throw std::invalid_argument("unknown pattern '" + std::string(name) + "'");
}

size_t pattern_arity(PatternId p) { return info(p).arity; }

Formula instantiate_pattern(PatternId p, const std::vector<Prop>& params,
                            const Alphabet& alphabet) {
  check_params(p, params, alphabet);
  Prop a = params[0];
  Prop b = params.size() > 1 ? params[1] : nullptr;
  return ltlf_to_ldlf(pattern_body(p, a, b));
}

Path pattern_prefix_regex(PatternId p, const std::vector<Prop>& params,
                          const Alphabet& alphabet) {
  check_params(p, params, alphabet);
  Path a = p_letter(params[0]);
  Path b = params.size() > 1 ? p_letter(params[1]) : nullptr;
  Path o = p_letter(others_letter(params, alphabet));
  Path any = b ? p_union(p_union(a, b), o) : p_union(a, o);
  switch (p) {
    case PatternId::Existence:
      return p_star(p_union(a, o));
    case PatternId::Absence2:
      return p_union(p_star(o), p_seq(p_seq(p_star(o), a), p_star(o)));
    case PatternId::Choice:
    case PatternId::RespondedExistence:
    case PatternId::Coexistence:
    case PatternId::Response:
      return p_star(any);
    case PatternId::ExclusiveChoice:
    case PatternId::NotCoexistence:
      return p_union(p_star(p_union(a, o)), p_star(p_union(b, o)));
    case PatternId::Precedence:
    case PatternId::Succession:
      return p_seq(p_star(o), p_star(p_seq(a, p_star(any))));
    case PatternId::NegationSuccession:
      return p_seq(p_star(p_union(b, o)), p_star(p_union(a, o)));
  }
  throw std::invalid_argument("unknown pattern");
}

std::vector<Verdict> possible_rv_states(PatternId p) {
  using V = Verdict;
  switch (p) {
    case PatternId::Existence:
    case PatternId::Choice:
      return {V::True, V::TempFalse};
    case PatternId::Absence2:
    case PatternId::NotCoexistence:
    case PatternId::NegationSuccession:
      return {V::False, V::TempTrue};
    case PatternId::ExclusiveChoice:
      return {V::False, V::TempTrue, V::TempFalse};
    case PatternId::RespondedExistence:
    case PatternId::Coexistence:
      return {V::True, V::TempTrue, V::TempFalse};
    case PatternId::Response:
      return {V::TempTrue, V::TempFalse};
    case PatternId::Precedence:
      return {V::True, V::False, V::TempTrue};
    case PatternId::Succession:
      return {V::False, V::TempTrue, V::TempFalse};
  }
  throw std::invalid_argument("unknown pattern");
}

std::shared_ptr<const Alphabet> model_alphabet(const DeclareModel& m) {
  return Alphabet::tasks(m.tasks);
}

Formula constraint_formula(const DeclareModel& m, const Constraint& c) {
  if (c.pattern)
    return instantiate_pattern(*c.pattern, c.params, *model_alphabet(m));
  if (!c.raw)
    throw std::invalid_argument("constraint '" + c.id + "' has no body");
  return c.raw;
}

Formula compile_metaconstraint(const Metaconstraint& mc, const DeclareModel& m,
                               size_t max_states) {
  auto alpha = model_alphabet(m);
  MetaExprPtr pre_expr = MetaExprParser(mc.pre, true).parse();
  MetaExprPtr exp_expr = MetaExprParser(mc.exp, false).parse();

  std::unordered_map<std::string, RvFormulaSet> rv_cache;
  Formula pre = build_meta(*pre_expr, [&](const MetaExpr& e) {
    auto it = rv_cache.find(e.id);
    if (it == rv_cache.end()) {
      Formula cf = constraint_formula(m, find_constraint(m, e.id));
      it = rv_cache.emplace(e.id, rv_formulas(cf, alpha, max_states)).first;
    }
    return it->second.for_verdict(e.verdict);
  });
  Formula exp = build_meta(*exp_expr, [&](const MetaExpr& e) {
    return constraint_formula(m, find_constraint(m, e.id));
  });

  if (!mc.guarded) return f_implies(pre, exp);
  // The guard matches the prefixes at which the precondition first becomes
  // true. Keeping every satisfying prefix instead would also match the full
  // trace, demanding the expectation of its empty remainder and thereby
  // dooming expectations that need at least one further event.
  Dfa d = first_match(formula_dfa(pre, alpha, max_states));
  Path guard = to_regex(minimize(d));
  return f_implies(pre, f_box(guard, exp));
}

Formula model_formula(const DeclareModel& m, size_t max_states) {
  Formula out = nullptr;
  for (const Constraint& c : m.constraints) {
    Formula cf = constraint_formula(m, c);
    out = out ? f_and(out, cf) : cf;
  }
  for (const Metaconstraint& mc : m.metaconstraints) {
    Formula cf = compile_metaconstraint(mc, m, max_states);
    out = out ? f_and(out, cf) : cf;
  }
  return out ? out : f_tt();
}

Trace task_trace(const std::vector<std::string>& events,
                 const Alphabet& alphabet) {
  const std::vector<Prop>& atoms = alphabet.atoms();
  Trace t;
  t.reserve(events.size());
  for (const std::string& e : events) {
    Prop p = prop_atom(e);
    if (std::find(atoms.begin(), atoms.end(), p) == atoms.end())
      throw std::invalid_argument("unknown task '" + e + "'");
    t.push_back(make_step({p}));
  }
  return t;
}

Formula declare_assumption(const std::vector<Prop>& tasks) {
  if (tasks.empty()) throw std::invalid_argument("no tasks");
  Prop one = nullptr;
  for (size_t i = 0; i < tasks.size(); ++i) {
    Prop conj = tasks[i];
    for (size_t j = 0; j < tasks.size(); ++j)
      if (j != i) conj = prop_and(conj, prop_not(tasks[j]));
    one = one ? prop_or(one, conj) : conj;
  }
  return f_box(p_star(p_letter(prop_true())),
               f_or(end_formula(), f_prop(one)));
}

bool check_consistency(const DeclareModel& m, size_t max_states) {
  return check_satisfiable(model_formula(m, max_states), model_alphabet(m),
                           max_states);
}

std::vector<Prop> dead_tasks(const DeclareModel& m, size_t max_states) {
  auto alpha = model_alphabet(m);
  Formula conj = model_formula(m, max_states);
  if (!check_satisfiable(conj, alpha, max_states))
    throw std::invalid_argument("model is inconsistent");
  std::vector<Prop> dead;
  for (Prop a : m.tasks) {
    Formula ever = ltlf_to_ldlf(lt_eventually(lt_prop(a)));
    if (!check_satisfiable(f_and(conj, ever), alpha, max_states))
      dead.push_back(a);
  }
  return dead;
}

EnactmentInfo enactment_info(const DeclareModel& m,
                             const std::vector<std::string>& events,
                             size_t max_states) {
  auto alpha = model_alphabet(m);
  Trace t = task_trace(events, *alpha);
  Dfa d = formula_dfa(model_formula(m, max_states), alpha, max_states);
  // Same states and moves; accepting marks the states that can still reach
  // acceptance.
  Dfa live = prefix_automaton(d);

  size_t q = d.initial;
  for (const Step& s : t) q = d.next[q][alpha->index_of(s)];

  EnactmentInfo out;
  out.can_end = d.accepting.get(q);
  for (Prop task : m.tasks) {
    size_t sym = alpha->index_of(make_step({task}));
    if (live.accepting.get(d.next[q][sym])) out.legal_tasks.push_back(task);
  }
  for (const Constraint& c : m.constraints) {
    Monitor mon = build_monitor(constraint_formula(m, c), alpha, max_states);
    for (const Step& s : t) mon.step(s);
    Verdict v = mon.verdict();
    if (v == Verdict::False || v == Verdict::TempFalse)
      out.pending_constraint_ids.push_back(c.id);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Model files

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& msg) {
  throw std::invalid_argument("model JSON: " + where + ": " + msg);
}

std::string str_field(const json& obj, const std::string& where,
                      const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) bad(where, std::string("missing \"") + key + "\"");
  if (!it->is_string()) bad(where, std::string("\"") + key + "\" must be a string");
  return it->get<std::string>();
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<std::string_view> allowed) {
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
      bad(where, "unknown key \"" + item.key() + "\"");
  }
}

}  // namespace

DeclareModel load_model(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("model JSON: ") + e.what());
  }
  if (!j.is_object()) bad("top level", "must be an object");
  check_keys(j, "top level", {"tasks", "constraints", "metaconstraints"});

  DeclareModel m;
  auto tasks_it = j.find("tasks");
  if (tasks_it == j.end() || !tasks_it->is_array() || tasks_it->empty())
    bad("\"tasks\"", "must be a non-empty array of task names");
  for (const json& e : *tasks_it) {
    if (!e.is_string()) bad("\"tasks\"", "entries must be strings");
    Prop p = prop_atom(e.get<std::string>());
    if (std::find(m.tasks.begin(), m.tasks.end(), p) != m.tasks.end())
      bad("\"tasks\"", "duplicate task \"" + e.get<std::string>() + "\"");
    m.tasks.push_back(p);
  }
  auto known_task = [&](Prop p) {
    return std::find(m.tasks.begin(), m.tasks.end(), p) != m.tasks.end();
  };
  auto alpha = Alphabet::tasks(m.tasks);

  if (auto cs = j.find("constraints"); cs != j.end()) {
    if (!cs->is_array()) bad("\"constraints\"", "must be an array");
    for (size_t i = 0; i < cs->size(); ++i) {
      const json& e = (*cs)[i];
      std::string where = "constraints[" + std::to_string(i) + "]";
      if (!e.is_object()) bad(where, "must be an object");
      check_keys(e, where, {"id", "pattern", "params", "formula", "ltlf"});
      Constraint c;
      c.id = str_field(e, where, "id");
      for (const Constraint& prev : m.constraints)
        if (prev.id == c.id) bad(where, "duplicate id \"" + c.id + "\"");
      int bodies = e.contains("pattern") + e.contains("formula") +
                   e.contains("ltlf");
      if (bodies != 1)
        bad(where, "needs exactly one of \"pattern\", \"formula\", \"ltlf\"");
      try {
        if (e.contains("pattern")) {
          c.pattern = pattern_from_name(str_field(e, where, "pattern"));
          auto ps = e.find("params");
          if (ps == e.end() || !ps->is_array())
            bad(where, "\"params\" must be an array of task names");
          for (const json& pe : *ps) {
            if (!pe.is_string()) bad(where, "\"params\" entries must be strings");
            c.params.push_back(prop_atom(pe.get<std::string>()));
          }
          check_params(*c.pattern, c.params, *alpha);
        } else if (e.contains("formula")) {
          c.raw = parse_ldlf(str_field(e, where, "formula"));
        } else {
          c.raw = ltlf_to_ldlf(parse_ltlf(str_field(e, where, "ltlf")));
        }
      } catch (const ParseError& ex) {
        bad(where, ex.what());
      } catch (const std::invalid_argument& ex) {
        bad(where, ex.what());
      }
      if (c.raw) {
        for (Prop p : props_of(c.raw))
          if (!known_task(p)) bad(where, "references unknown task \"" + p->name + "\"");
      }
      m.constraints.push_back(std::move(c));
    }
  }

  if (auto ms = j.find("metaconstraints"); ms != j.end()) {
    if (!ms->is_array()) bad("\"metaconstraints\"", "must be an array");
    for (size_t i = 0; i < ms->size(); ++i) {
      const json& e = (*ms)[i];
      std::string where = "metaconstraints[" + std::to_string(i) + "]";
      if (!e.is_object()) bad(where, "must be an object");
      check_keys(e, where, {"pre", "exp", "guarded"});
      Metaconstraint mc;
      mc.pre = str_field(e, where, "pre");
      mc.exp = str_field(e, where, "exp");
      if (auto g = e.find("guarded"); g != e.end()) {
        if (!g->is_boolean()) bad(where, "\"guarded\" must be a boolean");
        mc.guarded = g->get<bool>();
      }
      try {
        // Resolve references now so a bad model fails at load, not at
        // compile. Metaconstraints may not reference each other.
        auto check_ref = [&](const MetaExpr& a) { find_constraint(m, a.id); };
        each_atom(*MetaExprParser(mc.pre, true).parse(), check_ref);
        each_atom(*MetaExprParser(mc.exp, false).parse(), check_ref);
      } catch (const std::invalid_argument& ex) {
        bad(where, ex.what());
      }
      m.metaconstraints.push_back(std::move(mc));
    }
  }
  return m;
}

}  // namespace ldlfmon
