#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <string>
#include <vector>

#include "ldlfmon/declare.hpp"
#include "ldlfmon/monitor.hpp"
#include "ldlfmon/parser.hpp"
#include "ldlfmon/semantics.hpp"
#include "testutil.hpp"

using namespace ldlfmon;
using testutil::all_task_traces;
using testutil::all_traces;
using V = Verdict;

namespace {

std::vector<Prop> abo_tasks() {
  return {prop_atom("a"), prop_atom("b"), prop_atom("o")};
}

std::vector<Prop> pattern_params(PatternId p) {
  std::vector<Prop> params{prop_atom("a")};
  if (pattern_arity(p) == 2) params.push_back(prop_atom("b"));
  return params;
}

Dfa monitor_dfa(Formula f, std::shared_ptr<const Alphabet> alpha) {
  return minimize(determinize(strip_last(ldlf_to_nfa(f, alpha))));
}

// The order-process model: an order closes at most once, may not be
// cancelled after closing, and supplier payment requires a closed order.
DeclareModel order_model() {
  Prop close = prop_atom("close_order");
  Prop cancel = prop_atom("cancel_order");
  Prop pay = prop_atom("pay_suppl");
  DeclareModel m;
  m.tasks = {close, cancel, pay};
  m.constraints.push_back({"close", PatternId::Absence2, {close}, nullptr});
  m.constraints.push_back(
      {"canc", PatternId::NegationSuccession, {close, cancel}, nullptr});
  m.constraints.push_back(
      {"pay", PatternId::Precedence, {close, pay}, nullptr});
  return m;
}

// Exhaustive classification over task extensions, exact once the horizon
// reaches the monitor automaton's state count.
struct ExtFlags {
  bool good = false;
  bool bad = false;
};

void explore(Trace& t, Formula f, const std::vector<Prop>& tasks, int depth,
             ExtFlags& fl) {
  (satisfies(t, f) ? fl.good : fl.bad) = true;
  if (depth == 0 || (fl.good && fl.bad)) return;
  for (Prop a : tasks) {
    t.push_back(make_step({a}));
    explore(t, f, tasks, depth - 1, fl);
    t.pop_back();
    if (fl.good && fl.bad) return;
  }
}

V brute_task_verdict(const Trace& t, Formula f, const std::vector<Prop>& tasks,
                     int horizon) {
  Trace w = t;
  ExtFlags fl;
  explore(w, f, tasks, horizon, fl);
  if (!fl.bad) return V::True;
  if (!fl.good) return V::False;
  return satisfies(t, f) ? V::TempTrue : V::TempFalse;
}

}  // namespace

TEST_CASE("pattern catalog names and arities") {
  CHECK(all_patterns().size() == 11);
  for (PatternId p : all_patterns()) {
    CHECK(pattern_from_name(pattern_name(p)) == p);
    CHECK((pattern_arity(p) == 1 || pattern_arity(p) == 2));
  }
  CHECK(pattern_name(PatternId::Absence2) == "absence2");
  CHECK(pattern_from_name("exclusive_choice") == PatternId::ExclusiveChoice);
  CHECK(pattern_arity(PatternId::Existence) == 1);
  CHECK(pattern_arity(PatternId::Succession) == 2);
  CHECK_THROWS_AS(pattern_from_name("chain_response"), std::invalid_argument);
}

TEST_CASE("pattern instantiation pins") {
  Prop close = prop_atom("close_order");
  Prop cancel = prop_atom("cancel_order");
  Prop pay = prop_atom("pay_suppl");
  auto alpha = Alphabet::tasks({close, cancel, pay});

  CHECK(instantiate_pattern(PatternId::Absence2, {close}, *alpha) ==
        ltlf_to_ldlf(parse_ltlf("!F(close_order & X F close_order)")));
  CHECK(instantiate_pattern(PatternId::NegationSuccession, {close, cancel},
                            *alpha) ==
        ltlf_to_ldlf(parse_ltlf("G(close_order -> !F cancel_order)")));
  CHECK(instantiate_pattern(PatternId::Precedence, {close, pay}, *alpha) ==
        ltlf_to_ldlf(
            parse_ltlf("(!pay_suppl U close_order) | !F pay_suppl")));
  CHECK(instantiate_pattern(PatternId::Existence, {pay}, *alpha) ==
        ltlf_to_ldlf(parse_ltlf("F pay_suppl")));
  CHECK(instantiate_pattern(PatternId::Response, {close, pay}, *alpha) ==
        ltlf_to_ldlf(parse_ltlf("G(close_order -> F pay_suppl)")));

  CHECK_THROWS_AS(instantiate_pattern(PatternId::Response, {close}, *alpha),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      instantiate_pattern(PatternId::Existence, {prop_atom("ship")}, *alpha),
      std::invalid_argument);
  CHECK_THROWS_AS(
      instantiate_pattern(PatternId::Response, {close, close}, *alpha),
      std::invalid_argument);
}

TEST_CASE("catalog prefix expressions match the formulas' good prefixes") {
  auto alpha = Alphabet::tasks(abo_tasks());
  for (PatternId p : all_patterns()) {
    CAPTURE(pattern_name(p));
    std::vector<Prop> params = pattern_params(p);
    Formula f = instantiate_pattern(p, params, *alpha);
    Dfa good = minimize(prefix_automaton(monitor_dfa(f, alpha)));
    Path rx = pattern_prefix_regex(p, params, *alpha);
    Dfa from_rx = monitor_dfa(regex_embed(rx), alpha);
    CHECK(dfa_equivalent(good, from_rx));
  }
}

TEST_CASE("prefix expressions adapt to the alphabet") {
  // With extra tasks the "other" letter covers each of them.
  Prop a = prop_atom("a");
  auto wide = Alphabet::tasks({a, prop_atom("x"), prop_atom("y"),
                               prop_atom("z")});
  Formula f = instantiate_pattern(PatternId::Absence2, {a}, *wide);
  Dfa good = minimize(prefix_automaton(monitor_dfa(f, wide)));
  Path rx = pattern_prefix_regex(PatternId::Absence2, {a}, *wide);
  CHECK(dfa_equivalent(good, monitor_dfa(regex_embed(rx), wide)));

  // With no other task at all the letter degenerates to the empty language
  // and the expression still describes the good prefixes.
  auto lone = Alphabet::tasks({a});
  Formula g = instantiate_pattern(PatternId::Absence2, {a}, *lone);
  Path rx1 = pattern_prefix_regex(PatternId::Absence2, {a}, *lone);
  CHECK(dfa_equivalent(minimize(prefix_automaton(monitor_dfa(g, lone))),
                       monitor_dfa(regex_embed(rx1), lone)));
}

TEST_CASE("observed verdicts fill the catalog's possible sets") {
  auto alpha = Alphabet::tasks(abo_tasks());
  std::vector<Trace> traces = all_task_traces({"a", "b", "o"}, 5);
  for (PatternId p : all_patterns()) {
    CAPTURE(pattern_name(p));
    std::vector<Verdict> possible = possible_rv_states(p);
    std::set<V> table(possible.begin(), possible.end());
    Formula f = instantiate_pattern(p, pattern_params(p), *alpha);
    Monitor mon = build_monitor(f, alpha);
    std::vector<std::set<V>> seen(6);
    for (const Trace& t : traces) {
      mon.reset();
      for (const Step& s : t) mon.step(s);
      seen[t.size()].insert(mon.verdict());
    }
    CHECK(seen[5] == table);
    for (int len = 0; len < 5; ++len) {
      for (V v : seen[len]) CHECK(table.count(v) == 1);
    }
  }
}

TEST_CASE("task traces wrap events as singleton interpretations") {
  auto alpha = Alphabet::tasks(abo_tasks());
  CHECK(task_trace({}, *alpha).empty());
  Trace t = task_trace({"b", "a", "b"}, *alpha);
  REQUIRE(t.size() == 3);
  CHECK(t[0].props == std::vector<Prop>{prop_atom("b")});
  CHECK(t[1].props == std::vector<Prop>{prop_atom("a")});
  CHECK_THROWS_AS(task_trace({"a", "ship"}, *alpha), std::invalid_argument);
}

TEST_CASE("task alphabets encode the one-task-per-instant assumption") {
  Prop a = prop_atom("a");
  Prop b = prop_atom("b");
  Formula assume = declare_assumption({a, b});
  for (const Trace& t : all_traces({"a", "b"}, 3)) {
    bool clean = true;
    for (const Step& s : t) clean = clean && s.props.size() == 1;
    CHECK(satisfies(t, assume) == clean);
  }
  CHECK(holds_on_empty(assume));
  CHECK_THROWS_AS(declare_assumption({}), std::invalid_argument);
}

TEST_CASE("model consistency") {
  CHECK(check_consistency(order_model()));

  DeclareModel empty;
  empty.tasks = {prop_atom("a")};
  CHECK(check_consistency(empty));

  DeclareModel clash;
  Prop a = prop_atom("a");
  Prop b = prop_atom("b");
  clash.tasks = {a, b};
  clash.constraints.push_back({"ea", PatternId::Existence, {a}, nullptr});
  clash.constraints.push_back({"eb", PatternId::Existence, {b}, nullptr});
  clash.constraints.push_back(
      {"nc", PatternId::NotCoexistence, {a, b}, nullptr});
  CHECK_FALSE(check_consistency(clash));
}

TEST_CASE("dead task detection") {
  CHECK(dead_tasks(order_model()).empty());

  // A raw constraint forbidding b everywhere makes b dead and leaves a
  // alive.
  Prop a = prop_atom("a");
  Prop b = prop_atom("b");
  DeclareModel m;
  m.tasks = {a, b};
  m.constraints.push_back({"nob", std::nullopt, {}, parse_ldlf("[true*][b]ff")});
  CHECK(dead_tasks(m) == std::vector<Prop>{b});

  // One occurrence stays allowed, so the only task is not dead.
  DeclareModel one;
  one.tasks = {a};
  one.constraints.push_back({"a2", PatternId::Absence2, {a}, nullptr});
  CHECK(dead_tasks(one).empty());

  DeclareModel clash;
  clash.tasks = {a, b};
  clash.constraints.push_back({"ea", PatternId::Existence, {a}, nullptr});
  clash.constraints.push_back({"eb", PatternId::Existence, {b}, nullptr});
  clash.constraints.push_back(
      {"nc", PatternId::NotCoexistence, {a, b}, nullptr});
  CHECK_THROWS_AS(dead_tasks(clash), std::invalid_argument);
}

TEST_CASE("enactment reporting") {
  DeclareModel m = order_model();
  Prop close = prop_atom("close_order");
  Prop cancel = prop_atom("cancel_order");
  Prop pay = prop_atom("pay_suppl");

  EnactmentInfo at_start = enactment_info(m, {});
  CHECK(at_start.can_end);
  CHECK(at_start.pending_constraint_ids.empty());
  // Payment needs a preceding close, so it is the one illegal opener.
  CHECK(at_start.legal_tasks == std::vector<Prop>{close, cancel});

  EnactmentInfo after_close = enactment_info(m, {"close_order"});
  CHECK(after_close.can_end);
  // Cancelling is forbidden after closing and a second close is fatal.
  CHECK(after_close.legal_tasks == std::vector<Prop>{pay});
  CHECK(after_close.pending_constraint_ids.empty());

  CHECK_THROWS_AS(enactment_info(m, {"ship"}), std::invalid_argument);

  // A pending constraint is one the events so far do not yet satisfy.
  DeclareModel need;
  need.tasks = {prop_atom("a"), prop_atom("b")};
  need.constraints.push_back(
      {"ea", PatternId::Existence, {prop_atom("a")}, nullptr});
  CHECK(enactment_info(need, {}).pending_constraint_ids ==
        std::vector<std::string>{"ea"});
  CHECK(enactment_info(need, {"a"}).pending_constraint_ids.empty());
  CHECK_FALSE(enactment_info(need, {}).can_end);

  // Legality agrees with a bounded search over completions.
  auto alpha = model_alphabet(m);
  Formula conj = model_formula(m);
  int horizon = int(monitor_dfa(conj, alpha).num_states());
  for (std::vector<std::string> events :
       {std::vector<std::string>{}, {"close_order"}, {"cancel_order"},
        {"close_order", "pay_suppl"}}) {
    EnactmentInfo inf = enactment_info(m, events);
    Trace t = task_trace(events, *alpha);
    CHECK(inf.can_end == satisfies(t, conj));
    for (Prop task : m.tasks) {
      Trace u = t;
      u.push_back(make_step({task}));
      ExtFlags fl;
      explore(u, conj, m.tasks, horizon, fl);
      bool legal = std::find(inf.legal_tasks.begin(), inf.legal_tasks.end(),
                             task) != inf.legal_tasks.end();
      CHECK(legal == fl.good);
    }
  }
}

TEST_CASE("metaconstraint compilation shape") {
  DeclareModel m = order_model();
  m.constraints.push_back(
      {"dopay", PatternId::Existence, {prop_atom("pay_suppl")}, nullptr});
  auto alpha = model_alphabet(m);
  Formula canc_f = constraint_formula(m, m.constraints[1]);
  Formula dopay_f = constraint_formula(m, m.constraints[3]);

  // Plain form: the verdict characterization implies the expectation.
  Formula plain = compile_metaconstraint({"[canc]=false", "dopay", false}, m);
  CHECK(plain ==
        f_implies(rv_formulas(canc_f, alpha).verdict_false, dopay_f));

  // A true precondition reduces to the expectation itself.
  Formula always = compile_metaconstraint({"true", "canc & dopay", false}, m);
  Formula both = f_and(canc_f, dopay_f);
  CHECK(check_implies(always, both, alpha));
  CHECK(check_implies(both, always, alpha));

  // Atoms accept any of the four verdicts.
  for (const char* pre : {"[canc]=true", "[canc]=temp_true",
                          "[canc]=temp_false", "[canc]=false"}) {
    CHECK(compile_metaconstraint({pre, "dopay", false}, m) != nullptr);
  }

  CHECK_THROWS_AS(compile_metaconstraint({"[ship]=false", "dopay", false}, m),
                  std::invalid_argument);
  CHECK_THROWS_AS(compile_metaconstraint({"[canc]=maybe", "dopay", false}, m),
                  std::invalid_argument);
  CHECK_THROWS_AS(compile_metaconstraint({"[canc]=false", "ship", false}, m),
                  std::invalid_argument);
  CHECK_THROWS_AS(compile_metaconstraint({"canc", "dopay", false}, m),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      compile_metaconstraint({"[canc]=false", "dopay dopay", false}, m),
      std::invalid_argument);
}

TEST_CASE("compensation scenario: plain versus guarded metaconstraint") {
  DeclareModel m;
  Prop close = prop_atom("close_order");
  Prop cancel = prop_atom("cancel_order");
  Prop pay = prop_atom("pay_suppl");
  m.tasks = {close, cancel, pay};
  m.constraints.push_back(
      {"canc", PatternId::NegationSuccession, {close, cancel}, nullptr});
  m.constraints.push_back({"dopay", PatternId::Existence, {pay}, nullptr});
  auto alpha = model_alphabet(m);

  Formula plain = compile_metaconstraint({"[canc]=false", "dopay", false}, m);
  Formula guarded = compile_metaconstraint({"[canc]=false", "dopay", true}, m);

  auto tr = [&](std::vector<std::string> ev) {
    return task_trace(ev, *alpha);
  };
  Trace violated_then_paid =
      tr({"close_order", "cancel_order", "pay_suppl"});
  Trace violated_unpaid = tr({"close_order", "cancel_order"});
  Trace paid_then_violated =
      tr({"close_order", "pay_suppl", "cancel_order"});

  // Compensation after the violation discharges the guarded form for good.
  CHECK(rv_classify(violated_then_paid, guarded, alpha) == V::True);
  CHECK(rv_classify(violated_then_paid, plain, alpha) == V::True);
  // A violation with no payment yet leaves it temporarily violated.
  CHECK(rv_classify(violated_unpaid, guarded, alpha) == V::TempFalse);
  CHECK(rv_classify(violated_unpaid, plain, alpha) == V::TempFalse);
  // Payment before the violation satisfies only the plain form: the guarded
  // one demands it after the violation is in place.
  CHECK(rv_classify(paid_then_violated, plain, alpha) == V::True);
  CHECK(rv_classify(paid_then_violated, guarded, alpha) == V::TempFalse);

  // Both compile to ordinary formulas: monitors run on them, and every
  // prefix verdict agrees with exhaustive classification of extensions.
  for (Formula f : {plain, guarded}) {
    Monitor mon = build_monitor(f, alpha);
    int horizon = int(mon.dfa().num_states());
    REQUIRE(horizon <= 9);
    for (const Trace& t : {violated_then_paid, violated_unpaid,
                           paid_then_violated,
                           tr({"cancel_order", "close_order", "cancel_order",
                               "pay_suppl"})}) {
      std::vector<V> timeline = verdict_timeline(f, t, alpha);
      for (size_t k = 0; k <= t.size(); ++k) {
        Trace prefix(t.begin(), t.begin() + k);
        CHECK(timeline[k] ==
              brute_task_verdict(prefix, f, m.tasks, horizon));
      }
    }
  }

  // The guarded metaconstraint interoperates with the rest of the model.
  m.metaconstraints.push_back({"[canc]=false", "dopay", true});
  CHECK(check_consistency(m));
  CHECK(dead_tasks(m).empty());
}

TEST_CASE("model files load and validate") {
  const std::string text = R"json({
    "tasks": ["close_order", "cancel_order", "pay_suppl"],
    "constraints": [
      {"id": "close", "pattern": "absence2", "params": ["close_order"]},
      {"id": "canc", "pattern": "negation_succession",
       "params": ["close_order", "cancel_order"]},
      {"id": "pay", "pattern": "precedence",
       "params": ["close_order", "pay_suppl"]},
      {"id": "raw", "formula": "[true*]<true>tt | <true>tt"},
      {"id": "lin", "ltlf": "G(close_order -> F pay_suppl)"}
    ],
    "metaconstraints": [
      {"pre": "[canc]=false", "exp": "pay", "guarded": true}
    ]
  })json";
  DeclareModel m = load_model(text);
  CHECK(m.tasks == order_model().tasks);
  REQUIRE(m.constraints.size() == 5);
  CHECK(m.constraints[0].pattern == PatternId::Absence2);
  CHECK(m.constraints[1].params ==
        std::vector<Prop>{prop_atom("close_order"), prop_atom("cancel_order")});
  CHECK(m.constraints[3].raw == parse_ldlf("[true*]<true>tt | <true>tt"));
  CHECK(m.constraints[4].raw ==
        ltlf_to_ldlf(parse_ltlf("G(close_order -> F pay_suppl)")));
  REQUIRE(m.metaconstraints.size() == 1);
  CHECK(m.metaconstraints[0].guarded);
  CHECK(check_consistency(m));

  auto rejects = [](const std::string& s) {
    CHECK_THROWS_AS(load_model(s), std::invalid_argument);
  };
  rejects("{");
  rejects(R"(["close_order"])");
  rejects(R"({"constraints": []})");
  rejects(R"({"tasks": []})");
  rejects(R"({"tasks": ["a", "a"]})");
  rejects(R"({"tasks": ["a"], "extra": 1})");
  rejects(R"({"tasks": ["a"],
              "constraints": [{"id": "c"}]})");
  rejects(R"({"tasks": ["a"],
              "constraints": [{"id": "c", "pattern": "existence",
                               "params": ["a"], "formula": "tt"}]})");
  rejects(R"({"tasks": ["a"],
              "constraints": [{"id": "c", "pattern": "exists",
                               "params": ["a"]}]})");
  rejects(R"({"tasks": ["a"],
              "constraints": [{"id": "c", "pattern": "existence",
                               "params": ["b"]}]})");
  rejects(R"({"tasks": ["a"],
              "constraints": [{"id": "c", "pattern": "response",
                               "params": ["a"]}]})");
  rejects(R"({"tasks": ["a"],
              "constraints": [{"id": "c", "formula": "<b>tt"}]})");
  rejects(R"({"tasks": ["a"],
              "constraints": [{"id": "c", "formula": "<a>"}]})");
  rejects(R"({"tasks": ["a"],
              "constraints": [{"id": "c", "formula": "tt"},
                              {"id": "c", "formula": "tt"}]})");
  rejects(R"({"tasks": ["a"],
              "metaconstraints": [{"pre": "[c]=false", "exp": "true"}]})");
  rejects(R"({"tasks": ["a"],
              "constraints": [{"id": "c", "formula": "tt"}],
              "metaconstraints": [{"pre": "[c]=perhaps", "exp": "c"}]})");
  rejects(R"({"tasks": ["a"],
              "constraints": [{"id": "c", "formula": "tt"}],
              "metaconstraints": [{"pre": "[c]=false", "exp": "c",
                                   "guarded": "yes"}]})");
}
