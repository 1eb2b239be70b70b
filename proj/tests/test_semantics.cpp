#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ldlfmon/parser.hpp"
#include "ldlfmon/semantics.hpp"
#include "testutil.hpp"

using namespace ldlfmon;
using testutil::chars_trace;

namespace {

bool sat(std::string_view trace, std::string_view formula) {
  return satisfies(chars_trace(trace), parse_ldlf(formula));
}

bool lsat(std::string_view trace, std::string_view formula) {
  return eval_ltlf(chars_trace(trace), parse_ltlf(formula));
}

}  // namespace

TEST_CASE("pinned dynamic formula evaluations") {
  CHECK(sat("a", "a"));
  CHECK(!sat("b", "a"));
  CHECK(!sat("", "a"));
  CHECK(sat("", "tt"));
  CHECK(!sat("", "ff"));

  CHECK(sat("a b", "<a;b>tt"));
  CHECK(!sat("a", "<a;b>tt"));
  CHECK(sat("ab b", "<a;b>tt"));
  CHECK(sat("a", "<a>end"));
  CHECK(!sat("a b", "<a>end"));
  CHECK(sat("a", "[a]end"));
  CHECK(sat("b", "[a]end"));
  CHECK(!sat("a b", "[a]end"));

  CHECK(sat("a a b", "<a*>b"));
  CHECK(!sat("a a", "<a*>b"));
  CHECK(sat("b", "<a*>b"));

  CHECK(sat("a a b", "<(a?;true)*><b>tt"));
  CHECK(!sat("a a", "<(a?;true)*><b>tt"));
  CHECK(sat("b", "<(a?;true)*><b>tt"));
  CHECK(!sat("- b", "<(a?;true)*><b>tt"));

  CHECK(sat("", "end"));
  CHECK(!sat("a", "end"));
  CHECK(sat("a", "last"));
  CHECK(!sat("a b", "last"));
  CHECK(!sat("", "last"));

  const char* response = "[true*](<a>tt -> <true*><b>tt)";
  CHECK(sat("", response));
  CHECK(!sat("a", response));
  CHECK(sat("a b", response));
  CHECK(sat("b", response));
  CHECK(!sat("b a", response));
  CHECK(!sat("a b a", response));
  CHECK(sat("a ab", response));

  CHECK(sat("ab", "<(<b>tt)?;a>tt"));
  CHECK(!sat("a", "<(<b>tt)?;a>tt"));

  TraceEvaluator ev(chars_trace("b a b"));
  Formula fa = parse_ldlf("<true*><a>tt");
  CHECK(ev.eval_at(fa, 0));
  CHECK(ev.eval_at(fa, 1));
  CHECK(!ev.eval_at(fa, 2));
  CHECK(!ev.eval_at(fa, 3));

  TraceEvaluator ev2(chars_trace("a a"));
  Path star = parse_path("a*");
  CHECK(ev2.path_match(star, 0, 2));
  CHECK(ev2.path_match(star, 1, 1));
  CHECK(ev2.path_match(star, 0, 1));
  Path letter = parse_path("a");
  CHECK(ev2.path_match(letter, 0, 1));
  CHECK(ev2.path_match(letter, 1, 2));
  CHECK(!ev2.path_match(letter, 0, 2));
  CHECK(!ev2.path_match(letter, 2, 2));
}

TEST_CASE("empty trace agreement") {
  std::vector<std::string> atoms{"a", "b"};
  testutil::Rng rng(11);
  Trace empty;
  for (int i = 0; i < 500; ++i) {
    Formula f = testutil::gen_ldlf(rng, atoms, 4);
    CAPTURE(render(f));
    REQUIRE(satisfies(empty, f) == holds_on_empty(f));
  }
}

TEST_CASE("pinned linear formula evaluations") {
  CHECK(!lsat("", "F a"));
  CHECK(lsat("", "G a"));
  CHECK(!lsat("", "a U b"));
  CHECK(!lsat("", "X a"));
  CHECK(lsat("", "N a"));
  CHECK(!lsat("", "a"));
  CHECK(lsat("", "!a"));

  CHECK(!lsat("a", "X a"));
  CHECK(lsat("a a", "X a"));
  CHECK(lsat("a", "N b"));
  CHECK(lsat("a b", "N b"));
  CHECK(!lsat("a a", "N b"));

  CHECK(lsat("a a b", "a U b"));
  CHECK(!lsat("a a", "a U b"));
  CHECK(lsat("b", "a U b"));
  CHECK(lsat("b b a", "F a"));
  CHECK(!lsat("b b", "F a"));
  CHECK(lsat("a a", "G a"));
  CHECK(!lsat("a b", "G a"));
  CHECK(lsat("b ab", "G (a -> F b)"));
  CHECK(!lsat("b a", "G (a -> F b)"));
}

TEST_CASE("translation preserves meaning") {
  std::vector<std::string> atoms{"a", "b"};
  std::vector<Trace> traces = testutil::all_traces(atoms, 3);
  REQUIRE(traces.size() == 85);
  testutil::Rng rng(23);
  for (int i = 0; i < 250; ++i) {
    Ltlf g = testutil::gen_ltlf(rng, atoms, 3);
    Formula f = ltlf_to_ldlf(g);
    CAPTURE(render(g));
    CAPTURE(render(f));
    for (const Trace& t : traces) {
      REQUIRE(eval_ltlf(t, g) == satisfies(t, f));
    }
  }
}

TEST_CASE("negation normal form preserves meaning") {
  std::vector<std::string> atoms{"a", "b"};
  std::vector<Trace> traces = testutil::all_traces(atoms, 3);
  testutil::Rng rng(29);
  for (int i = 0; i < 200; ++i) {
    Formula f = testutil::gen_ldlf(rng, atoms, 3);
    Formula g = nnf(f);
    CAPTURE(render(f));
    CAPTURE(render(g));
    for (const Trace& t : traces) {
      REQUIRE(satisfies(t, f) == satisfies(t, g));
    }
  }
}

TEST_CASE("path language membership") {
  std::vector<Trace> traces = testutil::all_traces({"a", "b"}, 3);
  Prop a = prop_atom("a");
  Prop b = prop_atom("b");
  auto holds_at = [](const Trace& t, size_t i, Prop p) {
    return step_holds(t[i], p);
  };

  Formula seq = regex_embed(parse_path("a;b"));
  Formula any_star = regex_embed(parse_path("(a + b)*"));
  Formula astar_b = regex_embed(parse_path("a*;b"));
  Formula even_a = regex_embed(parse_path("(a;a)*"));
  Formula eps_only = regex_embed(parse_path("tt?"));
  Formula guard = regex_embed(parse_path("(!a)?;true"));
  Formula while_a = regex_embed(parse_path("(a?;true)*"));

  for (const Trace& t : traces) {
    size_t n = t.size();
    bool e_seq = n == 2 && holds_at(t, 0, a) && holds_at(t, 1, b);
    bool e_any = true;
    for (size_t i = 0; i < n; ++i)
      e_any = e_any && (holds_at(t, i, a) || holds_at(t, i, b));
    bool e_astar_b = n >= 1 && holds_at(t, n - 1, b);
    for (size_t i = 0; i + 1 < n; ++i) e_astar_b = e_astar_b && holds_at(t, i, a);
    bool e_even = n % 2 == 0;
    for (size_t i = 0; i < n; ++i) e_even = e_even && holds_at(t, i, a);
    bool e_guard = n == 1 && !holds_at(t, 0, a);
    bool e_while = true;
    for (size_t i = 0; i < n; ++i) e_while = e_while && holds_at(t, i, a);

    REQUIRE(satisfies(t, seq) == e_seq);
    REQUIRE(satisfies(t, any_star) == e_any);
    REQUIRE(satisfies(t, astar_b) == e_astar_b);
    REQUIRE(satisfies(t, even_a) == e_even);
    REQUIRE(satisfies(t, eps_only) == (n == 0));
    REQUIRE(satisfies(t, guard) == e_guard);
    REQUIRE(satisfies(t, while_a) == e_while);
  }
}

TEST_CASE("prefix classification by search") {
  std::vector<Prop> universe{prop_atom("a"), prop_atom("b")};
  auto cls = [&](std::string_view trace, std::string_view formula) {
    Trace t = chars_trace(trace);
    Formula f = parse_ldlf(formula);
    PrefixFlags fl = classify_prefix_bruteforce(t, f, 4, universe);
    if (fl.nec_good) return Verdict::True;
    if (fl.nec_bad) return Verdict::False;
    return satisfies(t, f) ? Verdict::TempTrue : Verdict::TempFalse;
  };

  CHECK(cls("", "<true*><a>tt") == Verdict::TempFalse);
  CHECK(cls("a", "<true*><a>tt") == Verdict::True);
  CHECK(cls("b", "<true*><a>tt") == Verdict::TempFalse);

  CHECK(cls("", "[true*][a]ff") == Verdict::TempTrue);
  CHECK(cls("b", "[true*][a]ff") == Verdict::TempTrue);
  CHECK(cls("a", "[true*][a]ff") == Verdict::False);

  const char* response = "[true*](<a>tt -> <true*><b>tt)";
  CHECK(cls("", response) == Verdict::TempTrue);
  CHECK(cls("a", response) == Verdict::TempFalse);
  CHECK(cls("a b", response) == Verdict::TempTrue);

  CHECK(cls("a", "last") == Verdict::TempTrue);
  CHECK(cls("", "last") == Verdict::TempFalse);
  CHECK(cls("", "end") == Verdict::TempTrue);
  CHECK(cls("a", "end") == Verdict::False);
  CHECK(cls("b", "<a>tt") == Verdict::False);
  CHECK(cls("", "tt") == Verdict::True);
  CHECK(cls("", "ff") == Verdict::False);

  // Raw flag behavior: an unsatisfiable formula is never reachable, a
  // satisfied prefix always reports poss_good, and the empty continuation
  // counts toward both possibility flags.
  Formula unsat = parse_ldlf("a & [a]ff");
  PrefixFlags fl = classify_prefix_bruteforce(chars_trace("a b"), unsat, 3,
                                              universe);
  CHECK(!fl.poss_good);
  CHECK(fl.nec_bad);

  fl = classify_prefix_bruteforce(Trace{}, parse_ldlf("<true>tt"), 3, universe);
  CHECK(fl.poss_good);
  CHECK(!fl.nec_good);
  CHECK(fl.poss_bad);

  Formula absence2 =
      ltlf_to_ldlf(parse_ltlf("!(F (a & X F a))"));
  std::vector<Prop> ao{prop_atom("a"), prop_atom("o")};
  fl = classify_prefix_bruteforce(chars_trace("a a"), absence2, 3, ao);
  CHECK(fl.nec_bad);
  fl = classify_prefix_bruteforce(chars_trace("a"), absence2, 3, ao);
  CHECK(fl.poss_good);
  CHECK(fl.poss_bad);
  CHECK(!fl.nec_bad);

  // Whenever a trace satisfies the formula it is a possible-good prefix, and
  // the three classes carve the space without overlap.
  std::vector<std::string> names{"a", "b"};
  testutil::Rng rng(41);
  std::vector<Trace> traces = testutil::all_traces(names, 3);
  for (int i = 0; i < 40; ++i) {
    Formula f = testutil::gen_ldlf(rng, names, 3);
    for (const Trace& t : traces) {
      PrefixFlags x = classify_prefix_bruteforce(t, f, 3, universe);
      if (satisfies(t, f)) REQUIRE(x.poss_good);
      int classes = (x.nec_good ? 1 : 0) + (x.nec_bad ? 1 : 0) +
                    ((x.poss_good && x.poss_bad) ? 1 : 0);
      REQUIRE(classes == 1);
    }
  }
}

TEST_CASE("verdict names") {
  CHECK(verdict_name(Verdict::True) == "true");
  CHECK(verdict_name(Verdict::False) == "false");
  CHECK(verdict_name(Verdict::TempTrue) == "temp_true");
  CHECK(verdict_name(Verdict::TempFalse) == "temp_false");
  CHECK(verdict_is_final(Verdict::True));
  CHECK(verdict_is_final(Verdict::False));
  CHECK(!verdict_is_final(Verdict::TempTrue));
  CHECK(!verdict_is_final(Verdict::TempFalse));
}
