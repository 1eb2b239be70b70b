// Hash-consed formula ASTs: propositional formulas, LDLf formulas, path
// expressions and LTLf formulas. Structurally equal nodes are interned to a
// single immutable instance, so equality is pointer equality and every node
// has a stable id usable for canonical ordering. The intern tables are global
// and internally synchronized; nodes live for the duration of the process.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ldlfmon {

// ---------------------------------------------------------------------------
// Propositional formulas

enum class PropKind : uint8_t { True, False, Atom, Not, And, Or };

struct PropNode {
  PropKind kind;
  uint32_t id;
  size_t hash;
  std::string name;  // Atom only
  const PropNode* lhs = nullptr;
  const PropNode* rhs = nullptr;
};
using Prop = const PropNode*;

Prop prop_true();
Prop prop_false();
Prop prop_atom(std::string_view name);
Prop prop_not(Prop p);
Prop prop_and(Prop a, Prop b);
Prop prop_or(Prop a, Prop b);

// Evaluates p under an interpretation given as a sorted-by-id vector of the
// atoms that hold.
bool prop_eval(Prop p, const std::vector<Prop>& true_atoms);

// Collects the distinct atoms of p, sorted by id.
void collect_atoms(Prop p, std::vector<Prop>& out);

// ---------------------------------------------------------------------------
// LDLf formulas and path expressions (mutually recursive)

enum class FormulaKind : uint8_t { Tt, Ff, Prop, Not, And, Or, Diamond, Box };
enum class PathKind : uint8_t { Prop, Test, Union, Seq, Star };

struct PathNode;

struct FormulaNode {
  FormulaKind kind;
  uint32_t id;
  size_t hash;
  Prop prop = nullptr;                  // Prop
  const FormulaNode* lhs = nullptr;     // Not/And/Or child, Diamond/Box body
  const FormulaNode* rhs = nullptr;     // And/Or
  const PathNode* path = nullptr;       // Diamond/Box
};
using Formula = const FormulaNode*;

struct PathNode {
  PathKind kind;
  uint32_t id;
  size_t hash;
  bool test_only;                       // no letter anywhere below
  Prop prop = nullptr;                  // Prop (letter)
  Formula test = nullptr;               // Test
  const PathNode* lhs = nullptr;
  const PathNode* rhs = nullptr;
};
using Path = const PathNode*;

Formula f_tt();
Formula f_ff();
// "The trace is nonempty and its first step satisfies p". Non-atomic
// arguments are canonicalized so that Prop leaves only ever hold an atom or
// a constant: and/or distribute over the leaf and a negated proposition
// becomes the equivalent <!p>tt, all exact including on the empty trace.
Formula f_prop(Prop p);
Formula f_prop(std::string_view atom);
Formula f_not(Formula f);
Formula f_and(Formula a, Formula b);
Formula f_or(Formula a, Formula b);
// a -> b is syntactic sugar for !a | b; there is no Implies node.
Formula f_implies(Formula a, Formula b);
Formula f_diamond(Path r, Formula f);
Formula f_box(Path r, Formula f);

Path p_letter(Prop p);
// Canonicalizing constructors: unions drop false-letter branches and
// duplicate branches, sequences absorb false letters and drop epsilon
// (tt?) factors, and star collapses star-of-star and star-of-epsilon.
Path p_test(Formula f);
Path p_union(Path a, Path b);
Path p_seq(Path a, Path b);
Path p_star(Path a);

// The empty-path letter and the epsilon test.
bool is_false_letter(Path p);
bool is_epsilon_test(Path p);

// end holds exactly when the remaining trace is empty; expands to [true]ff
// with the propositional constant true. last marks the final element:
// <true>end.
Formula end_formula();
Formula last_formula();

// Negation normal form. The result contains no Not node at all; negation
// over a propositional leaf phi becomes [phi]ff, which agrees with classical
// negation on every suffix including the empty one. Tests inside paths are
// normalized recursively. Linear in the DAG size of f.
Formula nnf(Formula f);
bool is_nnf(Formula f);

// Truth value of f on the empty trace, by the suffix-exhausted clauses.
bool holds_on_empty(Formula f);

// The formula <r>end, whose traces are exactly the words of r.
Formula regex_embed(Path r);

// Distinct propositional atoms occurring anywhere in the formula, sorted by
// id.
std::vector<Prop> props_of(Formula f);
std::vector<Prop> props_of(Path r);

// ---------------------------------------------------------------------------
// LTLf formulas

enum class LtlfKind : uint8_t {
  Prop, Not, And, Or, Next, WeakNext, Eventually, Always, Until
};

struct LtlfNode {
  LtlfKind kind;
  uint32_t id;
  size_t hash;
  Prop prop = nullptr;
  const LtlfNode* lhs = nullptr;
  const LtlfNode* rhs = nullptr;
};
using Ltlf = const LtlfNode*;

// Leaves must be an atom or a constant; connectives belong at this level, so
// a composite proposition is rejected.
Ltlf lt_prop(Prop p);
Ltlf lt_prop(std::string_view atom);
Ltlf lt_not(Ltlf f);
Ltlf lt_and(Ltlf a, Ltlf b);
Ltlf lt_or(Ltlf a, Ltlf b);
Ltlf lt_implies(Ltlf a, Ltlf b);
Ltlf lt_next(Ltlf f);
Ltlf lt_weak_next(Ltlf f);
Ltlf lt_eventually(Ltlf f);
Ltlf lt_always(Ltlf f);
Ltlf lt_until(Ltlf a, Ltlf b);

// Translates an LTLf formula to an equivalent LDLf formula. Temporal
// operators map onto true-step modalities; because a path letter may consume
// the final trace element, the operand under a diamond is strengthened with
// "the remainder is nonempty" and under a box weakened with "or the
// remainder is empty". For propositional operands these guards specialize to
// <a>tt and [!a]ff.
Formula ltlf_to_ldlf(Ltlf f);

std::vector<Prop> props_of(Ltlf f);

// ---------------------------------------------------------------------------
// Rendering. Output is minimally parenthesized concrete syntax that parses
// back to a structurally identical AST (complex propositional leaves of
// LDLf formulas, which have no dedicated concrete syntax, re-parse to the
// pointwise-equivalent connective form).

std::string render(Prop p);
std::string render(Formula f);
std::string render(Path r);
std::string render(Ltlf f);

}  // namespace ldlfmon
