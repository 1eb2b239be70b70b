// Minimal-parenthesis printers for the four AST families. Binary operators
// print left associated and Until right associated, mirroring the parser, so
// parser-produced ASTs round-trip structurally.
#include "ldlfmon/formula.hpp"

#include <stdexcept>
#include <string>

namespace ldlfmon {

namespace {

// Precedence levels, higher binds tighter.
constexpr int kOr = 1;
constexpr int kAnd = 2;
constexpr int kUnary = 3;
constexpr int kAtom = 4;

constexpr int kPUnion = 1;
constexpr int kPSeq = 2;
constexpr int kPPostfix = 3;
constexpr int kPAtom = 4;

constexpr int kLtlOr = 1;
constexpr int kLtlAnd = 2;
constexpr int kLtlUntil = 3;
constexpr int kLtlUnary = 4;

int prop_level(Prop p) {
  switch (p->kind) {
    case PropKind::Or: return kOr;
    case PropKind::And: return kAnd;
    case PropKind::Not: return kUnary;
    default: return kAtom;
  }
}

void render_prop(Prop p, int min_level, std::string& out) {
  int lv = prop_level(p);
  bool paren = lv < min_level;
  if (paren) out += '(';
  switch (p->kind) {
    case PropKind::True: out += "true"; break;
    case PropKind::False: out += "false"; break;
    case PropKind::Atom: out += p->name; break;
    case PropKind::Not:
      out += '!';
      render_prop(p->lhs, kUnary, out);
      break;
    case PropKind::And:
      render_prop(p->lhs, kAnd, out);
      out += " & ";
      render_prop(p->rhs, kAnd + 1, out);
      break;
    case PropKind::Or:
      render_prop(p->lhs, kOr, out);
      out += " | ";
      render_prop(p->rhs, kOr + 1, out);
      break;
  }
  if (paren) out += ')';
}

bool prop_is_atomic(Prop p) {
  return p->kind == PropKind::True || p->kind == PropKind::False ||
         p->kind == PropKind::Atom;
}

void render_formula(Formula f, int min_level, std::string& out);

int formula_level(Formula f) {
  switch (f->kind) {
    case FormulaKind::Or: return kOr;
    case FormulaKind::And: return kAnd;
    case FormulaKind::Not:
    case FormulaKind::Diamond:
    case FormulaKind::Box: return kUnary;
    case FormulaKind::Prop: return prop_is_atomic(f->prop) ? kAtom : kUnary;
    default: return kAtom;
  }
}

int path_level(Path p) {
  switch (p->kind) {
    case PathKind::Union: return kPUnion;
    case PathKind::Seq: return kPSeq;
    case PathKind::Star: return kPPostfix;
    default: return kPAtom;
  }
}

void render_path(Path p, int min_level, std::string& out) {
  int lv = path_level(p);
  bool paren = lv < min_level;
  if (paren) out += '(';
  switch (p->kind) {
    case PathKind::Prop:
      // A letter is atomic, a negated atom, or parenthesized; bare infix
      // inside a path would capture the postfix star.
      if (prop_is_atomic(p->prop)) {
        out += p->prop->name.empty()
                   ? std::string(p->prop->kind == PropKind::True ? "true"
                                                                 : "false")
                   : p->prop->name;
      } else if (p->prop->kind == PropKind::Not) {
        render_prop(p->prop, kUnary, out);
      } else {
        out += '(';
        render_prop(p->prop, 0, out);
        out += ')';
      }
      break;
    case PathKind::Test: {
      Formula body = p->test;
      if (formula_level(body) == kAtom) {
        render_formula(body, kAtom, out);
      } else {
        out += '(';
        render_formula(body, 0, out);
        out += ')';
      }
      out += '?';
      break;
    }
    case PathKind::Union:
      render_path(p->lhs, kPUnion, out);
      out += " + ";
      render_path(p->rhs, kPUnion + 1, out);
      break;
    case PathKind::Seq:
      render_path(p->lhs, kPSeq, out);
      out += ';';
      render_path(p->rhs, kPSeq + 1, out);
      break;
    case PathKind::Star:
      render_path(p->lhs, kPPostfix, out);
      out += '*';
      break;
  }
  if (paren) out += ')';
}

void render_formula(Formula f, int min_level, std::string& out) {
  int lv = formula_level(f);
  bool paren = lv < min_level;
  if (paren) out += '(';
  switch (f->kind) {
    case FormulaKind::Tt: out += "tt"; break;
    case FormulaKind::Ff: out += "ff"; break;
    case FormulaKind::Prop:
      if (prop_is_atomic(f->prop)) {
        render_prop(f->prop, 0, out);
      } else {
        // No dedicated formula-level syntax; re-parses to the equivalent
        // connective decomposition.
        out += '(';
        render_prop(f->prop, 0, out);
        out += ')';
      }
      break;
    case FormulaKind::Not:
      out += '!';
      render_formula(f->lhs, kUnary, out);
      break;
    case FormulaKind::And:
      render_formula(f->lhs, kAnd, out);
      out += " & ";
      render_formula(f->rhs, kAnd + 1, out);
      break;
    case FormulaKind::Or:
      render_formula(f->lhs, kOr, out);
      out += " | ";
      render_formula(f->rhs, kOr + 1, out);
      break;
    case FormulaKind::Diamond:
      out += '<';
      render_path(f->path, 0, out);
      out += '>';
      render_formula(f->lhs, kUnary, out);
      break;
    case FormulaKind::Box:
      out += '[';
      render_path(f->path, 0, out);
      out += ']';
      render_formula(f->lhs, kUnary, out);
      break;
  }
  if (paren) out += ')';
}

int ltlf_level(Ltlf f) {
  switch (f->kind) {
    case LtlfKind::Or: return kLtlOr;
    case LtlfKind::And: return kLtlAnd;
    case LtlfKind::Until: return kLtlUntil;
    case LtlfKind::Prop:
      return prop_is_atomic(f->prop) ? kLtlUnary + 1 : kLtlUnary;
    default: return kLtlUnary;
  }
}

void render_ltlf(Ltlf f, int min_level, std::string& out) {
  int lv = ltlf_level(f);
  bool paren = lv < min_level;
  if (paren) out += '(';
  switch (f->kind) {
    case LtlfKind::Prop:
      if (prop_is_atomic(f->prop)) {
        render_prop(f->prop, 0, out);
      } else {
        out += '(';
        render_prop(f->prop, 0, out);
        out += ')';
      }
      break;
    case LtlfKind::Not:
      out += '!';
      render_ltlf(f->lhs, kLtlUnary, out);
      break;
    case LtlfKind::Next:
      out += "X ";
      render_ltlf(f->lhs, kLtlUnary, out);
      break;
    case LtlfKind::WeakNext:
      out += "N ";
      render_ltlf(f->lhs, kLtlUnary, out);
      break;
    case LtlfKind::Eventually:
      out += "F ";
      render_ltlf(f->lhs, kLtlUnary, out);
      break;
    case LtlfKind::Always:
      out += "G ";
      render_ltlf(f->lhs, kLtlUnary, out);
      break;
    case LtlfKind::Until:
      render_ltlf(f->lhs, kLtlUntil + 1, out);
      out += " U ";
      render_ltlf(f->rhs, kLtlUntil, out);
      break;
    case LtlfKind::And:
      render_ltlf(f->lhs, kLtlAnd, out);
      out += " & ";
      render_ltlf(f->rhs, kLtlAnd + 1, out);
      break;
    case LtlfKind::Or:
      render_ltlf(f->lhs, kLtlOr, out);
      out += " | ";
      render_ltlf(f->rhs, kLtlOr + 1, out);
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::string render(Prop p) {
  std::string out;
  render_prop(p, 0, out);
  return out;
}
std::string render(Formula f) {
  std::string out;
  render_formula(f, 0, out);
  return out;
}
std::string render(Path r) {
  std::string out;
  render_path(r, 0, out);
  return out;
}
std::string render(Ltlf f) {
  std::string out;
  render_ltlf(f, 0, out);
  return out;
}

}  // namespace ldlfmon
