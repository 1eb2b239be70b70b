#include "ldlfmon/parser.hpp"

#include <algorithm>
#include <cctype>

namespace ldlfmon {
namespace {

enum class Tok {
  Ident, Tt, Ff, True, False, End, Last,
  Bang, Amp, Pipe, Arrow,
  Lt, Gt, LBrack, RBrack, LParen, RParen,
  Question, Semi, Plus, Star,
  Eof,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Tt: return "'tt'";
    case Tok::Ff: return "'ff'";
    case Tok::True: return "'true'";
    case Tok::False: return "'false'";
    case Tok::End: return "'end'";
    case Tok::Last: return "'last'";
    case Tok::Bang: return "'!'";
    case Tok::Amp: return "'&'";
    case Tok::Pipe: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Question: return "'?'";
    case Tok::Semi: return "';'";
    case Tok::Plus: return "'+'";
    case Tok::Star: return "'*'";
    case Tok::Eof: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Tok k, std::string t) {
    out.push_back({k, std::move(t), line, col});
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (ident_start(c)) {
      size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      Tok k = Tok::Ident;
      if (word == "tt") k = Tok::Tt;
      else if (word == "ff") k = Tok::Ff;
      else if (word == "true") k = Tok::True;
      else if (word == "false") k = Tok::False;
      else if (word == "end") k = Tok::End;
      else if (word == "last") k = Tok::Last;
      push(k, word);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    Tok k;
    int len = 1;
    switch (c) {
      case '!': k = Tok::Bang; break;
      case '&': k = Tok::Amp; break;
      case '|': k = Tok::Pipe; break;
      case '<': k = Tok::Lt; break;
      case '>': k = Tok::Gt; break;
      case '[': k = Tok::LBrack; break;
      case ']': k = Tok::RBrack; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '?': k = Tok::Question; break;
      case ';': k = Tok::Semi; break;
      case '+': k = Tok::Plus; break;
      case '*': k = Tok::Star; break;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          k = Tok::Arrow;
          len = 2;
          break;
        }
        [[fallthrough]];
      default:
        throw ParseError("unexpected character '" + std::string(1, c) + "'",
                         line, col, {});
    }
    push(k, std::string(text.substr(i, len)));
    i += len;
    col += len;
  }
  out.push_back({Tok::Eof, "", line, col});
  return out;
}

// Internal control-flow signal; converted to ParseError at the entry points.
struct Abort {};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  Formula ldlf() {
    Formula f = formula();
    expect(Tok::Eof);
    return f;
  }

  Ltlf ltlf() {
    Ltlf f = lt_formula();
    expect(Tok::Eof);
    return f;
  }

  Path path_only() {
    Path p = path();
    expect(Tok::Eof);
    return p;
  }

  Prop prop_only() {
    Prop p = prop_or();
    expect(Tok::Eof);
    return p;
  }

  [[noreturn]] void raise() const {
    const Token& t = toks_[std::min(err_pos_, toks_.size() - 1)];
    std::vector<std::string> exp = err_expected_;
    std::sort(exp.begin(), exp.end());
    exp.erase(std::unique(exp.begin(), exp.end()), exp.end());
    std::string msg = "expected ";
    for (size_t i = 0; i < exp.size(); ++i) {
      if (i) msg += exp.size() == 2 ? " or " : i + 1 == exp.size() ? ", or " : ", ";
      msg += exp[i];
    }
    if (exp.empty()) msg = "syntax error";
    msg += ", found ";
    msg += t.kind == Tok::Eof ? "end of input" : "'" + t.text + "'";
    throw ParseError(std::to_string(t.line) + ":" + std::to_string(t.col) +
                         ": " + msg,
                     t.line, t.col, exp);
  }

 private:
  const Token& cur() const { return toks_[pos_]; }

  bool eat(Tok k) {
    if (cur().kind == k) {
      ++pos_;
      return true;
    }
    return false;
  }

  void note(const char* what) {
    if (pos_ > err_pos_) {
      err_pos_ = pos_;
      err_expected_ = {what};
    } else if (pos_ == err_pos_) {
      err_expected_.push_back(what);
    }
  }

  void expect(Tok k) {
    if (!eat(k)) {
      note(tok_name(k));
      throw Abort{};
    }
  }

  // LDLf: implies (right assoc, desugars) > or > and > unary > primary.
  Formula formula() {
    Formula lhs = f_or_level();
    if (eat(Tok::Arrow)) return f_implies(lhs, formula());
    return lhs;
  }

  Formula f_or_level() {
    Formula lhs = f_and_level();
    while (eat(Tok::Pipe)) lhs = f_or(lhs, f_and_level());
    return lhs;
  }

  Formula f_and_level() {
    Formula lhs = f_unary();
    while (eat(Tok::Amp)) lhs = f_and(lhs, f_unary());
    return lhs;
  }

  Formula f_unary() {
    if (eat(Tok::Bang)) return f_not(f_unary());
    if (eat(Tok::Lt)) {
      Path p = path();
      expect(Tok::Gt);
      return f_diamond(p, f_unary());
    }
    if (eat(Tok::LBrack)) {
      Path p = path();
      expect(Tok::RBrack);
      return f_box(p, f_unary());
    }
    return f_primary();
  }

  Formula f_primary() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Tt: ++pos_; return f_tt();
      case Tok::Ff: ++pos_; return f_ff();
      case Tok::End: ++pos_; return end_formula();
      case Tok::Last: ++pos_; return last_formula();
      case Tok::True: ++pos_; return f_prop(prop_true());
      case Tok::False: ++pos_; return f_prop(prop_false());
      case Tok::Ident: ++pos_; return f_prop(prop_atom(t.text));
      case Tok::LParen: {
        ++pos_;
        Formula f = formula();
        expect(Tok::RParen);
        return f;
      }
      default:
        note("formula");
        throw Abort{};
    }
  }

  // Paths: union > sequence > postfix star > atom.
  Path path() {
    Path lhs = p_seq_level();
    while (eat(Tok::Plus)) lhs = p_union(lhs, p_seq_level());
    return lhs;
  }

  Path p_seq_level() {
    Path lhs = p_postfix();
    while (eat(Tok::Semi)) lhs = p_seq(lhs, p_postfix());
    return lhs;
  }

  Path p_postfix() {
    Path p = p_atom();
    while (eat(Tok::Star)) p = p_star(p);
    return p;
  }

  // A path atom is ambiguous up front: "a?" is a test on the formula a while
  // "a" alone is a letter. Try the test reading first, then a letter, then a
  // parenthesized path.
  Path p_atom() {
    size_t save = pos_;
    bool have = false;
    Formula f = nullptr;
    try {
      f = formula();
      have = true;
    } catch (const Abort&) {
    }
    if (have && eat(Tok::Question)) return p_test(f);
    pos_ = save;
    try {
      return p_letter(prop_letter());
    } catch (const Abort&) {
    }
    pos_ = save;
    if (eat(Tok::LParen)) {
      Path p = path();
      expect(Tok::RParen);
      return p;
    }
    note("path");
    throw Abort{};
  }

  Prop prop_letter() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Bang: ++pos_; return prop_not(prop_letter());
      case Tok::Ident: ++pos_; return prop_atom(t.text);
      case Tok::True: ++pos_; return prop_true();
      case Tok::False: ++pos_; return prop_false();
      case Tok::LParen: {
        ++pos_;
        Prop p = prop_or();
        expect(Tok::RParen);
        return p;
      }
      default:
        note("proposition");
        throw Abort{};
    }
  }

  Prop prop_or() {
    Prop lhs = prop_and();
    while (eat(Tok::Pipe)) lhs = ldlfmon::prop_or(lhs, prop_and());
    return lhs;
  }

  Prop prop_and() {
    Prop lhs = prop_unary();
    while (eat(Tok::Amp)) lhs = ldlfmon::prop_and(lhs, prop_unary());
    return lhs;
  }

  Prop prop_unary() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Bang: ++pos_; return prop_not(prop_unary());
      case Tok::Ident: ++pos_; return prop_atom(t.text);
      case Tok::True: ++pos_; return prop_true();
      case Tok::False: ++pos_; return prop_false();
      case Tok::LParen: {
        ++pos_;
        Prop p = prop_or();
        expect(Tok::RParen);
        return p;
      }
      default:
        note("proposition");
        throw Abort{};
    }
  }

  // LTLf: implies > or > and > until (right assoc) > unary > primary.
  // X N F G U are recognized positionally and are not usable as atoms.
  Ltlf lt_formula() {
    Ltlf lhs = lt_or_level();
    if (eat(Tok::Arrow)) return lt_implies(lhs, lt_formula());
    return lhs;
  }

  Ltlf lt_or_level() {
    Ltlf lhs = lt_and_level();
    while (eat(Tok::Pipe)) lhs = lt_or(lhs, lt_and_level());
    return lhs;
  }

  Ltlf lt_and_level() {
    Ltlf lhs = lt_until_level();
    while (eat(Tok::Amp)) lhs = lt_and(lhs, lt_until_level());
    return lhs;
  }

  Ltlf lt_until_level() {
    Ltlf lhs = lt_unary();
    if (cur().kind == Tok::Ident && cur().text == "U") {
      ++pos_;
      return lt_until(lhs, lt_until_level());
    }
    return lhs;
  }

  Ltlf lt_unary() {
    if (eat(Tok::Bang)) return lt_not(lt_unary());
    if (cur().kind == Tok::Ident && cur().text.size() == 1) {
      switch (cur().text[0]) {
        case 'X': ++pos_; return lt_next(lt_unary());
        case 'N': ++pos_; return lt_weak_next(lt_unary());
        case 'F': ++pos_; return lt_eventually(lt_unary());
        case 'G': ++pos_; return lt_always(lt_unary());
        default: break;
      }
    }
    return lt_primary();
  }

  Ltlf lt_primary() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::True: ++pos_; return lt_prop(prop_true());
      case Tok::False: ++pos_; return lt_prop(prop_false());
      case Tok::Ident:
        if (t.text == "U") break;
        ++pos_;
        return lt_prop(prop_atom(t.text));
      case Tok::LParen: {
        ++pos_;
        Ltlf f = lt_formula();
        expect(Tok::RParen);
        return f;
      }
      default:
        break;
    }
    note("formula");
    throw Abort{};
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  size_t err_pos_ = 0;
  std::vector<std::string> err_expected_;
};

}  // namespace

Formula parse_ldlf(std::string_view text) {
  Parser p(text);
  try {
    return p.ldlf();
  } catch (const Abort&) {
    p.raise();
  }
}

Ltlf parse_ltlf(std::string_view text) {
  Parser p(text);
  try {
    return p.ltlf();
  } catch (const Abort&) {
    p.raise();
  }
}

Path parse_path(std::string_view text) {
  Parser p(text);
  try {
    return p.path_only();
  } catch (const Abort&) {
    p.raise();
  }
}

Prop parse_prop(std::string_view text) {
  Parser p(text);
  try {
    return p.prop_only();
  } catch (const Abort&) {
    p.raise();
  }
}

}  // namespace ldlfmon
