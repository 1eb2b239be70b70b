#include "ldlfmon/semantics.hpp"

#include <stdexcept>

namespace ldlfmon {

TraceEvaluator::TraceEvaluator(Trace trace) : trace_(std::move(trace)) {}

bool TraceEvaluator::eval_at(Formula f, size_t pos) {
  if (pos > trace_.size()) throw std::out_of_range("position past trace end");
  return formula_bits(f).get(pos);
}

bool TraceEvaluator::path_match(Path r, size_t from, size_t to) {
  if (from > trace_.size() || to > trace_.size())
    throw std::out_of_range("position past trace end");
  return path_rows(r)[from].get(to);
}

const Bits& TraceEvaluator::formula_bits(Formula f) {
  auto it = fmemo_.find(f);
  if (it != fmemo_.end()) return it->second;

  size_t n = trace_.size();
  Bits out(n + 1);
  switch (f->kind) {
    case FormulaKind::Tt: {
      Bits all(n + 1, true);
      out = all;
      break;
    }
    case FormulaKind::Ff:
      break;
    case FormulaKind::Prop:
      for (size_t i = 0; i < n; ++i)
        if (step_holds(trace_[i], f->prop)) out.set(i);
      break;
    case FormulaKind::Not: {
      out = formula_bits(f->lhs);
      out.flip();
      break;
    }
    case FormulaKind::And: {
      out = formula_bits(f->lhs);
      out &= formula_bits(f->rhs);
      break;
    }
    case FormulaKind::Or: {
      out = formula_bits(f->lhs);
      out |= formula_bits(f->rhs);
      break;
    }
    case FormulaKind::Diamond: {
      Bits body = formula_bits(f->lhs);
      const std::vector<Bits>& rows = path_rows(f->path);
      for (size_t i = 0; i <= n; ++i)
        if (rows[i].intersects(body)) out.set(i);
      break;
    }
    case FormulaKind::Box: {
      Bits body = formula_bits(f->lhs);
      const std::vector<Bits>& rows = path_rows(f->path);
      for (size_t i = 0; i <= n; ++i)
        if (rows[i].subset_of(body)) out.set(i);
      break;
    }
    default:
      throw std::logic_error("bad FormulaKind");
  }
  return fmemo_.emplace(f, std::move(out)).first->second;
}

const std::vector<Bits>& TraceEvaluator::path_rows(Path r) {
  auto it = pmemo_.find(r);
  if (it != pmemo_.end()) return it->second;

  size_t n = trace_.size();
  std::vector<Bits> m(n + 1, Bits(n + 1));
  switch (r->kind) {
    case PathKind::Prop:
      for (size_t i = 0; i < n; ++i)
        if (step_holds(trace_[i], r->prop)) m[i].set(i + 1);
      break;
    case PathKind::Test: {
      const Bits& body = formula_bits(r->test);
      for (size_t i = 0; i <= n; ++i)
        if (body.get(i)) m[i].set(i);
      break;
    }
    case PathKind::Union: {
      m = path_rows(r->lhs);
      const std::vector<Bits>& b = path_rows(r->rhs);
      for (size_t i = 0; i <= n; ++i) m[i] |= b[i];
      break;
    }
    case PathKind::Seq: {
      // Copy: the second path_rows call may rehash the memo.
      std::vector<Bits> a = path_rows(r->lhs);
      const std::vector<Bits>& b = path_rows(r->rhs);
      for (size_t i = 0; i <= n; ++i)
        a[i].for_each_set([&](size_t j) { m[i] |= b[j]; });
      break;
    }
    case PathKind::Star: {
      m = path_rows(r->lhs);
      for (size_t i = 0; i <= n; ++i) m[i].set(i);
      for (size_t k = 0; k <= n; ++k)
        for (size_t i = 0; i <= n; ++i)
          if (m[i].get(k)) m[i] |= m[k];
      break;
    }
    default:
      throw std::logic_error("bad PathKind");
  }
  return pmemo_.emplace(r, std::move(m)).first->second;
}

bool satisfies(const Trace& t, Formula f) {
  return TraceEvaluator(t).satisfies(f);
}

namespace {

struct LtlfEval {
  const Trace& t;
  size_t n;
  std::unordered_map<Ltlf, Bits> memo;

  const Bits& bits(Ltlf f) {
    auto it = memo.find(f);
    if (it != memo.end()) return it->second;
    Bits out(n + 1);
    switch (f->kind) {
      case LtlfKind::Prop:
        for (size_t i = 0; i < n; ++i)
          if (step_holds(t[i], f->prop)) out.set(i);
        break;
      case LtlfKind::Not:
        out = bits(f->lhs);
        out.flip();
        break;
      case LtlfKind::And:
        out = bits(f->lhs);
        out &= bits(f->rhs);
        break;
      case LtlfKind::Or:
        out = bits(f->lhs);
        out |= bits(f->rhs);
        break;
      case LtlfKind::Next: {
        const Bits& b = bits(f->lhs);
        for (size_t i = 0; i + 1 < n; ++i)
          if (b.get(i + 1)) out.set(i);
        break;
      }
      case LtlfKind::WeakNext: {
        const Bits& b = bits(f->lhs);
        for (size_t i = 0; i <= n; ++i)
          out.set(i, i + 1 >= n || b.get(i + 1));
        break;
      }
      case LtlfKind::Eventually: {
        const Bits& b = bits(f->lhs);
        bool acc = false;
        for (size_t i = n; i-- > 0;) {
          acc = acc || b.get(i);
          out.set(i, acc);
        }
        break;
      }
      case LtlfKind::Always: {
        const Bits& b = bits(f->lhs);
        bool acc = true;
        out.set(n);
        for (size_t i = n; i-- > 0;) {
          acc = acc && b.get(i);
          out.set(i, acc);
        }
        break;
      }
      case LtlfKind::Until: {
        const Bits& a = bits(f->lhs);
        const Bits& b = bits(f->rhs);
        bool acc = false;
        for (size_t i = n; i-- > 0;) {
          acc = b.get(i) || (a.get(i) && acc);
          out.set(i, acc);
        }
        break;
      }
      default:
        throw std::logic_error("bad LtlfKind");
    }
    return memo.emplace(f, std::move(out)).first->second;
  }
};

bool reachable_value(Trace& work, Formula f, int budget,
                     const std::vector<Step>& alphabet, bool target) {
  for (const Step& s : alphabet) {
    work.push_back(s);
    bool hit = satisfies(work, f) == target ||
               (budget > 1 && reachable_value(work, f, budget - 1, alphabet, target));
    work.pop_back();
    if (hit) return true;
  }
  return false;
}

}  // namespace

bool eval_ltlf(const Trace& t, Ltlf f) {
  LtlfEval ev{t, t.size(), {}};
  return ev.bits(f).get(0);
}

PrefixFlags classify_prefix_bruteforce(const Trace& prefix, Formula f,
                                       int horizon,
                                       const std::vector<Prop>& universe) {
  std::vector<Step> alphabet;
  size_t k = universe.size();
  for (size_t mask = 0; mask < (size_t{1} << k); ++mask) {
    std::vector<Prop> ps;
    for (size_t i = 0; i < k; ++i)
      if (mask >> i & 1) ps.push_back(universe[i]);
    alphabet.push_back(make_step(std::move(ps)));
  }
  // The empty continuation counts, so the current value settles one flag and
  // a single search settles the other.
  bool current = satisfies(prefix, f);
  Trace work = prefix;
  bool flip = horizon > 0 &&
              reachable_value(work, f, horizon, alphabet, !current);
  PrefixFlags out;
  out.poss_good = current || flip;
  out.poss_bad = !current || flip;
  out.nec_good = !out.poss_bad;
  out.nec_bad = !out.poss_good;
  return out;
}

}  // namespace ldlfmon
