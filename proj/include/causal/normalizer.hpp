#pragma once

// Puts causal rules into the four translatable shapes:
//   C  false <= G
//   L  L <= G
//   S  L1 <-> L2 <= G
//   D  L1 | ... | Ln <= G
// with implication-free bodies and explainable head literals.

#include <string>
#include <utility>
#include <vector>

#include "causal/ast.hpp"

namespace causal {

// Rewrites F -> G as ~F | G everywhere, bottom-up.
inline Formula eliminate_implications(const Formula& f) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
    case Op::Atom:
    case Op::Equal:
      return f;
    case Op::Not:
    case Op::Forall:
    case Op::Exists:
      return rebuild(f, eliminate_implications(f.operand()));
    case Op::Implies:
      return Formula::disj(Formula::negate(eliminate_implications(f.lhs())), eliminate_implications(f.rhs()));
    default:
      return rebuild(f, eliminate_implications(f.lhs()), eliminate_implications(f.rhs()));
  }
}

inline CausalRule eliminate_body_implications(CausalRule r) {
  r.body = eliminate_implications(r.body);
  return r;
}

// Complementary literal: p <-> ~p.
inline Formula complement(const Formula& literal) {
  if (literal.is(Op::Not)) return literal.operand();
  return Formula::negate(literal);
}

// The atom (or equality) underlying a literal.
inline const Formula& literal_atom(const Formula& literal) {
  return literal.is(Op::Not) ? literal.operand() : literal;
}

inline bool is_positive(const Formula& literal) { return !literal.is(Op::Not); }

inline bool is_explainable_literal(const Formula& literal, const Signature& sig) {
  const Formula& a = literal_atom(literal);
  return a.is_atom() && sig.is_explainable(a.predicate());
}

// Literals of a disjunctive head; false disjuncts are dropped.
inline std::vector<Formula> head_literals(const Formula& head) {
  std::vector<Formula> parts;
  flatten(head, Op::Or, parts);
  std::vector<Formula> out;
  for (auto& p : parts) {
    if (p.is(Op::Bottom)) continue;
    if (!p.is_literal()) throw NormalizeError("head disjunct '" + to_string(p) + "' is not a literal");
    out.push_back(std::move(p));
  }
  return out;
}

// Shape-based classification. Whether head literals are explainable is
// settled afterwards by rewrite_nonexplainable_heads.
inline RuleKind classify(const CausalRule& r, const Signature& sig) {
  (void)sig;
  const Formula& h = r.head;
  if (h.is(Op::Bottom)) return RuleKind::C;
  if (h.is_literal()) return RuleKind::L;
  if (h.is(Op::Iff)) {
    if (h.lhs().is_literal() && h.rhs().is_literal()) return RuleKind::S;
    throw NormalizeError("synonymity head '" + to_string(h) + "' must relate two literals");
  }
  if (h.is(Op::Or)) {
    try {
      head_literals(h);
    } catch (const NormalizeError& e) {
      throw NormalizeError("unsupported head '" + to_string(h) + "': " + e.what());
    }
    return RuleKind::D;
  }
  throw NormalizeError("unsupported head '" + to_string(h) +
                       "': expected false, a literal, L1 <-> L2, or a disjunction of literals");
}

namespace detail {

inline CausalRule make_rule(Formula head, Formula body, SourceSpan span) {
  RuleKind kind = head.is(Op::Bottom) ? RuleKind::C : (head.is_literal() ? RuleKind::L : RuleKind::D);
  return CausalRule{std::move(head), std::move(body), kind, span};
}

inline void rewrite_into(const CausalRule& r, const Signature& sig, std::vector<CausalRule>& out) {
  switch (r.kind) {
    case RuleKind::C:
      out.push_back(r);
      return;
    case RuleKind::L:
      if (is_explainable_literal(r.head, sig)) {
        out.push_back(r);
      } else {
        out.push_back(make_rule(Formula::bottom(), Formula::conj(r.body, complement(r.head)), r.span));
      }
      return;
    case RuleKind::S: {
      Formula l1 = r.head.lhs();
      Formula l2 = r.head.rhs();
      if (is_explainable_literal(l1, sig) && is_explainable_literal(l2, sig)) {
        out.push_back(r);
        return;
      }
      if (is_explainable_literal(l1, sig)) std::swap(l1, l2);
      // l1 is now non-explainable; the two L-rules may need rewriting again.
      rewrite_into(make_rule(l2, Formula::conj(r.body, l1), r.span), sig, out);
      rewrite_into(make_rule(complement(l2), Formula::conj(r.body, complement(l1)), r.span), sig, out);
      return;
    }
    case RuleKind::D: {
      std::vector<Formula> lits = head_literals(r.head);
      Formula body = r.body;
      // Leftmost non-explainable literal first.
      for (std::size_t i = 0; i < lits.size();) {
        if (is_explainable_literal(lits[i], sig)) {
          ++i;
          continue;
        }
        body = Formula::conj(body, complement(lits[i]));
        lits.erase(lits.begin() + static_cast<std::ptrdiff_t>(i));
      }
      out.push_back(make_rule(disjoin(lits), body, r.span));
      return;
    }
    default:
      throw NormalizeError("rule '" + to_string(r) + "' is not classified");
  }
}

}  // namespace detail

// Replaces a classified rule with equivalent rules whose head literals are
// all explainable.
inline std::vector<CausalRule> rewrite_nonexplainable_heads(const CausalRule& r, const Signature& sig) {
  std::vector<CausalRule> out;
  detail::rewrite_into(r, sig, out);
  return out;
}

// Full pipeline: body implications out, vacuous rules dropped, classify,
// head rewriting. Every output rule has kind C, L, S or D.
inline CausalTheory normalize(const CausalTheory& t) {
  CausalTheory out{t.signature, {}};
  for (const CausalRule& original : t.rules) {
    CausalRule r = eliminate_body_implications(original);
    if (r.head.is(Op::Top)) continue;
    try {
      r.kind = classify(r, t.signature);
    } catch (const NormalizeError& e) {
      if (!r.span.known()) throw;
      throw NormalizeError(std::to_string(r.span.line) + ":" + std::to_string(r.span.column) + ": " + e.what());
    }
    if (r.kind == RuleKind::D) {
      // Canonical disjunction: false disjuncts dropped, singletons become L.
      auto lits = head_literals(r.head);
      r = detail::make_rule(disjoin(lits), r.body, r.span);
    }
    for (auto& rewritten : rewrite_nonexplainable_heads(r, t.signature)) out.rules.push_back(std::move(rewritten));
  }
  return out;
}

}  // namespace causal
