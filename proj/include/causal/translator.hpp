#pragma once

// Causal theory -> logic program.
//
// Each explainable predicate p gets a fresh partner p_hat standing for ~p.
// Rule bodies G enter the program as ~~G; the completeness constraints
//   ~(p(X) & p_hat(X))      ~(~p(X) & ~p_hat(X))
// force p_hat to be the complement of p in every stable model, which makes
// the stable models of the program (relative to p and p_hat) coincide with
// the causal models of the theory extended by that definition.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "causal/ast.hpp"
#include "causal/normalizer.hpp"

namespace causal {

class HatMap {
 public:
  explicit HatMap(const Signature& sig) {
    for (const auto& p : sig.explainable()) {
      std::string name = p + "_hat";
      while (sig.find_predicate(name) || taken(name)) name += '_';
      hats_.emplace_back(p, name);
    }
  }

  const std::string& hat(std::string_view base) const {
    for (const auto& [b, h] : hats_) {
      if (b == base) return h;
    }
    throw Error("predicate '" + std::string(base) + "' has no hat partner (not explainable)");
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return hats_; }

  // `sig` plus the hat predicates, declared after everything else.
  Signature extend(const Signature& sig) const {
    Signature out = sig;
    for (const auto& [b, h] : hats_) out.declare_hat(h, b);
    return out;
  }

  // p(t) -> p_hat(t)
  Formula hat_atom(const Formula& atom) const {
    return Formula::atom(hat(atom.predicate()), std::vector<Term>(atom.args().begin(), atom.args().end()));
  }

 private:
  bool taken(const std::string& name) const {
    for (const auto& [b, h] : hats_) {
      if (h == name) return true;
    }
    return false;
  }

  std::vector<std::pair<std::string, std::string>> hats_;
};

namespace detail {

inline Formula double_negation(const Formula& f) { return Formula::negate(Formula::negate(f)); }

inline void require_kind(const CausalRule& r, RuleKind kind, const char* what) {
  if (r.kind != kind) {
    throw Error(std::string(what) + " expects a " + std::string(to_string(kind)) + "-rule, got '" + to_string(r) +
                "' (" + std::string(to_string(r.kind)) + ")");
  }
}

// Layout key: the predicate of the first head literal.
inline std::string group_of(const CausalRule& r) {
  if (r.head.is(Op::Bottom)) return {};
  Formula first = r.head.is(Op::Iff) ? r.head.lhs() : head_literals(r.head).front();
  Formula a = literal_atom(first);
  return a.is_atom() ? a.predicate() : std::string{};
}

inline ProgramRule closed(const CausalRule& source, Formula body, Formula head) {
  return ProgramRule{free_variables(source), std::move(body), std::move(head), group_of(source), false};
}

// Literal over an explainable predicate -> program atom (p or p_hat).
inline Formula literal_to_atom(const Formula& literal, const HatMap& hats) {
  if (is_positive(literal)) return literal;
  return hats.hat_atom(literal.operand());
}

}  // namespace detail

// false <= G  ~>  ~G
inline ProgramRule translate_constraint(const CausalRule& r) {
  detail::require_kind(r, RuleKind::C, "translate_constraint");
  return detail::closed(r, Formula::top(), Formula::negate(r.body));
}

// p(t) <= G  ~>  ~~G -> p(t);   ~p(t) <= G  ~>  ~~G -> p_hat(t)
inline ProgramRule translate_literal_rule(const CausalRule& r, const HatMap& hats) {
  detail::require_kind(r, RuleKind::L, "translate_literal_rule");
  return detail::closed(r, detail::double_negation(r.body), detail::literal_to_atom(r.head, hats));
}

// L1 <-> L2 <= G  ~>  four nondisjunctive rules. Same polarity:
//   ~~G & p1 -> p2,  ~~G & p2 -> p1,  ~~G & p1_hat -> p2_hat,  ~~G & p2_hat -> p1_hat
// Mixed polarity (p1 the L1 predicate):
//   ~~G & p1_hat -> p2,  ~~G & p2 -> p1_hat,  ~~G & p1 -> p2_hat,  ~~G & p2_hat -> p1
inline std::vector<ProgramRule> translate_synonymity_rule(const CausalRule& r, const HatMap& hats) {
  detail::require_kind(r, RuleKind::S, "translate_synonymity_rule");
  const Formula& l1 = r.head.lhs();
  const Formula& l2 = r.head.rhs();
  Formula a1 = literal_atom(l1);
  Formula a2 = literal_atom(l2);
  Formula h1 = hats.hat_atom(a1);
  Formula h2 = hats.hat_atom(a2);
  Formula g = detail::double_negation(r.body);
  auto rule = [&](const Formula& from, const Formula& to) { return detail::closed(r, Formula::conj(g, from), to); };
  if (is_positive(l1) == is_positive(l2)) {
    return {rule(a1, a2), rule(a2, a1), rule(h1, h2), rule(h2, h1)};
  }
  return {rule(h1, a2), rule(a2, h1), rule(a1, h2), rule(h2, a1)};
}

// Pos | ~Neg <= G  ~>
//   ~~G & /\_{A in Pos} (A_hat | ~A_hat) & /\_{A in Neg} (A | ~A) -> \/Pos A | \/Neg A_hat
// C- and L-rules are accepted as D-rules with zero or one head literal.
inline ProgramRule translate_disjunctive_rule(const CausalRule& r, const HatMap& hats) {
  if (r.kind != RuleKind::D && r.kind != RuleKind::L && r.kind != RuleKind::C) {
    detail::require_kind(r, RuleKind::D, "translate_disjunctive_rule");
  }
  std::vector<Formula> positive;
  std::vector<Formula> negative;
  for (const Formula& lit : head_literals(r.head)) {
    auto& bucket = is_positive(lit) ? positive : negative;
    const Formula& a = literal_atom(lit);
    if (std::find(bucket.begin(), bucket.end(), a) == bucket.end()) bucket.push_back(a);
  }
  std::vector<Formula> antecedent{detail::double_negation(r.body)};
  std::vector<Formula> consequent;
  for (const Formula& a : positive) {
    Formula h = hats.hat_atom(a);
    antecedent.push_back(Formula::disj(h, Formula::negate(h)));
  }
  for (const Formula& a : negative) antecedent.push_back(Formula::disj(a, Formula::negate(a)));
  for (const Formula& a : positive) consequent.push_back(a);
  for (const Formula& a : negative) consequent.push_back(hats.hat_atom(a));
  return detail::closed(r, conjoin(antecedent), disjoin(consequent));
}

// The S-rule as the D-rules L1 | ~L2 <= G and ~L1 | L2 <= G, each through
// translate_disjunctive_rule.
inline std::vector<ProgramRule> translate_synonymity_as_disjunctive(const CausalRule& r, const HatMap& hats) {
  detail::require_kind(r, RuleKind::S, "translate_synonymity_as_disjunctive");
  const Formula& l1 = r.head.lhs();
  const Formula& l2 = r.head.rhs();
  CausalRule first{Formula::disj(l1, complement(l2)), r.body, RuleKind::D, r.span};
  CausalRule second{Formula::disj(complement(l1), l2), r.body, RuleKind::D, r.span};
  auto a = translate_disjunctive_rule(first, hats);
  auto b = translate_disjunctive_rule(second, hats);
  a.group = b.group = detail::group_of(r);
  return {a, b};
}

namespace detail {

inline std::vector<Term> fresh_variables(std::size_t arity) {
  std::vector<Term> out;
  if (arity == 1) {
    out.push_back(Term::variable("X"));
  } else {
    for (std::size_t i = 1; i <= arity; ++i) out.push_back(Term::variable("X" + std::to_string(i)));
  }
  return out;
}

}  // namespace detail

inline std::vector<ProgramRule> completeness_constraints(const Signature& sig, const HatMap& hats) {
  std::vector<ProgramRule> out;
  for (const auto& [base, hat] : hats.entries()) {
    auto args = detail::fresh_variables(sig.arity(base));
    std::vector<std::string> vars;
    for (const auto& t : args) vars.push_back(t.name);
    Formula p = Formula::atom(base, args);
    Formula h = Formula::atom(hat, args);
    out.push_back(ProgramRule{vars, Formula::top(), Formula::negate(Formula::conj(p, h)), base, true});
    out.push_back(ProgramRule{vars, Formula::top(),
                              Formula::negate(Formula::conj(Formula::negate(p), Formula::negate(h))), base, true});
  }
  return out;
}

struct TranslateOptions {
  // Route the given rule kinds through translate_disjunctive_rule instead of
  // their dedicated translation. The stable models do not change.
  bool constraints_as_disjunctive = false;
  bool literals_as_disjunctive = false;
  bool synonymity_as_disjunctive = false;
};

// Expects a normalized theory (every rule of kind C, L, S or D).
inline Program translate(const CausalTheory& t, const TranslateOptions& options = {}) {
  HatMap hats(t.signature);
  Program out{hats.extend(t.signature), {}, {}};
  for (const CausalRule& r : t.rules) {
    switch (r.kind) {
      case RuleKind::C:
        out.rules.push_back(options.constraints_as_disjunctive ? translate_disjunctive_rule(r, hats)
                                                               : translate_constraint(r));
        break;
      case RuleKind::L:
        out.rules.push_back(options.literals_as_disjunctive ? translate_disjunctive_rule(r, hats)
                                                            : translate_literal_rule(r, hats));
        break;
      case RuleKind::S: {
        auto rules = options.synonymity_as_disjunctive ? translate_synonymity_as_disjunctive(r, hats)
                                                       : translate_synonymity_rule(r, hats);
        out.rules.insert(out.rules.end(), rules.begin(), rules.end());
        break;
      }
      case RuleKind::D:
        out.rules.push_back(translate_disjunctive_rule(r, hats));
        break;
      default:
        throw Error("cannot translate unclassified rule '" + to_string(r) + "'; normalize the theory first");
    }
    // Head literals must already be explainable here.
    if (r.kind != RuleKind::C) {
      std::vector<Formula> lits =
          r.kind == RuleKind::S ? std::vector<Formula>{r.head.lhs(), r.head.rhs()} : head_literals(r.head);
      for (const auto& l : lits) {
        if (!is_explainable_literal(l, t.signature)) {
          throw Error("head literal '" + to_string(l) + "' is not explainable; normalize the theory first");
        }
      }
    }
  }
  auto cc = completeness_constraints(t.signature, hats);
  out.rules.insert(out.rules.end(), cc.begin(), cc.end());
  out.intensional = t.signature.explainable();
  for (const auto& [base, hat] : hats.entries()) out.intensional.push_back(hat);
  return out;
}

// ---------------------------------------------------------------------------
// Simplification. Every rewrite keeps the stable models:
//   ~~~F            => ~F
//   ~~F             => F                 F mentions no intensional predicate
//   ~~(F & G)       => ~~F & ~~G
//   ~~p(t)          => ~p_hat(t)         completeness constraints for p present
//   ~~p_hat(t)      => ~p(t)             likewise
//   true & F => F;  false & F => false;  false | F => F;  true | F => true
//   ~true => false;  ~false => true
// The first three are intuitionistic equivalences or follow from excluded
// middle on non-intensional atoms; the hat rewrites are intuitionistic
// consequences of the completeness constraints, which stay in the program.

namespace detail {

struct SimplifyContext {
  const Program& program;
  std::map<std::string, std::string> partner;  // p <-> p_hat, both directions

  bool mentions_intensional(const Formula& f) const { return mentions_any(f, program.intensional); }
};

inline Formula simplify_formula(const Formula& f, const SimplifyContext& ctx);

inline Formula simplify_negation(const Formula& inner, const SimplifyContext& ctx) {
  if (inner.is(Op::Top)) return Formula::bottom();
  if (inner.is(Op::Bottom)) return Formula::top();
  if (inner.is(Op::Not)) {
    const Formula& g = inner.operand();
    if (g.is(Op::Not)) return g;  // ~~~F, with ~F already simplified
    if (!ctx.mentions_intensional(g)) return g;
    if (g.is(Op::And)) {
      return simplify_formula(Formula::conj(double_negation(g.lhs()), double_negation(g.rhs())), ctx);
    }
    if (g.is_atom()) {
      auto it = ctx.partner.find(g.predicate());
      if (it != ctx.partner.end()) {
        return Formula::negate(Formula::atom(it->second, std::vector<Term>(g.args().begin(), g.args().end())));
      }
    }
  }
  return Formula::negate(inner);
}

inline Formula simplify_formula(const Formula& f, const SimplifyContext& ctx) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
    case Op::Atom:
    case Op::Equal:
      return f;
    case Op::Not:
      return simplify_negation(simplify_formula(f.operand(), ctx), ctx);
    case Op::And: {
      Formula a = simplify_formula(f.lhs(), ctx);
      Formula b = simplify_formula(f.rhs(), ctx);
      if (a.is(Op::Top)) return b;
      if (b.is(Op::Top)) return a;
      if (a.is(Op::Bottom) || b.is(Op::Bottom)) return Formula::bottom();
      return Formula::conj(a, b);
    }
    case Op::Or: {
      Formula a = simplify_formula(f.lhs(), ctx);
      Formula b = simplify_formula(f.rhs(), ctx);
      if (a.is(Op::Bottom)) return b;
      if (b.is(Op::Bottom)) return a;
      if (a.is(Op::Top) || b.is(Op::Top)) return Formula::top();
      return Formula::disj(a, b);
    }
    case Op::Forall:
    case Op::Exists:
      return rebuild(f, simplify_formula(f.operand(), ctx));
    default:
      return rebuild(f, simplify_formula(f.lhs(), ctx), simplify_formula(f.rhs(), ctx));
  }
}

}  // namespace detail

inline Program simplify(const Program& p) {
  detail::SimplifyContext ctx{p, {}};
  // A pair only counts when both of its completeness constraints are present.
  std::map<std::string, int> cc_count;
  for (const auto& r : p.rules) {
    if (r.completeness) ++cc_count[r.group];
  }
  for (const auto& [base, n] : cc_count) {
    std::string hat = p.signature.hat_for(base);
    if (n >= 2 && !hat.empty()) {
      ctx.partner[base] = hat;
      ctx.partner[hat] = base;
    }
  }
  Program out{p.signature, {}, p.intensional};
  for (const auto& r : p.rules) {
    if (r.completeness) {
      out.rules.push_back(r);
      continue;
    }
    ProgramRule s = r;
    s.body = detail::simplify_formula(r.body, ctx);
    s.head = detail::simplify_formula(r.head, ctx);
    // Keep the closure tight: variables may vanish with simplified subformulas.
    std::vector<std::string> vars;
    const Formula parts[] = {s.body, s.head};
    for (const auto& v : free_variables(parts)) vars.push_back(v);
    std::vector<std::string> universals;
    for (const auto& v : r.universals) {
      if (std::find(vars.begin(), vars.end(), v) != vars.end()) universals.push_back(v);
    }
    s.universals = universals;
    out.rules.push_back(std::move(s));
  }
  return out;
}

}  // namespace causal
