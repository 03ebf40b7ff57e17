#pragma once

// Instantiation over the finite universe. Quantifiers unfold into finite
// conjunctions/disjunctions and equality atoms between constants become
// true/false (unique names).

#include <map>
#include <string>
#include <vector>

#include "causal/ast.hpp"

namespace causal {

using Binding = std::map<std::string, std::string>;

inline Formula ground_formula(const Formula& f, const Signature& sig, const Binding& binding) {
  const auto& universe = sig.universe();
  if (universe.empty()) throw GroundingError("cannot ground over an empty universe");
  auto resolve = [&](const Term& t) -> Term {
    if (!t.is_variable()) return t;
    auto it = binding.find(t.name);
    if (it == binding.end()) throw GroundingError("variable " + t.name + " is not bound");
    return Term::constant(it->second);
  };
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
      return f;
    case Op::Atom: {
      std::vector<Term> args;
      for (const Term& t : f.args()) args.push_back(resolve(t));
      return Formula::atom(f.predicate(), std::move(args));
    }
    case Op::Equal:
      return resolve(f.args()[0]).name == resolve(f.args()[1]).name ? Formula::top() : Formula::bottom();
    case Op::Not:
      return Formula::negate(ground_formula(f.operand(), sig, binding));
    case Op::Forall:
    case Op::Exists: {
      std::vector<Formula> instances;
      Binding inner = binding;
      for (const auto& c : universe) {
        inner[f.variable()] = c;
        instances.push_back(ground_formula(f.operand(), sig, inner));
      }
      return f.is(Op::Forall) ? conjoin(instances) : disjoin(instances);
    }
    default:
      return rebuild(f, ground_formula(f.lhs(), sig, binding), ground_formula(f.rhs(), sig, binding));
  }
}

// All assignments of `vars` to universe constants, first variable slowest.
inline std::vector<Binding> bindings(const std::vector<std::string>& vars, const std::vector<std::string>& universe) {
  if (universe.empty()) throw GroundingError("cannot ground over an empty universe");
  std::vector<Binding> out{Binding{}};
  for (const auto& v : vars) {
    std::vector<Binding> next;
    next.reserve(out.size() * universe.size());
    for (const auto& b : out) {
      for (const auto& c : universe) {
        Binding e = b;
        e[v] = c;
        next.push_back(std::move(e));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline CausalTheory ground_theory(const CausalTheory& t) {
  CausalTheory out{t.signature, {}};
  for (const CausalRule& r : t.rules) {
    for (const Binding& b : bindings(free_variables(r), t.signature.universe())) {
      out.rules.push_back(
          CausalRule{ground_formula(r.head, t.signature, b), ground_formula(r.body, t.signature, b), r.kind, r.span});
    }
  }
  return out;
}

inline std::vector<ProgramRule> ground_rule(const ProgramRule& r, const Signature& sig) {
  const Formula parts[] = {r.body, r.head};
  for (const auto& v : free_variables(parts)) {
    if (std::find(r.universals.begin(), r.universals.end(), v) == r.universals.end()) {
      throw GroundingError("variable " + v + " is not bound in rule " + to_string(r));
    }
  }
  std::vector<ProgramRule> out;
  for (const Binding& b : bindings(r.universals, sig.universe())) {
    out.push_back(ProgramRule{{}, ground_formula(r.body, sig, b), ground_formula(r.head, sig, b), r.group,
                              r.completeness});
  }
  return out;
}

inline Program ground_program(const Program& p) {
  Program out{p.signature, {}, p.intensional};
  for (const ProgramRule& r : p.rules) {
    auto rules = ground_rule(r, p.signature);
    out.rules.insert(out.rules.end(), rules.begin(), rules.end());
  }
  return out;
}

}  // namespace causal
