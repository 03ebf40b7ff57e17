#pragma once

// Seeded random theories and programs for the property suites.
// Everything is propositional (arity 0) over the universe {a}.

#include <random>
#include <string>
#include <vector>

#include "causal/ast.hpp"
#include "causal/interpretation.hpp"
#include "causal/semantics.hpp"

namespace causal::fuzz {

struct Case {
  CausalTheory theory;
  Facts facts;
};

struct TheoryShape {
  std::size_t max_atoms = 4;
  std::size_t max_rules = 6;
  std::size_t max_depth = 3;
  std::size_t max_disjuncts = 3;
  // Allow non-explainable atoms in heads (before normalization).
  bool nonexplainable_heads = false;
  // Only definite rules (literal or false heads).
  bool definite = false;
};

namespace detail {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  std::size_t between(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool coin() { return below(2) == 1; }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 rng_;
};

inline std::vector<std::string> atom_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("p" + std::to_string(i));
  return out;
}

inline Formula body(Gen& g, const std::vector<std::string>& atoms, std::size_t depth, bool negation = true) {
  std::size_t leaf = depth == 0 ? 0 : g.below(negation ? 6 : 5);
  switch (leaf) {
    case 1:
      return Formula::conj(body(g, atoms, depth - 1, negation), body(g, atoms, depth - 1, negation));
    case 2:
      return Formula::disj(body(g, atoms, depth - 1, negation), body(g, atoms, depth - 1, negation));
    case 5:
      return Formula::negate(body(g, atoms, depth - 1, negation));
    default: {
      std::size_t k = g.below(atoms.size() + 2);
      if (k == atoms.size()) return Formula::top();
      if (k == atoms.size() + 1) return Formula::bottom();
      return Formula::atom(atoms[k]);
    }
  }
}

inline Formula literal(Gen& g, const std::vector<std::string>& atoms) {
  Formula a = Formula::atom(g.pick(atoms));
  return g.coin() ? a : Formula::negate(a);
}

}  // namespace detail

// Propositional theory over p0..p{n-1}: a nonempty explainable subset; the
// rest split between extensional atoms (with random facts) and free ones.
inline Case random_theory(std::uint64_t seed, const TheoryShape& shape = {}) {
  detail::Gen g(seed);
  const std::size_t n = g.between(1, shape.max_atoms);
  auto atoms = detail::atom_names(n);

  Case c;
  Signature& sig = c.theory.signature;
  sig.add_to_universe("a");
  for (const auto& a : atoms) sig.declare_predicate(a, 0);
  std::vector<std::string> explainable;
  std::vector<std::string> other;
  for (const auto& a : atoms) (g.coin() ? explainable : other).push_back(a);
  if (explainable.empty()) {
    explainable.push_back(other.back());
    other.pop_back();
  }
  for (const auto& a : explainable) sig.mark_explainable(a);
  for (const auto& a : other) {
    if (!g.coin()) continue;
    sig.mark_extensional(a);
    if (g.coin()) c.facts.push_back(GroundAtom{a, {}});
  }
  const auto& head_atoms = shape.nonexplainable_heads ? atoms : explainable;

  const std::size_t rules = g.between(1, shape.max_rules);
  // Some explainable atoms become exogenous (p <= p, ~p <= ~p); these pairs
  // count against the rule budget.
  for (const auto& a : explainable) {
    if (c.theory.rules.size() + 2 > rules || !g.coin()) continue;
    Formula p = Formula::atom(a);
    c.theory.rules.push_back(CausalRule{p, p, RuleKind::L, {}});
    c.theory.rules.push_back(CausalRule{Formula::negate(p), Formula::negate(p), RuleKind::L, {}});
  }
  while (c.theory.rules.size() < rules) {
    Formula b = detail::body(g, atoms, g.below(shape.max_depth + 1));
    // Kinds C, L, S, D with weights 1:2:1:2. Half of the L-rules are
    // defaults L <= L & G; without them most random theories have no model.
    std::size_t kind = shape.definite ? g.below(3) : g.below(6);
    kind = kind == 0 ? 0 : kind <= 2 ? 1 : kind == 3 ? 2 : 3;
    if (kind == 1 && g.coin()) {
      Formula l = detail::literal(g, head_atoms);
      Formula guard = g.coin() ? Formula::top() : detail::body(g, atoms, g.below(shape.max_depth));
      c.theory.rules.push_back(CausalRule{l, guard.is(Op::Top) ? l : Formula::conj(l, guard), RuleKind::L, {}});
      continue;
    }
    Formula head;
    RuleKind k = RuleKind::Unclassified;
    switch (kind) {
      case 0:
        head = Formula::bottom();
        k = RuleKind::C;
        break;
      case 1:
        head = detail::literal(g, head_atoms);
        k = RuleKind::L;
        break;
      case 2:
        head = Formula::iff(detail::literal(g, head_atoms), detail::literal(g, head_atoms));
        k = RuleKind::S;
        break;
      default: {
        std::vector<Formula> lits;
        std::size_t m = g.below(shape.max_disjuncts + 1);
        for (std::size_t j = 0; j < m; ++j) lits.push_back(detail::literal(g, head_atoms));
        // Keep the D shape visible even for 0 or 1 disjuncts.
        if (lits.empty()) {
          head = Formula::bottom();
        } else if (lits.size() == 1) {
          head = Formula::disj(lits[0], Formula::bottom());
        } else {
          head = disjoin(lits);
        }
        k = RuleKind::D;
        break;
      }
    }
    c.theory.rules.push_back(CausalRule{head, b, k, {}});
  }
  return c;
}

// Definite theory over at most `max_atoms` atoms.
inline Case random_definite_theory(std::uint64_t seed, std::size_t max_atoms = 5) {
  TheoryShape shape;
  shape.max_atoms = max_atoms;
  shape.definite = true;
  return random_theory(seed, shape);
}

// Ground program without negation: heads are disjunctions or conjunctions of
// atoms (or false), bodies built from atoms, true, false, & and |.
inline Program random_negation_free_program(std::uint64_t seed, std::size_t max_atoms = 5, std::size_t max_rules = 6) {
  detail::Gen g(seed);
  const std::size_t n = g.between(1, max_atoms);
  auto atoms = detail::atom_names(n);
  Program p;
  p.signature.add_to_universe("a");
  for (const auto& a : atoms) p.signature.declare_predicate(a, 0);
  for (const auto& a : atoms) {
    if (g.below(4) != 0) p.intensional.push_back(a);
  }
  if (p.intensional.empty()) p.intensional.push_back(atoms.front());
  const std::size_t rules = g.between(1, max_rules);
  for (std::size_t i = 0; i < rules; ++i) {
    Formula b = g.coin() ? Formula::top() : detail::body(g, atoms, g.below(3), false);
    std::vector<Formula> parts;
    std::size_t m = g.below(4);
    for (std::size_t j = 0; j < m; ++j) parts.push_back(Formula::atom(g.pick(atoms)));
    Formula h = g.below(3) == 0 ? conjoin(parts) : disjoin(parts);
    p.rules.push_back(ProgramRule{{}, b, h, {}, false});
  }
  return p;
}

}  // namespace causal::fuzz
