#include <gtest/gtest.h>

#include "causal/ast.hpp"
#include "causal/interpretation.hpp"
#include "causal/parser.hpp"

using namespace causal;

namespace {

Formula atom(const std::string& p, std::vector<std::string> args = {}) {
  std::vector<Term> terms;
  for (auto& a : args) terms.push_back(std::isupper(static_cast<unsigned char>(a[0])) ? Term::variable(a) : Term::constant(a));
  return Formula::atom(p, terms);
}

// Free variables by brute force: every variable occurrence with the list of
// quantifiers above it.
void naive_free(const Formula& f, std::vector<std::string> bound, std::vector<std::string>& out) {
  if (f.is(Op::Atom) || f.is(Op::Equal)) {
    for (const Term& t : f.args()) {
      if (!t.is_variable()) continue;
      bool is_bound = false;
      for (const auto& b : bound) is_bound |= b == t.name;
      bool seen = false;
      for (const auto& o : out) seen |= o == t.name;
      if (!is_bound && !seen) out.push_back(t.name);
    }
    return;
  }
  if (f.is_quantifier()) {
    bound.push_back(f.variable());
    naive_free(f.operand(), bound, out);
    return;
  }
  if (f.is(Op::Not)) {
    naive_free(f.operand(), bound, out);
    return;
  }
  if (f.is(Op::Top) || f.is(Op::Bottom)) return;
  naive_free(f.lhs(), bound, out);
  naive_free(f.rhs(), bound, out);
}

}  // namespace

TEST(FreeVariables, AtomAndConstant) {
  auto f = Formula::conj(atom("p", {"X"}), atom("q", {"a"}));
  EXPECT_EQ(free_variables(f), std::vector<std::string>{"X"});
}

TEST(FreeVariables, BoundByQuantifier) {
  EXPECT_TRUE(free_variables(Formula::forall("X", atom("p", {"X"}))).empty());
}

TEST(FreeVariables, ScopeEndsAtDisjunction) {
  // (forall X p(X,Y)) | q(X)
  auto f = Formula::disj(Formula::forall("X", atom("p", {"X", "Y"})), atom("q", {"X"}));
  std::vector<std::string> naive;
  naive_free(f, {}, naive);
  EXPECT_EQ(naive, (std::vector<std::string>{"Y", "X"}));
  EXPECT_EQ(free_variables(f), naive);
}

TEST(FreeVariables, AgreesWithNaiveWalkerOnParsedFormulas) {
  Signature sig;
  sig.add_to_universe("a");
  for (const char* p : {"p", "q"}) sig.declare_predicate(p, 2);
  const char* texts[] = {
      "forall X: p(X, Y) & exists Y: q(Y, Z)",
      "p(Z, X) | forall Z: q(Z, W) -> p(W, V)",
      "~exists X, Y: p(X, Y) & q(Y, U)",
      "X = Y & p(a, X)",
  };
  for (const char* t : texts) {
    Formula f = parse_formula(t, sig);
    std::vector<std::string> naive;
    naive_free(f, {}, naive);
    EXPECT_EQ(free_variables(f), naive) << t;
  }
}

TEST(SubstitutePredicates, RenamesEverywhere) {
  Signature sig;
  sig.add_to_universe("a");
  sig.declare_predicate("p", 0);
  sig.declare_predicate("q", 0);
  sig.declare_predicate("r", 0);
  std::map<std::string, std::string> m{{"p", "r"}};
  EXPECT_EQ(substitute_predicates(Formula::conj(atom("p"), atom("q")), m, sig), Formula::conj(atom("r"), atom("q")));
  // Unlike the stable-model transformation, negated occurrences are renamed too.
  EXPECT_EQ(substitute_predicates(Formula::negate(atom("p")), m, sig), Formula::negate(atom("r")));
  EXPECT_EQ(substitute_predicates(atom("p", {"X"}), {}, sig), atom("p", {"X"}));
}

TEST(SubstitutePredicates, ArityMismatch) {
  Signature sig;
  sig.declare_predicate("p", 0);
  sig.declare_predicate("q", 1);
  EXPECT_THROW(substitute_predicates(atom("p"), {{"p", "q"}}, sig), Error);
}

TEST(SubstitutePredicates, IdempotentAndKeepsFreeVariables) {
  Signature sig;
  sig.declare_predicate("p", 1);
  sig.declare_predicate("s", 1);
  sig.declare_predicate("q", 2);
  std::map<std::string, std::string> m{{"p", "s"}};
  auto f = Formula::implies(atom("p", {"X"}), Formula::exists("Y", atom("q", {"X", "Y"})));
  auto once = substitute_predicates(f, m, sig);
  EXPECT_EQ(substitute_predicates(once, m, sig), once);
  EXPECT_EQ(free_variables(once), free_variables(f));
}

TEST(Formula, StructuralEquality) {
  Signature sig;
  for (const char* p : {"p", "q", "r"}) sig.declare_predicate(p, 0);
  EXPECT_EQ(parse_formula("~p & q | r", sig), parse_formula("((~p) & q) | r", sig));
  EXPECT_NE(parse_formula("p & q", sig), parse_formula("q & p", sig));
}

TEST(Formula, PrinterRoundTrip) {
  Signature sig;
  sig.add_to_universe("a");
  sig.declare_predicate("p", 1);
  sig.declare_predicate("q", 1);
  sig.declare_predicate("r", 0);
  const char* texts[] = {
      "forall X: ~p(X) -> q(X) | ~q(X)",
      "~~(p(a) & ~q(a)) -> r",
      "(r -> r) -> r",
      "r | (r & ~r) | ~~~r",
      "exists X: p(X) & X = a",
      "(forall X: p(X)) | r",
      "true & ~false",
  };
  for (const char* t : texts) {
    Formula f = parse_formula(t, sig);
    EXPECT_EQ(parse_formula(to_string(f), sig), f) << t << " printed as " << to_string(f);
  }
}

TEST(Signature, ExplainableAndExtensionalDisjoint) {
  Signature sig;
  sig.declare_predicate("p", 0);
  sig.mark_explainable("p");
  EXPECT_THROW(sig.mark_extensional("p"), Error);
}

TEST(Signature, ArityMismatch) {
  Signature sig;
  sig.declare_predicate("p", 1);
  EXPECT_THROW(sig.declare_predicate("p", 2), Error);
}

TEST(AtomTable, CanonicalOrder) {
  Signature sig;
  sig.add_to_universe("a");
  sig.add_to_universe("b");
  sig.declare_predicate("q", 0);
  sig.declare_predicate("p", 2);
  AtomTable t(sig);
  ASSERT_EQ(t.size(), 5u);
  EXPECT_EQ(to_string(t.atom(0)), "q");
  EXPECT_EQ(to_string(t.atom(1)), "p(a,a)");
  EXPECT_EQ(to_string(t.atom(2)), "p(a,b)");
  EXPECT_EQ(to_string(t.atom(4)), "p(b,b)");
}

TEST(AtomTable, HatsDisplayAsStrongNegation) {
  Signature sig;
  sig.add_to_universe("a");
  sig.declare_predicate("on1", 1);
  sig.declare_hat("on1_hat", "on1");
  AtomTable t(sig);
  EXPECT_EQ(t.display(1), "-on1(a)");
}
