#include <gtest/gtest.h>

#include "causal/fuzz.hpp"

using namespace causal;

TEST(Fuzz, DeterministicPerSeed) {
  for (std::uint64_t seed : {0ull, 1ull, 99ull, 123456789ull}) {
    auto a = fuzz::random_theory(seed);
    auto b = fuzz::random_theory(seed);
    EXPECT_EQ(a.theory.rules, b.theory.rules);
    EXPECT_EQ(a.facts, b.facts);
    auto p = fuzz::random_negation_free_program(seed);
    auto q = fuzz::random_negation_free_program(seed);
    ASSERT_EQ(p.rules.size(), q.rules.size());
    for (std::size_t i = 0; i < p.rules.size(); ++i) EXPECT_EQ(to_string(p.rules[i]), to_string(q.rules[i]));
  }
  EXPECT_NE(fuzz::random_theory(1).theory.rules, fuzz::random_theory(2).theory.rules);
}

TEST(Fuzz, RespectsShape) {
  fuzz::TheoryShape shape;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    auto c = fuzz::random_theory(seed, shape);
    const auto& sig = c.theory.signature;
    EXPECT_LE(sig.predicates().size(), shape.max_atoms);
    EXPECT_GE(sig.explainable().size(), 1u);
    EXPECT_GE(c.theory.rules.size(), 1u);
    EXPECT_LE(c.theory.rules.size(), shape.max_rules);
    for (const auto& r : c.theory.rules) {
      // An empty disjunction is generated as a D-rule with head false.
      RuleKind shape_kind = classify(r, sig);
      if (r.kind == RuleKind::D && r.head.is(Op::Bottom)) {
        EXPECT_EQ(shape_kind, RuleKind::C);
      } else {
        EXPECT_EQ(shape_kind, r.kind) << to_string(r);
      }
      if (r.kind == RuleKind::C) continue;
      auto lits = r.kind == RuleKind::S ? std::vector<Formula>{r.head.lhs(), r.head.rhs()} : head_literals(r.head);
      for (const auto& l : lits) EXPECT_TRUE(is_explainable_literal(l, sig));
    }
    for (const auto& f : c.facts) EXPECT_TRUE(sig.is_extensional(f.predicate));
  }
}

TEST(Fuzz, DefiniteTheories) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto c = fuzz::random_definite_theory(seed);
    for (const auto& r : c.theory.rules) EXPECT_TRUE(is_definite(r, c.theory.signature)) << to_string(r);
  }
}

TEST(Fuzz, NegationFreePrograms) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto p = fuzz::random_negation_free_program(seed);
    for (const auto& r : p.rules) {
      EXPECT_FALSE(contains(r.body, Op::Not));
      EXPECT_FALSE(contains(r.head, Op::Not));
    }
  }
}
