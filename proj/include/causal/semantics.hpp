#pragma once

// Brute-force semantic oracles over finite Herbrand interpretations.
//
// Interpretations are enumerated as binary counters over the canonical atom
// order. Atoms of extensional predicates are fixed by the given facts (true
// iff listed); every other atom ranges freely.

#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "causal/ast.hpp"
#include "causal/grounder.hpp"
#include "causal/interpretation.hpp"
#include "causal/normalizer.hpp"
#include "causal/translator.hpp"

namespace causal {

struct EnumerationLimits {
  // Largest number of free ground atoms enumerated (2^n candidates).
  std::size_t max_free_atoms = 24;
};

using Facts = std::vector<GroundAtom>;

// Shadow copy of an intensional predicate in the minimality check.
inline std::string shadow_name(std::string_view predicate) { return std::string(predicate) + "'"; }

namespace detail {

inline constexpr std::size_t kMaxAtoms = 62;

using Mask = std::uint64_t;

inline Mask bit(std::size_t i) { return Mask{1} << i; }

// Ground formula flattened into an array; atom leaves optionally read from
// a second ("shadow") assignment.
struct Compiled {
  struct Node {
    Op op = Op::Top;
    int lhs = -1;
    int rhs = -1;
    std::size_t atom = 0;
    bool shadow = false;
  };
  std::vector<Node> nodes;
  int root = -1;
};

inline int compile_into(const Formula& f, const AtomTable& table, Compiled& out) {
  Compiled::Node n;
  n.op = f.op();
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
      break;
    case Op::Atom: {
      GroundAtom g = to_ground_atom(f);
      if (!g.predicate.empty() && g.predicate.back() == '\'') {
        g.predicate.pop_back();
        n.shadow = true;
      }
      auto idx = table.find(g);
      if (!idx) throw Error("atom " + to_string(g) + " is not in the interpretation domain");
      n.atom = *idx;
      break;
    }
    case Op::Equal: {
      if (f.args()[0].is_variable() || f.args()[1].is_variable()) {
        throw GroundingError("equality " + to_string(f) + " is not ground");
      }
      n.op = f.args()[0].name == f.args()[1].name ? Op::Top : Op::Bottom;
      break;
    }
    case Op::Not:
      n.lhs = compile_into(f.operand(), table, out);
      break;
    case Op::Forall:
    case Op::Exists:
      throw GroundingError("formula " + to_string(f) + " still contains a quantifier");
    default:
      n.lhs = compile_into(f.lhs(), table, out);
      n.rhs = compile_into(f.rhs(), table, out);
      break;
  }
  out.nodes.push_back(n);
  return static_cast<int>(out.nodes.size() - 1);
}

inline Compiled compile(const Formula& f, const AtomTable& table) {
  Compiled c;
  c.root = compile_into(f, table, c);
  return c;
}

// `world` supplies ordinary atoms, `shadow` the shadow-flagged ones.
inline bool evaluate(const Compiled& c, int node, Mask world, Mask shadow) {
  const auto& n = c.nodes[static_cast<std::size_t>(node)];
  switch (n.op) {
    case Op::Top: return true;
    case Op::Bottom: return false;
    case Op::Atom: return ((n.shadow ? shadow : world) >> n.atom) & 1U;
    case Op::Not: return !evaluate(c, n.lhs, world, shadow);
    case Op::And: return evaluate(c, n.lhs, world, shadow) && evaluate(c, n.rhs, world, shadow);
    case Op::Or: return evaluate(c, n.lhs, world, shadow) || evaluate(c, n.rhs, world, shadow);
    case Op::Implies: return !evaluate(c, n.lhs, world, shadow) || evaluate(c, n.rhs, world, shadow);
    case Op::Iff: return evaluate(c, n.lhs, world, shadow) == evaluate(c, n.rhs, world, shadow);
    default: return false;
  }
}

inline bool evaluate(const Compiled& c, Mask world, Mask shadow) { return evaluate(c, c.root, world, shadow); }

inline bool all_true(const std::vector<Compiled>& fs, Mask world, Mask shadow) {
  for (const auto& f : fs) {
    if (!evaluate(f, world, shadow)) return false;
  }
  return true;
}

// Candidate space: fixed extensional atoms plus the free ones.
struct Space {
  std::shared_ptr<const AtomTable> table;
  Mask fixed_values = 0;
  std::vector<std::size_t> free;

  std::uint64_t count() const { return std::uint64_t{1} << free.size(); }

  Mask candidate(std::uint64_t n) const {
    Mask m = fixed_values;
    for (std::size_t k = 0; k < free.size(); ++k) {
      if ((n >> k) & 1U) m |= bit(free[k]);
    }
    return m;
  }

  Mask mask_of(const std::vector<std::string>& predicates) const {
    Mask m = 0;
    for (std::size_t i = 0; i < table->size(); ++i) {
      const auto& p = table->predicate_of(i).name;
      if (std::find(predicates.begin(), predicates.end(), p) != predicates.end()) m |= bit(i);
    }
    return m;
  }

  Interpretation interpretation(Mask m) const {
    std::vector<bool> truth(table->size());
    for (std::size_t i = 0; i < truth.size(); ++i) truth[i] = (m >> i) & 1U;
    return Interpretation(table, std::move(truth));
  }
};

inline Space make_space(const Signature& sig, const Facts& facts, const EnumerationLimits& limits) {
  Space s;
  s.table = std::make_shared<const AtomTable>(sig);
  if (s.table->size() > kMaxAtoms) {
    throw GuardrailError(std::to_string(s.table->size()) + " ground atoms exceed the enumeration limit of " +
                         std::to_string(kMaxAtoms));
  }
  for (const auto& f : facts) {
    if (!sig.is_extensional(f.predicate)) {
      throw Error("fact " + to_string(f) + " does not belong to an extensional predicate");
    }
    s.fixed_values |= bit(s.table->index_of(f));
  }
  for (std::size_t i = 0; i < s.table->size(); ++i) {
    if (!sig.is_extensional(s.table->predicate_of(i).name)) s.free.push_back(i);
  }
  if (s.free.size() > limits.max_free_atoms) {
    throw GuardrailError(std::to_string(s.free.size()) + " free ground atoms exceed the limit of " +
                         std::to_string(limits.max_free_atoms) + " (raise it explicitly to enumerate anyway)");
  }
  return s;
}

inline ModelSet finish(const Space& s, const std::vector<Mask>& found) {
  ModelSet out{s.table, {}, {}};
  for (Mask m : found) out.models.push_back(s.interpretation(m));
  out.normalize();
  return out;
}

inline void require_ground(const Formula& f) {
  if (!free_variables(f).empty() || contains(f, Op::Forall) || contains(f, Op::Exists)) {
    throw GroundingError("formula " + to_string(f) + " is not ground; ground it first");
  }
}

}  // namespace detail

// Classical truth of a ground, quantifier-free formula.
inline bool eval(const Formula& f, const Interpretation& i) {
  switch (f.op()) {
    case Op::Top: return true;
    case Op::Bottom: return false;
    case Op::Atom: {
      if (!free_variables(f).empty()) throw GroundingError("formula " + to_string(f) + " is not ground");
      GroundAtom g = to_ground_atom(f);
      auto idx = i.table().find(g);
      if (!idx) throw Error("atom " + to_string(g) + " is not in the interpretation domain");
      return i.value(*idx);
    }
    case Op::Equal:
      if (f.args()[0].is_variable() || f.args()[1].is_variable()) {
        throw GroundingError("equality " + to_string(f) + " is not ground");
      }
      return f.args()[0].name == f.args()[1].name;
    case Op::Not: return !eval(f.operand(), i);
    case Op::And: return eval(f.lhs(), i) && eval(f.rhs(), i);
    case Op::Or: return eval(f.lhs(), i) || eval(f.rhs(), i);
    case Op::Implies: return !eval(f.lhs(), i) || eval(f.rhs(), i);
    case Op::Iff: return eval(f.lhs(), i) == eval(f.rhs(), i);
    default: throw GroundingError("formula " + to_string(f) + " still contains a quantifier");
  }
}

inline ModelSet classical_models(const Formula& f, const Signature& sig, const Facts& facts = {},
                                 const EnumerationLimits& limits = {}) {
  detail::require_ground(f);
  auto space = detail::make_space(sig, facts, limits);
  auto c = detail::compile(f, *space.table);
  std::vector<detail::Mask> found;
  for (std::uint64_t n = 0; n < space.count(); ++n) {
    detail::Mask m = space.candidate(n);
    if (detail::evaluate(c, m, m)) found.push_back(m);
  }
  return detail::finish(space, found);
}

// ---------------------------------------------------------------------------
// Causal models

namespace detail {

// Head with explainable atoms marked as shadows (they read the candidate
// explanation instead of the interpretation).
inline Formula mark_explainable(const Formula& f, const Signature& sig) {
  return map_atoms(f, [&](const Formula& a) {
    if (!sig.is_explainable(a.predicate())) return a;
    return Formula::atom(shadow_name(a.predicate()), std::vector<Term>(a.args().begin(), a.args().end()));
  });
}

}  // namespace detail

// Conjunction over the rules of G -> F*, with G read in `i` and F* reading
// explainable atoms from `heads`.
inline bool theory_dagger(const CausalTheory& t, const std::map<GroundAtom, bool>& heads, const Interpretation& i) {
  AtomTable table(t.signature);
  detail::Mask world = 0;
  detail::Mask shadow = 0;
  for (std::size_t k = 0; k < table.size(); ++k) {
    if (i.value(table.atom(k))) world |= detail::bit(k);
    if (!t.signature.is_explainable(table.predicate_of(k).name)) continue;
    auto it = heads.find(table.atom(k));
    if (it == heads.end()) throw Error("no value given for explainable atom " + to_string(table.atom(k)));
    if (it->second) shadow |= detail::bit(k);
  }
  for (const auto& r : t.rules) {
    detail::require_ground(r.head);
    detail::require_ground(r.body);
    auto body = detail::compile(r.body, table);
    auto head = detail::compile(detail::mark_explainable(r.head, t.signature), table);
    if (detail::evaluate(body, world, world) && !detail::evaluate(head, world, shadow)) return false;
  }
  return true;
}

// I is a model iff, among all assignments v to the explainable atoms, the
// rules whose bodies hold in I are satisfied by exactly one: v = I.
inline ModelSet causal_models(const CausalTheory& t, const Facts& facts = {}, const EnumerationLimits& limits = {}) {
  auto space = detail::make_space(t.signature, facts, limits);
  const auto& table = *space.table;
  std::vector<detail::Compiled> bodies;
  std::vector<detail::Compiled> heads;
  for (const auto& r : t.rules) {
    detail::require_ground(r.head);
    detail::require_ground(r.body);
    bodies.push_back(detail::compile(r.body, table));
    heads.push_back(detail::compile(detail::mark_explainable(r.head, t.signature), table));
  }
  const detail::Mask explainable = space.mask_of(t.signature.explainable());
  std::vector<detail::Mask> found;
  std::vector<const detail::Compiled*> active;
  for (std::uint64_t n = 0; n < space.count(); ++n) {
    const detail::Mask world = space.candidate(n);
    active.clear();
    for (std::size_t r = 0; r < bodies.size(); ++r) {
      if (detail::evaluate(bodies[r], world, world)) active.push_back(&heads[r]);
    }
    auto explains = [&](detail::Mask v) {
      for (const auto* h : active) {
        if (!detail::evaluate(*h, world, v)) return false;
      }
      return true;
    };
    const detail::Mask own = world & explainable;
    if (!explains(own)) continue;
    bool unique = true;
    for (detail::Mask v = explainable;; v = (v - 1) & explainable) {
      if (v != own && explains(v)) {
        unique = false;
        break;
      }
      if (v == 0) break;
    }
    if (unique) found.push_back(world);
  }
  return detail::finish(space, found);
}

// ---------------------------------------------------------------------------
// Stable models

// Renames every intensional atom occurrence that is not inside a negation to
// its shadow predicate.
inline Formula f_diamond(const Formula& f, const std::vector<std::string>& intensional) {
  std::function<Formula(const Formula&, bool)> walk = [&](const Formula& g, bool negated) -> Formula {
    switch (g.op()) {
      case Op::Atom:
        if (negated || std::find(intensional.begin(), intensional.end(), g.predicate()) == intensional.end()) {
          return g;
        }
        return Formula::atom(shadow_name(g.predicate()), std::vector<Term>(g.args().begin(), g.args().end()));
      case Op::Top:
      case Op::Bottom:
      case Op::Equal:
        return g;
      case Op::Not:
        return Formula::negate(walk(g.operand(), true));
      case Op::Forall:
      case Op::Exists:
        return rebuild(g, walk(g.operand(), negated));
      default:
        return rebuild(g, walk(g.lhs(), negated), walk(g.rhs(), negated));
    }
  };
  return walk(f, false);
}

namespace detail {

inline void validate_rule_shape_nonground(const ProgramRule& r) {
  if (contains(r.body, Op::Implies) || contains(r.head, Op::Implies) || contains(r.body, Op::Iff) ||
      contains(r.head, Op::Iff)) {
    throw Error("malformed program rule " + to_string(r) + ": nested implication");
  }
}

inline void validate_rule_shape(const ProgramRule& r) {
  validate_rule_shape_nonground(r);
  require_ground(r.body);
  require_ground(r.head);
}

inline std::vector<std::string> checked_intensional(const Program& p) {
  for (const auto& q : p.intensional) {
    if (!p.signature.find_predicate(q)) throw Error("intensional predicate '" + q + "' is not declared");
    if (p.signature.is_extensional(q)) throw Error("predicate '" + q + "' cannot be both intensional and extensional");
  }
  return p.intensional;
}

// Models of the program such that no strictly smaller assignment to the
// intensional atoms satisfies the rules with `shadowed` substituted.
inline ModelSet minimal_in(const Program& p, const Facts& facts, const EnumerationLimits& limits, bool negation_as_failure) {
  auto intensional = checked_intensional(p);
  auto space = make_space(p.signature, facts, limits);
  std::vector<Compiled> rules;
  for (const auto& r : p.rules) {
    validate_rule_shape(r);
    Formula f = Formula::implies(r.body, r.head);
    Formula shadowed = negation_as_failure
                           ? f_diamond(f, intensional)
                           : map_atoms(f, [&](const Formula& a) {
                               if (std::find(intensional.begin(), intensional.end(), a.predicate()) ==
                                   intensional.end()) {
                                 return a;
                               }
                               return Formula::atom(shadow_name(a.predicate()),
                                                    std::vector<Term>(a.args().begin(), a.args().end()));
                             });
    rules.push_back(compile(shadowed, *space.table));
  }
  const Mask intensional_mask = space.mask_of(intensional);
  std::vector<Mask> found;
  for (std::uint64_t n = 0; n < space.count(); ++n) {
    const Mask world = space.candidate(n);
    if (!all_true(rules, world, world)) continue;
    const Mask top = world & intensional_mask;
    bool minimal = true;
    if (top != 0) {
      // Proper subsets of the true intensional atoms, largest first.
      for (Mask u = (top - 1) & top;; u = (u - 1) & top) {
        if (all_true(rules, world, u)) {
          minimal = false;
          break;
        }
        if (u == 0) break;
      }
    }
    if (minimal) found.push_back(world);
  }
  return finish(space, found);
}

}  // namespace detail

// Stable models relative to p.intensional; `p` must be ground.
inline ModelSet stable_models(const Program& p, const Facts& facts = {}, const EnumerationLimits& limits = {}) {
  return detail::minimal_in(p, facts, limits, true);
}

// Models minimal in the intensional atoms, other atoms held fixed.
inline ModelSet minimal_models(const Program& p, const Facts& facts = {}, const EnumerationLimits& limits = {}) {
  return detail::minimal_in(p, facts, limits, false);
}

// ---------------------------------------------------------------------------
// Literal completion of ground definite theories

inline bool is_definite(const CausalRule& r, const Signature& sig) {
  if (r.head.is(Op::Bottom)) return true;
  return r.head.is_literal() && is_explainable_literal(r.head, sig);
}

// For each explainable ground atom A:
//   A <-> \/{G : A <= G}     ~A <-> \/{G : ~A <= G}
// and ~G for each constraint false <= G.
inline Formula literal_completion(const CausalTheory& t) {
  AtomTable table(t.signature);
  std::map<GroundAtom, std::vector<Formula>> positive;
  std::map<GroundAtom, std::vector<Formula>> negative;
  std::vector<Formula> parts;
  for (const auto& r : t.rules) {
    if (!is_definite(r, t.signature)) {
      throw Error("literal completion needs a definite theory; rule '" + to_string(r) + "' is not definite");
    }
    detail::require_ground(r.head);
    detail::require_ground(r.body);
    if (r.head.is(Op::Bottom)) {
      parts.push_back(Formula::negate(r.body));
      continue;
    }
    auto& bucket = is_positive(r.head) ? positive : negative;
    bucket[to_ground_atom(literal_atom(r.head))].push_back(r.body);
  }
  std::vector<Formula> out;
  for (std::size_t k = 0; k < table.size(); ++k) {
    if (!t.signature.is_explainable(table.predicate_of(k).name)) continue;
    const GroundAtom& g = table.atom(k);
    Formula a = to_formula(g);
    out.push_back(Formula::iff(a, disjoin(positive[g])));
    out.push_back(Formula::iff(Formula::negate(a), disjoin(negative[g])));
  }
  out.insert(out.end(), parts.begin(), parts.end());
  return conjoin(out);
}

inline ModelSet completion_models(const CausalTheory& t, const Facts& facts = {}, const EnumerationLimits& limits = {}) {
  return classical_models(literal_completion(t), t.signature, facts, limits);
}

// ---------------------------------------------------------------------------
// Soundness: stable models of the translation vs causal models

struct SoundnessOptions {
  TranslateOptions translate;
  bool simplify = false;
  EnumerationLimits limits;
  // Test hook applied to the translated program before grounding.
  std::function<void(Program&)> tamper;
};

struct SoundnessReport {
  bool pass = false;
  ModelSet causal;
  ModelSet stable;
  std::vector<std::string> problems;
};

inline SoundnessReport check_soundness(const CausalTheory& t, const Facts& facts = {},
                                       const SoundnessOptions& options = {}) {
  SoundnessReport report;
  CausalTheory normalized = normalize(t);
  report.causal = causal_models(ground_theory(normalized), facts, options.limits);
  Program program = translate(normalized, options.translate);
  if (options.simplify) program = simplify(program);
  if (options.tamper) options.tamper(program);
  report.stable = stable_models(ground_program(program), facts, options.limits);

  const AtomTable& table = *report.stable.atoms;
  HatMap hats(t.signature);
  for (const auto& m : report.stable.models) {
    for (std::size_t k = 0; k < table.size(); ++k) {
      const Predicate& pred = table.predicate_of(k);
      if (pred.hat_of.empty()) continue;
      GroundAtom base{pred.hat_of, table.atom(k).args};
      if (m.value(k) == m.value(base)) {
        report.problems.push_back("stable model {" + to_string(m) + "} violates " + table.display(k) +
                                  " = ~" + to_string(base));
      }
    }
  }
  ModelSet projected = report.stable.project(report.causal.atoms);
  for (const auto& m : report.causal.models) {
    if (std::find(projected.models.begin(), projected.models.end(), m) == projected.models.end()) {
      report.problems.push_back("causal model {" + to_string(m) + "} has no stable counterpart");
    }
  }
  for (const auto& m : projected.models) {
    if (std::find(report.causal.models.begin(), report.causal.models.end(), m) == report.causal.models.end()) {
      report.problems.push_back("stable model {" + to_string(m) + "} (hats removed) is not a causal model");
    }
  }
  if (projected.size() != report.stable.size()) {
    report.problems.push_back("distinct stable models collapse after removing hats");
  }
  report.pass = report.problems.empty();
  return report;
}

inline std::string to_string(const SoundnessReport& r) {
  std::string out = r.pass ? "PASS" : "FAIL";
  out += " (" + std::to_string(r.causal.size()) + " causal, " + std::to_string(r.stable.size()) + " stable)\n";
  for (const auto& p : r.problems) out += "  " + p + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Extensional predicates simulated by facts

struct SimulationReport {
  bool condition_holds = false;
  bool pass = false;
  ModelSet with_extensional;
  ModelSet with_facts;
  std::vector<std::string> problems;
};

namespace detail {

// Extensional occurrences must sit under a negation or in a rule body.
inline void check_extensional_occurrences(const Formula& f, bool negated, const Signature& sig,
                                          std::vector<std::string>& problems, const ProgramRule& rule) {
  switch (f.op()) {
    case Op::Atom:
      if (!negated && sig.is_extensional(f.predicate())) {
        problems.push_back("condition violated: " + to_string(f) + " occurs positively in the head of " +
                           to_string(rule));
      }
      return;
    case Op::Top:
    case Op::Bottom:
    case Op::Equal:
      return;
    case Op::Not:
      check_extensional_occurrences(f.operand(), true, sig, problems, rule);
      return;
    case Op::Forall:
    case Op::Exists:
      check_extensional_occurrences(f.operand(), negated, sig, problems, rule);
      return;
    default:
      check_extensional_occurrences(f.lhs(), negated, sig, problems, rule);
      check_extensional_occurrences(f.rhs(), negated, sig, problems, rule);
      return;
  }
}

}  // namespace detail

// Stable models with extensional predicates fixed by `facts`, against the
// stable models of program & facts with every predicate intensional.
inline SimulationReport check_extensional_simulation(const Program& p, const Facts& facts,
                                                     const EnumerationLimits& limits = {}) {
  SimulationReport report;
  for (const auto& r : p.rules) {
    detail::check_extensional_occurrences(r.head, false, p.signature, report.problems, r);
  }
  report.condition_holds = report.problems.empty();
  if (!report.condition_holds) return report;

  Program ground = ground_program(p);
  report.with_extensional = stable_models(ground, facts, limits);

  Program all_intensional = ground;
  all_intensional.signature.clear_extensional();
  all_intensional.intensional.clear();
  for (const auto& pred : p.signature.predicates()) all_intensional.intensional.push_back(pred.name);
  for (const auto& f : facts) all_intensional.rules.push_back(ProgramRule{{}, Formula::top(), to_formula(f), {}, false});
  report.with_facts = stable_models(all_intensional, {}, limits);

  if (!(report.with_extensional == report.with_facts)) {
    report.problems.push_back("stable model sets differ: " + std::to_string(report.with_extensional.size()) +
                              " with extensional predicates, " + std::to_string(report.with_facts.size()) +
                              " with facts");
  }
  report.pass = report.problems.empty();
  return report;
}

}  // namespace causal
