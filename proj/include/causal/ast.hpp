#pragma once

// Shared kernel: terms, formulas, signatures, causal theories and logic programs.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causal/error.hpp"

namespace causal {

struct Term {
  enum class Kind : std::uint8_t { Variable, Constant };

  Kind kind = Kind::Constant;
  std::string name;

  static Term variable(std::string name) { return {Kind::Variable, std::move(name)}; }
  static Term constant(std::string name) { return {Kind::Constant, std::move(name)}; }

  bool is_variable() const { return kind == Kind::Variable; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

enum class Op : std::uint8_t {
  Top,
  Bottom,
  Atom,
  Equal,
  Not,
  And,
  Or,
  Implies,
  Iff,  // surface syntax for synonymity-rule heads only
  Forall,
  Exists,
};

// Immutable formula tree with structural equality. Copies share nodes.
class Formula {
 public:
  Formula();  // Top

  static Formula top();
  static Formula bottom();
  static Formula atom(std::string predicate, std::vector<Term> args = {});
  static Formula equal(Term lhs, Term rhs);
  static Formula negate(Formula f);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula iff(Formula lhs, Formula rhs);
  static Formula forall(std::string variable, Formula body);
  static Formula exists(std::string variable, Formula body);

  Op op() const;
  bool is(Op op) const { return this->op() == op; }

  // Atom only.
  const std::string& predicate() const;
  // Atom arguments, or the two sides of an Equal.
  std::span<const Term> args() const;
  // Bound variable of Forall/Exists.
  const std::string& variable() const;
  // Operand of Not, body of a quantifier.
  const Formula& operand() const;
  const Formula& lhs() const;
  const Formula& rhs() const;

  bool is_atom() const { return is(Op::Atom); }
  // Atom, Equal, or the negation of either.
  bool is_literal() const;
  bool is_quantifier() const { return is(Op::Forall) || is(Op::Exists); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static const std::shared_ptr<const Node>& shared_top();

  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Op op = Op::Top;
  std::string name;  // predicate or bound variable
  std::vector<Term> args;
  std::optional<Formula> lhs;
  std::optional<Formula> rhs;
};

inline const std::shared_ptr<const Formula::Node>& Formula::shared_top() {
  static const auto node = std::make_shared<const Node>();
  return node;
}

inline Formula::Formula() : node_(shared_top()) {}

inline Formula Formula::top() { return Formula(); }

inline Formula Formula::bottom() {
  static const Formula b(std::make_shared<const Node>(Node{Op::Bottom, {}, {}, {}, {}}));
  return b;
}

inline Formula Formula::atom(std::string predicate, std::vector<Term> args) {
  return Formula(std::make_shared<const Node>(Node{Op::Atom, std::move(predicate), std::move(args), {}, {}}));
}

inline Formula Formula::equal(Term lhs, Term rhs) {
  return Formula(std::make_shared<const Node>(Node{Op::Equal, {}, {std::move(lhs), std::move(rhs)}, {}, {}}));
}

inline Formula Formula::negate(Formula f) {
  return Formula(std::make_shared<const Node>(Node{Op::Not, {}, {}, std::move(f), {}}));
}

inline Formula Formula::conj(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Op::And, {}, {}, std::move(lhs), std::move(rhs)}));
}

inline Formula Formula::disj(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Op::Or, {}, {}, std::move(lhs), std::move(rhs)}));
}

inline Formula Formula::implies(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Op::Implies, {}, {}, std::move(lhs), std::move(rhs)}));
}

inline Formula Formula::iff(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Op::Iff, {}, {}, std::move(lhs), std::move(rhs)}));
}

inline Formula Formula::forall(std::string variable, Formula body) {
  return Formula(std::make_shared<const Node>(Node{Op::Forall, std::move(variable), {}, std::move(body), {}}));
}

inline Formula Formula::exists(std::string variable, Formula body) {
  return Formula(std::make_shared<const Node>(Node{Op::Exists, std::move(variable), {}, std::move(body), {}}));
}

inline Op Formula::op() const { return node_->op; }
inline const std::string& Formula::predicate() const { return node_->name; }
inline std::span<const Term> Formula::args() const { return node_->args; }
inline const std::string& Formula::variable() const { return node_->name; }
inline const Formula& Formula::operand() const { return *node_->lhs; }
inline const Formula& Formula::lhs() const { return *node_->lhs; }
inline const Formula& Formula::rhs() const { return *node_->rhs; }

inline bool Formula::is_literal() const {
  if (is(Op::Atom) || is(Op::Equal)) return true;
  return is(Op::Not) && (operand().is(Op::Atom) || operand().is(Op::Equal));
}

inline bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.op == y.op && x.name == y.name && x.args == y.args && x.lhs == y.lhs && x.rhs == y.rhs;
}

// Left-nested conjunction; Top when empty.
inline Formula conjoin(std::span<const Formula> parts) {
  if (parts.empty()) return Formula::top();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = Formula::conj(acc, parts[i]);
  return acc;
}

// Left-nested disjunction; Bottom when empty.
inline Formula disjoin(std::span<const Formula> parts) {
  if (parts.empty()) return Formula::bottom();
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = Formula::disj(acc, parts[i]);
  return acc;
}

// Leaves of a maximal And (or Or) subtree, left to right.
inline void flatten(const Formula& f, Op op, std::vector<Formula>& out) {
  if (f.is(op)) {
    flatten(f.lhs(), op, out);
    flatten(f.rhs(), op, out);
  } else {
    out.push_back(f);
  }
}

namespace detail {

inline void add_unique(std::vector<std::string>& out, const std::string& name) {
  if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
}

inline void collect_free(const Formula& f, std::vector<std::string>& bound, std::vector<std::string>& out) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
      return;
    case Op::Atom:
    case Op::Equal:
      for (const Term& t : f.args()) {
        if (t.is_variable() && std::find(bound.begin(), bound.end(), t.name) == bound.end()) {
          add_unique(out, t.name);
        }
      }
      return;
    case Op::Not:
      collect_free(f.operand(), bound, out);
      return;
    case Op::Forall:
    case Op::Exists:
      bound.push_back(f.variable());
      collect_free(f.operand(), bound, out);
      bound.pop_back();
      return;
    default:
      collect_free(f.lhs(), bound, out);
      collect_free(f.rhs(), bound, out);
      return;
  }
}

}  // namespace detail

// Variables with a free occurrence, in first-occurrence order.
inline std::vector<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound;
  std::vector<std::string> out;
  detail::collect_free(f, bound, out);
  return out;
}

inline std::vector<std::string> free_variables(std::span<const Formula> fs) {
  std::vector<std::string> bound;
  std::vector<std::string> out;
  for (const Formula& f : fs) detail::collect_free(f, bound, out);
  return out;
}

// Replaces free occurrences of `variable` by `replacement`. Only constant
// replacements are accepted, so no capture can occur.
inline Formula substitute_variable(const Formula& f, const std::string& variable, const Term& replacement) {
  if (replacement.is_variable()) throw Error("substitute_variable: replacement must be an object constant");
  auto map_term = [&](const Term& t) { return (t.is_variable() && t.name == variable) ? replacement : t; };
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
      return f;
    case Op::Atom: {
      std::vector<Term> args;
      args.reserve(f.args().size());
      for (const Term& t : f.args()) args.push_back(map_term(t));
      return Formula::atom(f.predicate(), std::move(args));
    }
    case Op::Equal:
      return Formula::equal(map_term(f.args()[0]), map_term(f.args()[1]));
    case Op::Not:
      return Formula::negate(substitute_variable(f.operand(), variable, replacement));
    case Op::Forall:
    case Op::Exists: {
      if (f.variable() == variable) return f;
      Formula body = substitute_variable(f.operand(), variable, replacement);
      return f.is(Op::Forall) ? Formula::forall(f.variable(), body) : Formula::exists(f.variable(), body);
    }
    case Op::And:
      return Formula::conj(substitute_variable(f.lhs(), variable, replacement),
                           substitute_variable(f.rhs(), variable, replacement));
    case Op::Or:
      return Formula::disj(substitute_variable(f.lhs(), variable, replacement),
                           substitute_variable(f.rhs(), variable, replacement));
    case Op::Implies:
      return Formula::implies(substitute_variable(f.lhs(), variable, replacement),
                              substitute_variable(f.rhs(), variable, replacement));
    case Op::Iff:
      return Formula::iff(substitute_variable(f.lhs(), variable, replacement),
                          substitute_variable(f.rhs(), variable, replacement));
  }
  return f;
}

// Rebuilds a binary/unary node with new children, keeping the operator.
inline Formula rebuild(const Formula& f, Formula lhs, Formula rhs = {}) {
  switch (f.op()) {
    case Op::Not: return Formula::negate(std::move(lhs));
    case Op::And: return Formula::conj(std::move(lhs), std::move(rhs));
    case Op::Or: return Formula::disj(std::move(lhs), std::move(rhs));
    case Op::Implies: return Formula::implies(std::move(lhs), std::move(rhs));
    case Op::Iff: return Formula::iff(std::move(lhs), std::move(rhs));
    case Op::Forall: return Formula::forall(f.variable(), std::move(lhs));
    case Op::Exists: return Formula::exists(f.variable(), std::move(lhs));
    default: return f;
  }
}

// Renames atoms by predicate; everything else is left untouched.
template <typename Fn>
Formula map_atoms(const Formula& f, Fn&& fn) {
  switch (f.op()) {
    case Op::Atom: return fn(f);
    case Op::Top:
    case Op::Bottom:
    case Op::Equal: return f;
    case Op::Not:
    case Op::Forall:
    case Op::Exists: return rebuild(f, map_atoms(f.operand(), fn));
    default: return rebuild(f, map_atoms(f.lhs(), fn), map_atoms(f.rhs(), fn));
  }
}

inline bool contains(const Formula& f, Op op) {
  if (f.is(op)) return true;
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
    case Op::Atom:
    case Op::Equal: return false;
    case Op::Not:
    case Op::Forall:
    case Op::Exists: return contains(f.operand(), op);
    default: return contains(f.lhs(), op) || contains(f.rhs(), op);
  }
}

template <typename Fn>
void for_each_atom(const Formula& f, Fn&& fn) {
  switch (f.op()) {
    case Op::Atom: fn(f); return;
    case Op::Top:
    case Op::Bottom:
    case Op::Equal: return;
    case Op::Not:
    case Op::Forall:
    case Op::Exists: for_each_atom(f.operand(), fn); return;
    default:
      for_each_atom(f.lhs(), fn);
      for_each_atom(f.rhs(), fn);
      return;
  }
}

inline bool mentions_any(const Formula& f, const std::vector<std::string>& predicates) {
  bool found = false;
  for_each_atom(f, [&](const Formula& a) {
    if (std::find(predicates.begin(), predicates.end(), a.predicate()) != predicates.end()) found = true;
  });
  return found;
}

// ---------------------------------------------------------------------------
// Pretty printing. The output re-parses to a structurally equal formula.

namespace detail {

inline std::string term_list(std::span<const Term> args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i].name;
  }
  return out;
}

inline int precedence(const Formula& f) {
  switch (f.op()) {
    case Op::Iff: return 0;
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Not: return 4;
    case Op::Forall:
    case Op::Exists: return -1;
    default: return 5;
  }
}

inline void print(const Formula& f, std::string& out);

inline void print_operand(const Formula& f, int context, std::string& out) {
  int p = precedence(f);
  bool parens = p < context || (p < 0 && context > 0);
  if (parens) out += '(';
  print(f, out);
  if (parens) out += ')';
}

inline void print(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Op::Top: out += "true"; return;
    case Op::Bottom: out += "false"; return;
    case Op::Atom:
      out += f.predicate();
      if (!f.args().empty()) {
        out += '(';
        out += term_list(f.args());
        out += ')';
      }
      return;
    case Op::Equal:
      out += f.args()[0].name;
      out += " = ";
      out += f.args()[1].name;
      return;
    case Op::Not:
      out += '~';
      print_operand(f.operand(), 4, out);
      return;
    case Op::And:
      print_operand(f.lhs(), 3, out);
      out += " & ";
      print_operand(f.rhs(), 4, out);
      return;
    case Op::Or:
      print_operand(f.lhs(), 2, out);
      out += " | ";
      print_operand(f.rhs(), 3, out);
      return;
    case Op::Implies:
      print_operand(f.lhs(), 2, out);
      out += " -> ";
      print_operand(f.rhs(), 1, out);
      return;
    case Op::Iff:
      print_operand(f.lhs(), 2, out);
      out += " <-> ";
      print_operand(f.rhs(), 2, out);
      return;
    case Op::Forall:
    case Op::Exists: {
      out += f.is(Op::Forall) ? "forall " : "exists ";
      const Formula* body = &f;
      std::string vars;
      // Collapse a run of the same quantifier into one binder list.
      Op q = f.op();
      while (body->is(q)) {
        if (!vars.empty()) vars += ", ";
        vars += body->variable();
        body = &body->operand();
      }
      out += vars;
      out += ": ";
      print_operand(*body, 0, out);
      return;
    }
  }
}

}  // namespace detail

inline std::string to_string(const Formula& f) {
  std::string out;
  detail::print(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Signatures

struct Predicate {
  std::string name;
  std::size_t arity = 0;
  // Non-empty when this predicate is the fresh "hat" partner of another.
  std::string hat_of;
};

class Signature {
 public:
  const std::vector<std::string>& object_constants() const { return constants_; }
  const std::vector<std::string>& universe() const { return universe_; }
  const std::vector<Predicate>& predicates() const { return predicates_; }
  const std::vector<std::string>& explainable() const { return explainable_; }
  const std::vector<std::string>& extensional() const { return extensional_; }

  bool has_constant(std::string_view name) const {
    return std::find(constants_.begin(), constants_.end(), name) != constants_.end();
  }

  void declare_constant(const std::string& name) {
    if (!has_constant(name)) constants_.push_back(name);
  }

  void add_to_universe(const std::string& name) {
    declare_constant(name);
    if (std::find(universe_.begin(), universe_.end(), name) == universe_.end()) universe_.push_back(name);
  }

  const Predicate* find_predicate(std::string_view name) const {
    for (const auto& p : predicates_) {
      if (p.name == name) return &p;
    }
    return nullptr;
  }

  std::size_t arity(std::string_view name) const {
    const Predicate* p = find_predicate(name);
    if (!p) throw Error("undeclared predicate '" + std::string(name) + "'");
    return p->arity;
  }

  // Declares a predicate or checks the arity of an existing declaration.
  void declare_predicate(const std::string& name, std::size_t arity) {
    if (const Predicate* p = find_predicate(name)) {
      if (p->arity != arity) {
        throw Error("arity mismatch for '" + name + "': declared " + std::to_string(p->arity) + ", used with " +
                    std::to_string(arity));
      }
      return;
    }
    predicates_.push_back(Predicate{name, arity, {}});
  }

  void declare_hat(const std::string& name, const std::string& base) {
    if (find_predicate(name)) throw Error("hat predicate '" + name + "' clashes with a declared predicate");
    predicates_.push_back(Predicate{name, arity(base), base});
  }

  bool is_explainable(std::string_view name) const { return contains_name(explainable_, name); }
  bool is_extensional(std::string_view name) const { return contains_name(extensional_, name); }

  void mark_explainable(const std::string& name) {
    if (!find_predicate(name)) throw Error("undeclared predicate '" + name + "'");
    if (is_extensional(name)) throw Error("predicate '" + name + "' cannot be both explainable and extensional");
    if (!is_explainable(name)) explainable_.push_back(name);
  }

  void mark_extensional(const std::string& name) {
    if (!find_predicate(name)) throw Error("undeclared predicate '" + name + "'");
    if (is_explainable(name)) throw Error("predicate '" + name + "' cannot be both explainable and extensional");
    if (!is_extensional(name)) extensional_.push_back(name);
  }

  void clear_extensional() { extensional_.clear(); }

  // Hat predicate name for `base`, or empty.
  std::string hat_for(std::string_view base) const {
    for (const auto& p : predicates_) {
      if (p.hat_of == base) return p.name;
    }
    return {};
  }

  // Name shown in models and solver text: hats render as strong negation.
  std::string display_name(std::string_view predicate) const {
    const Predicate* p = find_predicate(predicate);
    if (p && !p->hat_of.empty()) return "-" + p->hat_of;
    return std::string(predicate);
  }

  void validate() const {
    if (universe_.empty()) throw Error("the universe is empty");
    for (const auto& e : explainable_) {
      if (is_extensional(e)) throw Error("predicate '" + e + "' cannot be both explainable and extensional");
    }
  }

  // Checks atom arities against the declarations.
  void check(const Formula& f) const {
    for_each_atom(f, [&](const Formula& a) {
      std::size_t n = arity(a.predicate());
      if (n != a.args().size()) {
        throw Error("arity mismatch for '" + a.predicate() + "': declared " + std::to_string(n) + ", used with " +
                    std::to_string(a.args().size()));
      }
    });
  }

 private:
  static bool contains_name(const std::vector<std::string>& v, std::string_view name) {
    return std::find(v.begin(), v.end(), name) != v.end();
  }

  std::vector<std::string> constants_;
  std::vector<std::string> universe_;
  std::vector<Predicate> predicates_;
  std::vector<std::string> explainable_;
  std::vector<std::string> extensional_;
};

// Renames predicates per `mapping`; mapped predicates must agree in arity.
inline Formula substitute_predicates(const Formula& f, const std::map<std::string, std::string>& mapping,
                                     const Signature& sig) {
  for (const auto& [from, to] : mapping) {
    if (sig.arity(from) != sig.arity(to)) {
      throw Error("cannot substitute '" + to + "' for '" + from + "': arity mismatch");
    }
  }
  return map_atoms(f, [&](const Formula& a) {
    auto it = mapping.find(a.predicate());
    if (it == mapping.end()) return a;
    return Formula::atom(it->second, std::vector<Term>(a.args().begin(), a.args().end()));
  });
}

// ---------------------------------------------------------------------------
// Causal theories

enum class RuleKind : std::uint8_t { Unclassified, C, L, S, D };

inline std::string_view to_string(RuleKind k) {
  switch (k) {
    case RuleKind::C: return "C";
    case RuleKind::L: return "L";
    case RuleKind::S: return "S";
    case RuleKind::D: return "D";
    default: return "unclassified";
  }
}

// head <= body
struct CausalRule {
  Formula head;
  Formula body;
  RuleKind kind = RuleKind::Unclassified;
  SourceSpan span{};

  friend bool operator==(const CausalRule& a, const CausalRule& b) {
    return a.head == b.head && a.body == b.body && a.kind == b.kind;
  }
};

inline std::vector<std::string> free_variables(const CausalRule& r) {
  const Formula parts[] = {r.head, r.body};
  return free_variables(parts);
}

inline std::string to_string(const CausalRule& r) {
  return to_string(r.head) + " <= " + to_string(r.body);
}

struct CausalTheory {
  Signature signature;
  std::vector<CausalRule> rules;
};

// ---------------------------------------------------------------------------
// Logic programs

// Universal closure of body -> head, neither side containing ->.
struct ProgramRule {
  std::vector<std::string> universals;
  Formula body;
  Formula head;
  // Layout key for emitters: rules sharing a group are printed together.
  std::string group;
  // Set on the two completeness constraints generated per explainable predicate.
  bool completeness = false;

  friend bool operator==(const ProgramRule& a, const ProgramRule& b) {
    return a.universals == b.universals && a.body == b.body && a.head == b.head;
  }
};

inline Formula to_formula(const ProgramRule& r) {
  Formula f = r.body.is(Op::Top) ? r.head : Formula::implies(r.body, r.head);
  for (auto it = r.universals.rbegin(); it != r.universals.rend(); ++it) f = Formula::forall(*it, f);
  return f;
}

inline std::string to_string(const ProgramRule& r) { return to_string(to_formula(r)); }

struct Program {
  Signature signature;
  std::vector<ProgramRule> rules;
  std::vector<std::string> intensional;

  bool is_intensional(std::string_view p) const {
    return std::find(intensional.begin(), intensional.end(), p) != intensional.end();
  }
};

inline std::string to_string(const Program& p) {
  std::string out;
  for (const auto& r : p.rules) {
    out += to_string(r);
    out += '\n';
  }
  return out;
}

}  // namespace causal
