#pragma once

// Answer-set-solver text for a program, and a small driver that pipes the
// text through an external solver and reads the models back.
//
// Hat predicates print as strong negation (-p). Bodies are brought into
// conjunctions of A / not A / not not A: a disjunction in a body splits
// the rule, and anything under a negation is pushed to literals classically
// (such subformulas are evaluated in the candidate model only, so this does
// not change stable models).

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "causal/ast.hpp"
#include "causal/grounder.hpp"
#include "causal/interpretation.hpp"
#include "causal/semantics.hpp"

namespace causal {

struct EmitOptions {
  // u(a;b). / #domain u(X). / pooled facts, as in old lparse input.
  bool legacy_lparse = false;
};

namespace detail {

struct BodyLiteral {
  Formula atom;
  int negations = 0;  // 0, 1 (not A) or 2 (not not A)

  bool operator==(const BodyLiteral&) const = default;
};

using Conjunction = std::vector<BodyLiteral>;

inline std::vector<Conjunction> cross(const std::vector<Conjunction>& a, const std::vector<Conjunction>& b) {
  std::vector<Conjunction> out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      Conjunction c = x;
      for (const auto& l : y) {
        if (std::find(c.begin(), c.end(), l) == c.end()) c.push_back(l);
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

inline std::vector<Conjunction> body_alternatives(const Formula& f);

// ~f (negated == true) or ~~f (negated == false) with f under at least one
// negation already; result literals carry 1 or 2 negations.
inline std::vector<Conjunction> negated_alternatives(const Formula& f, bool odd) {
  switch (f.op()) {
    case Op::Top:
      return odd ? std::vector<Conjunction>{} : std::vector<Conjunction>{{}};
    case Op::Bottom:
      return odd ? std::vector<Conjunction>{{}} : std::vector<Conjunction>{};
    case Op::Atom:
      return {{BodyLiteral{f, odd ? 1 : 2}}};
    case Op::Not:
      return negated_alternatives(f.operand(), !odd);
    case Op::And:
    case Op::Or: {
      auto a = negated_alternatives(f.lhs(), odd);
      auto b = negated_alternatives(f.rhs(), odd);
      // ~(A & B) = ~A | ~B and ~(A | B) = ~A & ~B; ~~ keeps the connective.
      if (f.is(Op::And) != odd) return cross(a, b);
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
    default:
      throw EmitError("cannot emit '" + to_string(f) + "' in a rule body");
  }
}

inline std::vector<Conjunction> body_alternatives(const Formula& f) {
  switch (f.op()) {
    case Op::Top:
      return {{}};
    case Op::Bottom:
      return {};
    case Op::Atom:
      return {{BodyLiteral{f, 0}}};
    case Op::Not:
      return negated_alternatives(f.operand(), true);
    case Op::And:
      return cross(body_alternatives(f.lhs()), body_alternatives(f.rhs()));
    case Op::Or: {
      auto a = body_alternatives(f.lhs());
      auto b = body_alternatives(f.rhs());
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
    default:
      throw EmitError("cannot emit '" + to_string(f) + "' in a rule body");
  }
}

class AspWriter {
 public:
  AspWriter(const Program& p, const EmitOptions& options) : program_(p), options_(options) {
    domain_ = "u";
    while (p.signature.find_predicate(domain_)) domain_ += '_';
  }

  std::string atom(const Formula& a) const {
    std::string out;
    const Predicate* pred = program_.signature.find_predicate(a.predicate());
    if (pred && !pred->hat_of.empty()) {
      out = "-" + pred->hat_of;
    } else {
      out = a.predicate();
    }
    if (a.args().empty()) return out;
    out += '(';
    for (std::size_t i = 0; i < a.args().size(); ++i) {
      if (i) out += ',';
      out += a.args()[i].name;
    }
    return out + ')';
  }

  std::string literal(const BodyLiteral& l) const {
    static const char* const prefix[] = {"", "not ", "not not "};
    return prefix[l.negations] + atom(l.atom);
  }

  // Body text with domain guards for `vars` (default mode only).
  std::string body(const Conjunction& c, const std::vector<std::string>& vars) const {
    std::vector<std::string> parts;
    if (!options_.legacy_lparse) {
      for (const auto& v : vars) parts.push_back(domain_ + "(" + v + ")");
    }
    for (const auto& l : c) parts.push_back(literal(l));
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) out += ", ";
      out += parts[i];
    }
    return out;
  }

  std::string rule(const std::string& head, const Conjunction& c, const std::vector<std::string>& vars) const {
    std::string b = body(c, vars);
    if (head.empty()) return ":- " + (b.empty() ? std::string("#true") : b) + ".";
    if (b.empty()) return head + ".";
    return head + " :- " + b + ".";
  }

  // Text lines for one program rule.
  void emit_rule(const ProgramRule& r, std::vector<std::string>& out) {
    if (contains(r.body, Op::Forall) || contains(r.body, Op::Exists) || contains(r.body, Op::Equal) ||
        contains(r.head, Op::Forall) || contains(r.head, Op::Exists) || contains(r.head, Op::Equal)) {
      for (const auto& g : ground_rule(r, program_.signature)) emit_rule(g, out);
      return;
    }
    for (const auto& v : r.universals) note_variable(v);
    emit_head(r.head, body_alternatives(r.body), r.universals, out);
  }

  void emit_head(const Formula& h, const std::vector<Conjunction>& bodies, const std::vector<std::string>& vars,
                 std::vector<std::string>& out) {
    // A head without intensional atoms only restricts the model: B -> H
    // becomes :- B, not H.
    if (!h.is(Op::Top) && !h.is(Op::Bottom) && !mentions_any(h, program_.intensional)) {
      emit_head(Formula::bottom(), cross(bodies, negated_alternatives(h, true)), vars, out);
      return;
    }
    switch (h.op()) {
      case Op::Top:
        return;
      case Op::Bottom:
        for (const auto& b : bodies) out.push_back(rule("", b, vars));
        return;
      case Op::Atom:
        for (const auto& b : bodies) out.push_back(rule(atom(h), b, vars));
        return;
      case Op::Not:
        // B -> ~F is the constraint :- B, F.
        emit_head(Formula::bottom(), cross(bodies, body_alternatives(h.operand())), vars, out);
        return;
      case Op::And:
        emit_head(h.lhs(), bodies, vars, out);
        emit_head(h.rhs(), bodies, vars, out);
        return;
      case Op::Or: {
        std::vector<Formula> parts;
        flatten(h, Op::Or, parts);
        std::erase_if(parts, [](const Formula& f) { return f.is(Op::Bottom); });
        if (std::any_of(parts.begin(), parts.end(), [](const Formula& f) { return f.is(Op::Top); })) return;
        // Same for the disjuncts without intensional atoms.
        std::vector<Conjunction> guarded = bodies;
        std::erase_if(parts, [&](const Formula& f) {
          if (mentions_any(f, program_.intensional)) return false;
          guarded = cross(guarded, negated_alternatives(f, true));
          return true;
        });
        if (parts.empty()) {
          emit_head(Formula::bottom(), guarded, vars, out);
          return;
        }
        if (parts.size() == 2 && parts[1].is(Op::Not) && parts[1].operand() == parts[0] && parts[0].is_atom()) {
          for (const auto& b : guarded) out.push_back(rule("{" + atom(parts[0]) + "}", b, vars));
          return;
        }
        std::string head;
        for (const auto& p : parts) {
          std::string text;
          if (p.is_atom()) {
            text = atom(p);
          } else if (p.is(Op::Not) && p.operand().is_atom()) {
            text = "not " + atom(p.operand());
          } else {
            throw EmitError("head disjunct '" + to_string(p) + "' is not a literal");
          }
          head += (head.empty() ? "" : " | ") + text;
        }
        if (parts.size() == 1) {
          emit_head(parts[0], guarded, vars, out);
          return;
        }
        for (const auto& b : guarded) out.push_back(rule(head, b, vars));
        return;
      }
      default:
        throw EmitError("cannot emit rule head '" + to_string(h) + "'");
    }
  }

  std::string write(const Facts& facts) {
    const Signature& sig = program_.signature;
    std::vector<std::vector<std::string>> blocks;

    // Rules, one block per group in order of first appearance.
    std::vector<std::string> groups;
    std::vector<std::vector<std::string>> grouped;
    for (const auto& r : program_.rules) {
      auto it = std::find(groups.begin(), groups.end(), r.group);
      if (it == groups.end()) {
        groups.push_back(r.group);
        grouped.emplace_back();
        it = groups.end() - 1;
      }
      emit_rule(r, grouped[static_cast<std::size_t>(it - groups.begin())]);
    }
    for (auto& g : grouped) {
      if (!g.empty()) blocks.push_back(std::move(g));
    }

    // Predicates neither intensional nor fixed by facts range freely.
    std::vector<std::string> choices;
    for (const auto& p : sig.predicates()) {
      if (program_.is_intensional(p.name) || sig.is_extensional(p.name)) continue;
      std::vector<Term> args;
      std::vector<std::string> vars;
      if (p.arity == 1) {
        vars.push_back("X");
      } else {
        for (std::size_t i = 1; i <= p.arity; ++i) vars.push_back("X" + std::to_string(i));
      }
      if (p.arity == 0) vars.clear();
      for (const auto& v : vars) {
        args.push_back(Term::variable(v));
        note_variable(v);
      }
      choices.push_back(rule("{" + atom(Formula::atom(p.name, args)) + "}", {}, vars));
    }
    if (!choices.empty()) blocks.push_back(std::move(choices));

    std::vector<std::string> fact_lines = fact_block(facts);
    if (!fact_lines.empty()) blocks.push_back(std::move(fact_lines));

    // Domain first.
    std::vector<std::string> domain;
    if (options_.legacy_lparse) {
      std::string pool;
      for (const auto& c : sig.universe()) pool += (pool.empty() ? "" : ";") + c;
      domain.push_back(domain_ + "(" + pool + ").");
      for (const auto& v : variables_) domain.push_back("#domain " + domain_ + "(" + v + ").");
    } else {
      for (const auto& c : sig.universe()) domain.push_back(domain_ + "(" + c + ").");
    }
    blocks.insert(blocks.begin(), std::move(domain));

    std::string out;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (i) out += '\n';
      for (const auto& line : blocks[i]) out += line + '\n';
    }
    return out;
  }

 private:
  void note_variable(const std::string& v) {
    if (std::find(variables_.begin(), variables_.end(), v) == variables_.end()) variables_.push_back(v);
  }

  std::vector<std::string> fact_block(const Facts& facts) const {
    std::vector<std::string> lines;
    if (!options_.legacy_lparse) {
      for (const auto& f : facts) lines.push_back(atom(to_formula(f)) + ".");
      return lines;
    }
    // Unary facts pooled per predicate: p(a;b).
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::string>> pooled;
    for (const auto& f : facts) {
      if (f.args.size() != 1) {
        order.push_back(atom(to_formula(f)) + ".");
        continue;
      }
      auto& bucket = pooled[f.predicate];
      if (bucket.empty()) order.push_back("\x01" + f.predicate);
      bucket.push_back(f.args[0]);
    }
    for (const auto& o : order) {
      if (o.empty() || o[0] != '\x01') {
        lines.push_back(o);
        continue;
      }
      std::string name = o.substr(1);
      std::string pool;
      for (const auto& c : pooled[name]) pool += (pool.empty() ? "" : ";") + c;
      lines.push_back(name + "(" + pool + ").");
    }
    return lines;
  }

  const Program& program_;
  EmitOptions options_;
  std::string domain_;
  std::vector<std::string> variables_;
};

}  // namespace detail

inline std::string emit_asp(const Program& p, const Facts& facts = {}, const EmitOptions& options = {}) {
  for (const auto& r : p.rules) detail::validate_rule_shape_nonground(r);
  return detail::AspWriter(p, options).write(facts);
}

// ---------------------------------------------------------------------------
// External solver

namespace detail {

class TempFile {
 public:
  TempFile() {
    char name[] = "/tmp/causal-XXXXXX";
    int fd = ::mkstemp(name);
    if (fd < 0) throw SolverError("cannot create a temporary file");
    ::close(fd);
    path_ = name;
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  ~TempFile() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// p(a,b) / -p(a,b) / p
inline GroundAtom parse_solver_atom(const std::string& text, const Signature& sig, bool& known) {
  std::string body = text;
  bool negative = !body.empty() && body[0] == '-';
  if (negative) body.erase(0, 1);
  GroundAtom g;
  auto open = body.find('(');
  g.predicate = body.substr(0, open);
  if (open != std::string::npos) {
    if (body.back() != ')') throw SolverError("cannot read solver atom '" + text + "'");
    std::string inner = body.substr(open + 1, body.size() - open - 2);
    std::stringstream ss(inner);
    std::string arg;
    while (std::getline(ss, arg, ',')) g.args.push_back(arg);
  }
  if (negative) {
    std::string hat = sig.hat_for(g.predicate);
    if (hat.empty()) {
      known = false;
      return g;
    }
    g.predicate = hat;
  }
  const Predicate* pred = sig.find_predicate(g.predicate);
  known = pred && pred->arity == g.args.size();
  return g;
}

}  // namespace detail

// Parses solver output text (smodels/clingo style) into models over `sig`.
// Atoms of predicates outside the signature (domain guards) are dropped.
inline ModelSet parse_solver_output(const std::string& output, const Signature& sig) {
  auto table = std::make_shared<const AtomTable>(sig);
  ModelSet out{table, {}, {}};
  std::istringstream in(output);
  std::string line;
  bool saw_verdict = false;
  bool expect_model = false;
  while (std::getline(in, line)) {
    if (line.rfind("Answer:", 0) == 0) {
      expect_model = true;
      continue;
    }
    if (line.find("UNSATISFIABLE") != std::string::npos || line.find("SATISFIABLE") != std::string::npos) {
      saw_verdict = true;
    }
    if (!expect_model) continue;
    expect_model = false;
    if (line.rfind("Stable Model:", 0) == 0) line.erase(0, 13);
    Interpretation m(table);
    std::istringstream atoms(line);
    std::string tok;
    while (atoms >> tok) {
      bool known = false;
      GroundAtom g = detail::parse_solver_atom(tok, sig, known);
      if (!known) continue;
      auto idx = table->find(g);
      if (!idx) throw SolverError("solver atom '" + tok + "' is outside the universe");
      m.set(*idx, true);
    }
    out.models.push_back(std::move(m));
  }
  if (out.models.empty() && !saw_verdict) throw SolverError("no models and no verdict in solver output");
  out.normalize();
  return out;
}

// Runs `command` with the program on standard input.
inline ModelSet run_solver(const std::string& asp_text, const std::string& command, const Signature& sig) {
  detail::TempFile input;
  detail::TempFile errors;
  {
    std::ofstream f(input.path());
    f << asp_text;
  }
  std::string full = command + " < '" + input.path() + "' 2> '" + errors.path() + "'";
  FILE* pipe = ::popen(full.c_str(), "r");
  if (!pipe) throw SolverError("cannot start solver: " + command);
  std::string output;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) output.append(buffer, n);
  int status = ::pclose(pipe);
  std::string err = detail::read_file(errors.path());

  std::string lowered = err;
  for (auto& ch : lowered) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (lowered.find("error") != std::string::npos) throw SolverError("solver reported an error:\n" + err);
  try {
    return parse_solver_output(output, sig);
  } catch (const SolverError&) {
    if (status != 0) {
      throw SolverError("solver failed (status " + std::to_string(status) + ")" + (err.empty() ? "" : ":\n" + err));
    }
    throw;
  }
}

}  // namespace causal
