#pragma once

// Reader for .ct files: universe/predicate declarations, causal rules,
// extensional facts, and (for program documents) plain program rules.
//
//   document    := { statement }
//   statement   := 'universe' const {',' const} '.'
//                | ('explainable' | 'extensional' | 'intensional') pred {',' pred} '.'
//                | 'fact' atom {',' atom} '.'
//                | 'rule' formula '.'
//                | head ['<=' formula] '.'
//   pred        := name ['/' arity]
//   head        := formula ['<->' formula]
//   formula     := disj ['->' formula]
//   disj        := conj {'|' conj}
//   conj        := unary {'&' unary}
//   unary       := ('~' | 'not') unary | ('forall' | 'exists') Var {',' Var} ':' formula | primary
//   primary     := 'true' | 'false' | '(' formula ')' | name ['(' term {',' term} ')'] | term '=' term
//
// Variables start with an uppercase letter; predicates and object constants
// with a lowercase one. '%' starts a comment.

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causal/ast.hpp"
#include "causal/interpretation.hpp"

namespace causal {

struct TheoryDocument {
  Signature signature;
  std::vector<CausalRule> rules;
  // Ground atoms fixing the extensional predicates.
  std::vector<GroundAtom> facts;
  std::vector<ProgramRule> program_rules;
  std::vector<std::string> intensional;

  bool is_program() const { return !program_rules.empty() || !intensional.empty(); }

  CausalTheory theory() const { return CausalTheory{signature, rules}; }
  Program program() const { return Program{signature, program_rules, intensional}; }
};

namespace detail {

struct Token {
  enum class Kind { Ident, Var, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  SourceSpan span;
};

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    SourceSpan span{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      std::string word(text.substr(i, j - i));
      auto kind = std::isupper(static_cast<unsigned char>(c)) ? Token::Kind::Var : Token::Kind::Ident;
      out.push_back({kind, std::move(word), span});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Token::Kind::Number, std::string(text.substr(i, j - i)), span});
      advance(j - i);
      continue;
    }
    for (std::string_view p : {"<->", "<=", "->"}) {
      if (text.substr(i, p.size()) == p) {
        out.push_back({Token::Kind::Punct, std::string(p), span});
        advance(p.size());
        goto next;
      }
    }
    if (std::string_view(".,()/:~&|=").find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::Punct, std::string(1, c), span});
      advance(1);
      continue;
    }
    throw ParseError(span, std::string("unexpected character '") + c + "'");
  next:;
  }
  out.push_back({Token::Kind::End, {}, SourceSpan{line, col}});
  return out;
}

inline bool is_keyword(std::string_view w) {
  for (std::string_view k : {"universe", "explainable", "extensional", "intensional", "fact", "rule", "not", "true",
                             "false", "forall", "exists"}) {
    if (w == k) return true;
  }
  return false;
}

class Parser {
 public:
  // `sig` is extended with implicit declarations unless `strict`.
  Parser(std::string_view text, Signature& sig, bool strict) : tokens_(tokenize(text)), sig_(sig), strict_(strict) {}

  TheoryDocument parse_document();

  Formula parse_single_formula() {
    Formula f = parse_expr(false);
    expect_end();
    return f;
  }

 private:
  struct PendingMark {
    enum class Kind { Explainable, Extensional, Intensional } kind;
    std::string name;
    std::optional<std::size_t> arity;
    SourceSpan span;
  };

  const Token& peek() const { return tokens_[pos_]; }
  bool at(std::string_view punct) const { return peek().kind == Token::Kind::Punct && peek().text == punct; }
  bool at_word(std::string_view w) const { return peek().kind == Token::Kind::Ident && peek().text == w; }
  const Token& take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(peek().span, message); }

  void expect(std::string_view punct) {
    if (!at(punct)) fail("expected '" + std::string(punct) + "'" + found());
    take();
  }

  void expect_end() {
    if (peek().kind != Token::Kind::End) fail("unexpected input" + found());
  }

  std::string found() const {
    if (peek().kind == Token::Kind::End) return ", found end of input";
    return ", found '" + peek().text + "'";
  }

  void declare(const std::string& name, std::size_t arity, SourceSpan span) {
    if (strict_) {
      const Predicate* p = sig_.find_predicate(name);
      if (!p) throw ParseError(span, "undeclared predicate '" + name + "'");
      if (p->arity != arity) {
        throw ParseError(span, "arity mismatch for '" + name + "': declared " + std::to_string(p->arity) +
                                   ", used with " + std::to_string(arity));
      }
      return;
    }
    try {
      sig_.declare_predicate(name, arity);
    } catch (const Error& e) {
      throw ParseError(span, e.what());
    }
  }

  Term parse_term() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Var) {
      take();
      return Term::variable(t.text);
    }
    if (t.kind == Token::Kind::Ident && !is_keyword(t.text)) {
      take();
      if (at("(")) throw ParseError(t.span, "function constants of nonzero arity are not supported");
      note_constant(t.text, t.span);
      return Term::constant(t.text);
    }
    fail("expected a term" + found());
  }

  void note_constant(const std::string& name, SourceSpan span) {
    if (strict_) {
      if (!sig_.has_constant(name)) throw ParseError(span, "undeclared object constant '" + name + "'");
      return;
    }
    if (std::find(constants_seen_.begin(), constants_seen_.end(), name) == constants_seen_.end()) {
      constants_seen_.push_back(name);
    }
  }

  Formula parse_expr(bool allow_iff) {
    Formula f = parse_implication();
    if (at("<->")) {
      if (!allow_iff) fail("'<->' is only allowed as the top connective of a rule head");
      take();
      Formula g = parse_implication();
      if (at("<->")) fail("'<->' is only allowed as the top connective of a rule head");
      f = Formula::iff(std::move(f), std::move(g));
    }
    return f;
  }

  Formula parse_implication() {
    Formula lhs = parse_disjunction();
    if (at("->")) {
      take();
      return Formula::implies(std::move(lhs), parse_implication());
    }
    return lhs;
  }

  Formula parse_disjunction() {
    Formula f = parse_conjunction();
    while (at("|")) {
      take();
      f = Formula::disj(std::move(f), parse_conjunction());
    }
    return f;
  }

  Formula parse_conjunction() {
    Formula f = parse_unary();
    while (at("&")) {
      take();
      f = Formula::conj(std::move(f), parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    if (at("~") || at_word("not")) {
      take();
      return Formula::negate(parse_unary());
    }
    if (at_word("forall") || at_word("exists")) {
      bool universal = take().text == "forall";
      std::vector<std::string> vars;
      do {
        if (peek().kind != Token::Kind::Var) fail("expected a variable after quantifier" + found());
        vars.push_back(take().text);
      } while (at(",") && (take(), true));
      expect(":");
      Formula body = parse_implication();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
        body = universal ? Formula::forall(*it, std::move(body)) : Formula::exists(*it, std::move(body));
      }
      return body;
    }
    return parse_primary();
  }

  Formula parse_primary() {
    const Token& t = peek();
    if (at("(")) {
      take();
      Formula f = parse_expr(false);
      expect(")");
      return f;
    }
    if (at_word("true")) {
      take();
      return Formula::top();
    }
    if (at_word("false")) {
      take();
      return Formula::bottom();
    }
    if (t.kind == Token::Kind::Var) {
      Term lhs = parse_term();
      expect("=");
      return Formula::equal(std::move(lhs), parse_term());
    }
    if (t.kind != Token::Kind::Ident || is_keyword(t.text)) fail("expected a formula" + found());
    take();
    if (at("=")) {
      note_constant(t.text, t.span);
      take();
      return Formula::equal(Term::constant(t.text), parse_term());
    }
    std::vector<Term> args;
    if (at("(")) {
      take();
      do {
        args.push_back(parse_term());
      } while (at(",") && (take(), true));
      expect(")");
    }
    declare(t.text, args.size(), t.span);
    Formula a = Formula::atom(t.text, std::move(args));
    if (at("=")) fail("an atom cannot appear in an equality");
    return a;
  }

  GroundAtom parse_fact() {
    SourceSpan span = peek().span;
    Formula a = parse_primary();
    if (!a.is_atom()) throw ParseError(span, "facts must be atoms");
    for (const Term& t : a.args()) {
      if (t.is_variable()) throw ParseError(span, "facts must be ground");
    }
    marks_.push_back({PendingMark::Kind::Extensional, a.predicate(), a.args().size(), span});
    return to_ground_atom(a);
  }

  void parse_predicate_list(PendingMark::Kind kind) {
    do {
      const Token& t = peek();
      if (t.kind != Token::Kind::Ident || is_keyword(t.text)) fail("expected a predicate name" + found());
      take();
      std::optional<std::size_t> arity;
      if (at("/")) {
        take();
        if (peek().kind != Token::Kind::Number) fail("expected an arity" + found());
        arity = std::stoul(take().text);
        declare(t.text, *arity, t.span);
      }
      marks_.push_back({kind, t.text, arity, t.span});
    } while (at(",") && (take(), true));
    expect(".");
  }

  void parse_universe() {
    do {
      const Token& t = peek();
      if (t.kind != Token::Kind::Ident || is_keyword(t.text)) fail("expected an object constant" + found());
      take();
      sig_.add_to_universe(t.text);
    } while (at(",") && (take(), true));
    expect(".");
  }

  ProgramRule parse_program_rule() {
    SourceSpan span = peek().span;
    Formula f = parse_expr(false);
    expect(".");
    ProgramRule r;
    while (f.is(Op::Forall)) {
      r.universals.push_back(f.variable());
      f = f.operand();
    }
    if (f.is(Op::Implies)) {
      r.body = f.lhs();
      r.head = f.rhs();
    } else {
      r.head = f;
    }
    if (contains(r.body, Op::Implies) || contains(r.head, Op::Implies)) {
      throw ParseError(span, "program rule contains a nested implication");
    }
    const Formula parts[] = {r.body, r.head};
    for (const auto& v : free_variables(parts)) detail::add_unique(r.universals, v);
    return r;
  }

  CausalRule parse_causal_rule() {
    SourceSpan span = peek().span;
    Formula head = parse_expr(true);
    if (contains(head, Op::Forall) || contains(head, Op::Exists)) {
      throw ParseError(span, "quantifiers in rule heads are not supported");
    }
    Formula body = Formula::top();
    if (at("<=")) {
      take();
      body = parse_expr(false);
    }
    expect(".");
    return CausalRule{std::move(head), std::move(body), RuleKind::Unclassified, span};
  }

  void apply_marks(TheoryDocument& doc);

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Signature& sig_;
  bool strict_;
  std::vector<std::string> constants_seen_;
  std::vector<PendingMark> marks_;
};

inline void Parser::apply_marks(TheoryDocument& doc) {
  for (const auto& m : marks_) {
    try {
      if (!sig_.find_predicate(m.name)) sig_.declare_predicate(m.name, m.arity.value_or(0));
      switch (m.kind) {
        case PendingMark::Kind::Explainable:
          sig_.mark_explainable(m.name);
          break;
        case PendingMark::Kind::Extensional:
          if (sig_.is_explainable(m.name)) {
            throw Error("predicate '" + m.name + "' is explainable and cannot be given by facts");
          }
          if (std::find(doc.intensional.begin(), doc.intensional.end(), m.name) != doc.intensional.end()) {
            throw Error("predicate '" + m.name + "' cannot be both intensional and extensional");
          }
          sig_.mark_extensional(m.name);
          break;
        case PendingMark::Kind::Intensional:
          if (sig_.is_extensional(m.name)) {
            throw Error("predicate '" + m.name + "' cannot be both intensional and extensional");
          }
          detail::add_unique(doc.intensional, m.name);
          break;
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(m.span, e.what());
    }
  }
}

inline TheoryDocument Parser::parse_document() {
  TheoryDocument doc;
  while (peek().kind != Token::Kind::End) {
    if (at_word("universe")) {
      take();
      parse_universe();
    } else if (at_word("explainable")) {
      take();
      parse_predicate_list(PendingMark::Kind::Explainable);
    } else if (at_word("extensional")) {
      take();
      parse_predicate_list(PendingMark::Kind::Extensional);
    } else if (at_word("intensional")) {
      take();
      parse_predicate_list(PendingMark::Kind::Intensional);
    } else if (at_word("fact")) {
      take();
      do {
        doc.facts.push_back(parse_fact());
      } while (at(",") && (take(), true));
      expect(".");
    } else if (at_word("rule")) {
      take();
      doc.program_rules.push_back(parse_program_rule());
    } else {
      doc.rules.push_back(parse_causal_rule());
    }
  }
  if (!doc.rules.empty() && !doc.program_rules.empty()) {
    throw ParseError(doc.rules.front().span,
                     "a document cannot mix causal rules and program rules");
  }
  apply_marks(doc);
  for (const auto& c : constants_seen_) sig_.add_to_universe(c);
  for (const auto& f : doc.facts) {
    for (const auto& c : f.args) sig_.add_to_universe(c);
  }
  if (sig_.universe().empty()) throw ParseError(peek().span, "the universe is empty; declare it with 'universe'");
  doc.signature = sig_;
  return doc;
}

}  // namespace detail

inline TheoryDocument parse_theory(std::string_view text) {
  Signature sig;
  detail::Parser parser(text, sig, false);
  return parser.parse_document();
}

// Parses one formula against a fixed signature: every predicate and object
// constant must already be declared.
inline Formula parse_formula(std::string_view text, const Signature& sig) {
  Signature copy = sig;
  detail::Parser parser(text, copy, true);
  return parser.parse_single_formula();
}

}  // namespace causal
