// Acceptance suite: one line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "causal/causal.hpp"

using namespace causal;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TheoryDocument load(const std::string& name) { return parse_theory(slurp(std::string(CAUSAL_THEORIES_DIR) + "/" + name)); }

// Criterion body: returns a short summary, throws Failure on mismatch.
struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

std::set<std::string> true_atoms(const Interpretation& m) {
  std::set<std::string> out;
  for (std::size_t k = 0; k < m.table().size(); ++k) {
    if (m.value(k)) out.insert(m.table().display(k));
  }
  return out;
}

std::set<std::string> true_atoms_of(const Interpretation& m, const std::vector<std::string>& predicates) {
  std::set<std::string> out;
  for (std::size_t k = 0; k < m.table().size(); ++k) {
    const auto& p = m.table().predicate_of(k);
    std::string base = p.hat_of.empty() ? p.name : p.hat_of;
    if (m.value(k) && std::find(predicates.begin(), predicates.end(), base) != predicates.end()) {
      out.insert(m.table().display(k));
    }
  }
  return out;
}

std::string join(const std::set<std::string>& s) {
  std::string out = "{";
  for (const auto& x : s) out += (out.size() > 1 ? " " : "") + x;
  return out + "}";
}

// ---------------------------------------------------------------------------

std::string intro() {
  auto doc = load("intro.ct");
  auto theory = normalize(doc.theory());
  Program p = translate(theory);
  const char* expected[] = {"~~~q -> p",      "~~p -> q_hat", "~(p & p_hat)",
                            "~(~p & ~p_hat)", "~(q & q_hat)", "~(~q & ~q_hat)"};
  expect(p.rules.size() == 6, "translation has " + std::to_string(p.rules.size()) + " rules, expected 6");
  for (std::size_t i = 0; i < 6; ++i) {
    Formula want = parse_formula(expected[i], p.signature);
    expect(to_formula(p.rules[i]) == want, "rule " + std::to_string(i + 1) + " is '" + to_string(p.rules[i]) +
                                               "', expected '" + expected[i] + "'");
  }
  auto stable = stable_models(ground_program(p));
  expect(stable.size() == 1, std::to_string(stable.size()) + " stable models");
  expect(true_atoms(stable.models[0]) == std::set<std::string>{"p", "-q"},
         "stable model " + join(true_atoms(stable.models[0])));
  auto causal = causal_models(ground_theory(theory));
  expect(causal.size() == 1, std::to_string(causal.size()) + " causal models");
  expect(true_atoms(causal.models[0]) == std::set<std::string>{"p"}, "causal model " + join(true_atoms(causal.models[0])));
  return "translation matched; stable {p, -q}; causal {p}";
}

std::string defaults() {
  auto doc = load("default.ct");
  expect(doc.signature.universe() == std::vector<std::string>{"a", "b", "c"}, "universe is not {a,b,c}");
  auto theory = normalize(doc.theory());
  auto causal = causal_models(ground_theory(theory));
  expect(causal.size() == 1, std::to_string(causal.size()) + " causal models");
  expect(true_atoms(causal.models[0]) == std::set<std::string>{"p(a)"}, "causal model " + join(true_atoms(causal.models[0])));
  // The closed form printed for this theory.
  Formula closed = parse_formula("forall X: (p(X) -> X = a) & (X = a -> p(X))", doc.signature);
  auto classical = classical_models(ground_formula(closed, doc.signature, {}), doc.signature);
  expect(classical == causal, "causal models differ from the models of forall x (p(x) <-> x = a)");
  auto stable = stable_models(ground_program(translate(theory)));
  expect(stable.size() == 1, std::to_string(stable.size()) + " stable models");
  auto hats = true_atoms(stable.models[0]);
  expect(hats == std::set<std::string>{"p(a)", "-p(b)", "-p(c)"}, "stable model " + join(hats));
  return "p true on a only; hats on {b, c}";
}

std::string choice() {
  auto doc = load("choice.ct");
  expect(doc.signature.universe() == std::vector<std::string>{"a", "b", "c", "d"}, "universe is not {a,b,c,d}");
  auto stable = stable_models(ground_program(doc.program()), doc.facts);
  std::set<std::set<std::string>> extents;
  for (const auto& m : stable.models) extents.insert(true_atoms_of(m, {"q"}));
  std::set<std::set<std::string>> want{{}, {"q(c)"}, {"q(d)"}, {"q(c)", "q(d)"}};
  expect(stable.size() == 4, std::to_string(stable.size()) + " stable models");
  expect(extents == want, "q-extents differ");
  for (const auto& m : stable.models) {
    expect(true_atoms_of(m, {"p"}) == std::set<std::string>{"p(a)", "p(b)"}, "p is not {a, b}");
  }
  auto sim = check_extensional_simulation(doc.program(), doc.facts);
  expect(sim.pass, "extensional simulation differs from facts with everything intensional");
  return "4 models; q-extents {}, {c}, {d}, {c,d}";
}

std::string switches() {
  auto doc = load("switches.ct");
  auto theory = normalize(doc.theory());
  Program p = translate(theory);
  auto stable = stable_models(ground_program(p), doc.facts);
  expect(stable.size() == 1, std::to_string(stable.size()) + " stable models");
  auto shown = true_atoms_of(stable.models[0], theory.signature.explainable());
  std::set<std::string> want{"-on1(hisswitch)", "on1(myswitch)", "-dark"};
  expect(shown == want, "model shows " + join(shown));
  auto causal = causal_models(ground_theory(theory), doc.facts);
  expect(causal.size() == 1, std::to_string(causal.size()) + " causal models");
  auto projected = stable.project(causal.atoms);
  expect(projected == causal, "hat-free stable model differs from the causal model");
  // Same through the simplified program.
  auto simplified = stable_models(ground_program(simplify(p)), doc.facts);
  expect(simplified == stable, "simplified program has different stable models");
  return "-on1(hisswitch) on1(myswitch) -dark; causal side agrees";
}

std::string strip_coherence(const std::string& text, std::size_t& removed) {
  // ":- A, -A." lines are kept by the emitter but absent from the golden file.
  std::istringstream in(text);
  std::string line;
  std::string out;
  removed = 0;
  while (std::getline(in, line)) {
    auto comma = line.find(", -");
    if (line.rfind(":- ", 0) == 0 && comma != std::string::npos && line.back() == '.' &&
        line.substr(3, comma - 3) == line.substr(comma + 3, line.size() - comma - 4)) {
      ++removed;
      continue;
    }
    out += line + '\n';
  }
  return out;
}

std::string legacy_output() {
  const std::string golden = CAUSAL_GOLDEN_DIR;
  auto choice_doc = load("choice.ct");
  std::string choice_text = emit_asp(choice_doc.program(), choice_doc.facts, {true});
  expect(choice_text == slurp(golden + "/choice.lp"), "choice.lp differs:\n" + choice_text);

  auto switches_doc = load("switches.ct");
  Program p = simplify(translate(normalize(switches_doc.theory())));
  std::string switches_text = emit_asp(p, switches_doc.facts, {true});
  std::size_t removed = 0;
  std::string stripped = strip_coherence(switches_text, removed);
  expect(removed == 2, std::to_string(removed) + " coherence constraints, expected 2 (on1, dark)");
  expect(stripped == slurp(golden + "/switches.lp"), "switches.lp differs:\n" + switches_text);
  return "choice.lp exact; switches.lp exact after removing the 2 retained coherence constraints";
}

constexpr std::size_t kFuzzCorpus = 1000;

std::string soundness_fuzz() {
  std::size_t failures = 0;
  std::string first;
  for (std::uint64_t seed = 0; seed < kFuzzCorpus; ++seed) {
    auto c = fuzz::random_theory(seed);
    auto report = check_soundness(c.theory, c.facts);
    if (report.pass) continue;
    if (failures++ == 0) first = "seed " + std::to_string(seed) + ": " + to_string(report);
  }
  expect(failures == 0, std::to_string(failures) + " unsound instances; first " + first);
  return std::to_string(kFuzzCorpus) + "/" + std::to_string(kFuzzCorpus) + " sound";
}

std::string per_kind() {
  std::size_t compared[3] = {0, 0, 0};
  std::size_t mismatches = 0;
  std::string first;
  const char* names[3] = {"c", "l", "s"};
  const RuleKind kinds[3] = {RuleKind::C, RuleKind::L, RuleKind::S};
  for (std::uint64_t seed = 0; seed < kFuzzCorpus; ++seed) {
    auto c = fuzz::random_theory(seed);
    CausalTheory t = normalize(c.theory);
    auto base = stable_models(ground_program(translate(t)), c.facts);
    for (int k = 0; k < 3; ++k) {
      bool present = std::any_of(t.rules.begin(), t.rules.end(), [&](const CausalRule& r) { return r.kind == kinds[k]; });
      if (!present) continue;
      TranslateOptions o;
      o.constraints_as_disjunctive = k == 0;
      o.literals_as_disjunctive = k == 1;
      o.synonymity_as_disjunctive = k == 2;
      ++compared[k];
      if (stable_models(ground_program(translate(t, o)), c.facts) == base) continue;
      if (mismatches++ == 0) first = "kind " + std::string(names[k]) + " at seed " + std::to_string(seed);
    }
  }
  expect(mismatches == 0, std::to_string(mismatches) + " mismatches; first " + first);
  return "c: " + std::to_string(compared[0]) + ", l: " + std::to_string(compared[1]) + ", s: " +
         std::to_string(compared[2]) + " theories, no mismatches";
}

std::string completion() {
  constexpr std::size_t n = 500;
  std::size_t mismatches = 0;
  std::size_t models = 0;
  for (std::uint64_t seed = 0; seed < n; ++seed) {
    auto c = fuzz::random_definite_theory(seed, 5);
    CausalTheory g = ground_theory(c.theory);
    auto causal = causal_models(g, c.facts);
    models += causal.size();
    if (!(completion_models(g, c.facts) == causal)) ++mismatches;
  }
  expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
  return std::to_string(n) + " definite theories (" + std::to_string(models) + " models), no mismatches";
}

std::string minimality() {
  constexpr std::size_t n = 200;
  std::size_t mismatches = 0;
  for (std::uint64_t seed = 0; seed < n; ++seed) {
    Program p = fuzz::random_negation_free_program(seed);
    if (!(stable_models(p) == minimal_models(p))) ++mismatches;
  }
  expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
  return std::to_string(n) + " negation-free programs, no mismatches";
}

std::string simplifier() {
  std::size_t mismatches = 0;
  std::string first;
  for (std::uint64_t seed = 0; seed < kFuzzCorpus; ++seed) {
    auto c = fuzz::random_theory(seed);
    Program p = translate(normalize(c.theory));
    if (stable_models(ground_program(p), c.facts) == stable_models(ground_program(simplify(p)), c.facts)) continue;
    if (mismatches++ == 0) first = "seed " + std::to_string(seed);
  }
  expect(mismatches == 0, std::to_string(mismatches) + " mismatches; first " + first);
  return std::to_string(kFuzzCorpus) + " programs, no mismatches";
}

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;  // 0: no limit
  std::function<std::string()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "two-rule theory end to end", 1, intro},
      {2, "default falsity over {a,b,c}", 1, defaults},
      {3, "choice over {a,b,c,d} with p(a), p(b)", 1, choice},
      {4, "two switches", 5, switches},
      {5, "golden legacy lparse output", 0, legacy_output},
      {6, "soundness on 1000 random theories", 120, soundness_fuzz},
      {7, "C, L, S rules via the D translation on the fuzz corpus", 0, per_kind},
      {8, "literal completion on 500 definite theories", 60, completion},
      {9, "stable = minimal on 200 negation-free programs", 0, minimality},
      {10, "simplify keeps stable models on the fuzz corpus", 0, simplifier},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.run();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && c.limit_seconds > 0 && seconds > c.limit_seconds) {
      ok = false;
      detail += " (over the " + std::to_string(static_cast<int>(c.limit_seconds)) + " s limit)";
    }
    if (!ok) ++failed;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << std::setw(2) << c.id << "  " << c.title << "  (" << std::fixed
              << std::setprecision(3) << seconds << " s)  " << detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
