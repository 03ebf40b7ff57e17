// causalc: translate, enumerate and verify causal theories.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "causal/causal.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kFail = 2, kGuardrail = 3 };

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw causal::Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Options {
  std::string input;
  bool simplify = false;
  bool no_simplify = false;
  std::string format = "formula";
  bool force_trd = false;
  bool legacy = false;
  std::string semantics = "causal";
  bool project = false;
  std::size_t max_atoms = 24;
  bool no_guardrail = false;
  std::size_t fuzz = 0;
  std::uint64_t seed = 0;
  bool corrupt = false;
  std::string solver = "clingo -n 0";
  bool check = false;
};

causal::EnumerationLimits limits(const Options& o) {
  causal::EnumerationLimits l;
  l.max_free_atoms = o.no_guardrail ? causal::detail::kMaxAtoms : o.max_atoms;
  return l;
}

causal::TranslateOptions translate_options(const Options& o) {
  causal::TranslateOptions t;
  if (o.force_trd) {
    t.literals_as_disjunctive = true;
    t.synonymity_as_disjunctive = true;
  }
  return t;
}

causal::CausalTheory require_theory(const causal::TheoryDocument& doc) {
  if (doc.is_program()) throw causal::Error("expected a causal theory, got a program document");
  return doc.theory();
}

causal::Program program_of(const causal::TheoryDocument& doc, const Options& o, bool simplify) {
  if (doc.is_program()) return doc.program();
  causal::Program p = causal::translate(causal::normalize(doc.theory()), translate_options(o));
  return simplify ? causal::simplify(p) : p;
}

// Swaps the head of the first rule whose head is a p / p_hat atom with its
// partner. Used to exercise the failure path of verify.
void corrupt(causal::Program& p) {
  for (auto& r : p.rules) {
    if (r.completeness || !r.head.is_atom()) continue;
    const causal::Predicate* pred = p.signature.find_predicate(r.head.predicate());
    std::string partner = pred->hat_of.empty() ? p.signature.hat_for(pred->name) : pred->hat_of;
    if (partner.empty()) continue;
    r.head = causal::Formula::atom(partner, std::vector<causal::Term>(r.head.args().begin(), r.head.args().end()));
    return;
  }
  if (!p.rules.empty()) p.rules.pop_back();
}

int cmd_translate(const Options& o) {
  auto doc = causal::parse_theory(read_input(o.input));
  auto program = program_of(doc, o, o.simplify);
  if (o.format == "asp") {
    std::cout << causal::emit_asp(program, doc.facts, {o.legacy});
  } else {
    std::cout << causal::to_string(program);
  }
  return kOk;
}

int cmd_models(const Options& o) {
  auto doc = causal::parse_theory(read_input(o.input));
  causal::ModelSet models;
  if (o.semantics == "causal") {
    auto t = causal::normalize(require_theory(doc));
    models = causal::causal_models(causal::ground_theory(t), doc.facts, limits(o));
  } else if (o.semantics == "completion") {
    auto t = causal::normalize(require_theory(doc));
    models = causal::completion_models(causal::ground_theory(t), doc.facts, limits(o));
  } else {
    auto program = program_of(doc, o, o.simplify);
    models = causal::stable_models(causal::ground_program(program), doc.facts, limits(o));
    if (o.project && !doc.is_program()) {
      models = models.project(std::make_shared<const causal::AtomTable>(doc.signature));
    }
  }
  std::cout << causal::to_string(models);
  return kOk;
}

int cmd_verify(const Options& o) {
  causal::SoundnessOptions so;
  so.translate = translate_options(o);
  so.simplify = o.simplify;
  so.limits = limits(o);
  if (o.corrupt) so.tamper = corrupt;

  if (o.fuzz > 0) {
    std::size_t failures = 0;
    for (std::size_t i = 0; i < o.fuzz; ++i) {
      const std::uint64_t seed = o.seed + i;
      auto c = causal::fuzz::random_theory(seed);
      auto report = causal::check_soundness(c.theory, c.facts, so);
      if (report.pass) continue;
      ++failures;
      std::cout << "seed " << seed << ": " << causal::to_string(report);
      for (const auto& r : c.theory.rules) std::cout << "  rule: " << causal::to_string(r) << "\n";
    }
    std::cout << (failures == 0 ? "PASS" : "FAIL") << ": " << (o.fuzz - failures) << "/" << o.fuzz
              << " theories sound\n";
    return failures == 0 ? kOk : kFail;
  }
  auto doc = causal::parse_theory(read_input(o.input));
  auto report = causal::check_soundness(require_theory(doc), doc.facts, so);
  std::cout << causal::to_string(report);
  return report.pass ? kOk : kFail;
}

int cmd_emit(const Options& o) {
  auto doc = causal::parse_theory(read_input(o.input));
  std::cout << causal::emit_asp(program_of(doc, o, !o.no_simplify), doc.facts, {o.legacy});
  return kOk;
}

int cmd_solve(const Options& o) {
  auto doc = causal::parse_theory(read_input(o.input));
  auto program = program_of(doc, o, !o.no_simplify);
  auto models = causal::run_solver(causal::emit_asp(program, doc.facts, {o.legacy}), o.solver, program.signature);
  int code = kOk;
  if (o.check) {
    auto expected = causal::stable_models(causal::ground_program(program), doc.facts, limits(o));
    if (!(expected == models)) {
      std::cerr << "solver models differ from the enumerator (" << models.size() << " vs " << expected.size()
                << ")\n";
      code = kFail;
    }
  }
  if (o.project && !doc.is_program()) {
    models = models.project(std::make_shared<const causal::AtomTable>(doc.signature));
  }
  std::cout << causal::to_string(models);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Translate nonmonotonic causal theories into logic programs and check their models."};
  app.set_config("--config", "", "Read option defaults from a key=value file");
  app.require_subcommand(1);
  Options o;

  auto* translate = app.add_subcommand("translate", "Print the translated logic program");
  translate->add_option("file", o.input, "Theory file ('-' for stdin)")->required();
  translate->add_flag("--simplify", o.simplify, "Apply the simplification pass");
  translate->add_option("--format", o.format, "formula or asp")->check(CLI::IsMember({"formula", "asp"}));
  translate->add_flag("--force-trd", o.force_trd, "Translate L- and S-rules as D-rules");
  translate->add_flag("--legacy-lparse", o.legacy, "Old lparse syntax (#domain, pooled facts)");

  auto* models = app.add_subcommand("models", "Enumerate models by brute force");
  models->add_option("file", o.input, "Theory file ('-' for stdin)")->required();
  models->add_option("--semantics", o.semantics, "causal, stable or completion")
      ->check(CLI::IsMember({"causal", "stable", "completion"}));
  models->add_flag("--project", o.project, "Drop hat atoms from stable models");
  models->add_flag("--simplify", o.simplify, "Simplify the translation first (stable)");
  models->add_flag("--force-trd", o.force_trd, "Translate L- and S-rules as D-rules (stable)");
  models->add_option("--max-atoms", o.max_atoms, "Guardrail on free ground atoms");
  models->add_flag("--no-guardrail", o.no_guardrail, "Enumerate regardless of size (up to 62 atoms)");

  auto* verify = app.add_subcommand("verify", "Compare causal models with stable models of the translation");
  verify->add_option("file", o.input, "Theory file ('-' for stdin)");
  verify->add_option("--fuzz", o.fuzz, "Check N random theories instead of a file");
  verify->add_option("--seed", o.seed, "First fuzz seed");
  verify->add_flag("--simplify", o.simplify, "Simplify the translation first");
  verify->add_flag("--force-trd", o.force_trd, "Translate L- and S-rules as D-rules");
  verify->add_option("--max-atoms", o.max_atoms, "Guardrail on free ground atoms");
  verify->add_flag("--no-guardrail", o.no_guardrail, "Enumerate regardless of size (up to 62 atoms)");
  verify->add_flag("--corrupt-translation", o.corrupt)->group("");

  auto* emit = app.add_subcommand("emit", "Print solver input for a theory or program");
  emit->add_option("file", o.input, "Theory file ('-' for stdin)")->required();
  emit->add_flag("--legacy-lparse", o.legacy, "Old lparse syntax (#domain, pooled facts)");
  emit->add_flag("--no-simplify", o.no_simplify, "Emit the unsimplified translation");
  emit->add_flag("--force-trd", o.force_trd, "Translate L- and S-rules as D-rules");

  auto* solve = app.add_subcommand("solve", "Run an external answer set solver on the emitted program");
  solve->add_option("file", o.input, "Theory file ('-' for stdin)")->required();
  solve->add_option("--solver", o.solver, "Solver command, reads the program on stdin");
  solve->add_flag("--project", o.project, "Drop hat atoms");
  solve->add_flag("--check", o.check, "Compare with the built-in enumerator");
  solve->add_flag("--no-simplify", o.no_simplify, "Emit the unsimplified translation");
  solve->add_flag("--legacy-lparse", o.legacy, "Old lparse syntax (#domain, pooled facts)");
  solve->add_option("--max-atoms", o.max_atoms, "Guardrail for --check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (verify->parsed() && o.fuzz == 0 && o.input.empty()) {
    std::cerr << "verify: give a theory file or --fuzz N\n";
    return kUsage;
  }

  try {
    if (translate->parsed()) return cmd_translate(o);
    if (models->parsed()) return cmd_models(o);
    if (verify->parsed()) return cmd_verify(o);
    if (emit->parsed()) return cmd_emit(o);
    if (solve->parsed()) return cmd_solve(o);
  } catch (const causal::GuardrailError& e) {
    std::cerr << "guardrail: " << e.what() << "\n";
    return kGuardrail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
