#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "causal/causal.hpp"

namespace testing_support {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw causal::Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline causal::TheoryDocument load(const std::string& name) {
  return causal::parse_theory(slurp(std::string(CAUSAL_THEORIES_DIR) + "/" + name));
}

// Models rendered one per entry, in canonical order.
inline std::vector<std::string> lines(const causal::ModelSet& s) { return s.lines(); }

inline causal::Signature props(std::initializer_list<const char*> names) {
  causal::Signature sig;
  sig.add_to_universe("a");
  for (const char* n : names) sig.declare_predicate(n, 0);
  return sig;
}

}  // namespace testing_support
