#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "support.hpp"

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run causalc(const std::string& args) {
  std::string cmd = std::string(CAUSALC) + " " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  Run r;
  if (!pipe) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string theory(const char* name) { return std::string(CAUSAL_THEORIES_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
  std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST(Cli, Translate) {
  auto r = causalc("translate " + theory("intro.ct"));
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("~~~q -> p"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("~~p -> q_hat"), std::string::npos) << r.out;
  auto s = causalc("translate --simplify " + theory("intro.ct"));
  EXPECT_NE(s.out.find("~q -> p"), std::string::npos) << s.out;
}

TEST(Cli, Models) {
  auto r = causalc("models " + theory("intro.ct"));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "p\n1 model\n");
  auto stable = causalc("models --semantics stable --project " + theory("intro.ct"));
  EXPECT_EQ(stable.out, "p\n1 model\n");
  auto full = causalc("models --semantics stable " + theory("intro.ct"));
  EXPECT_EQ(full.out, "p -q\n1 model\n");
  auto completion = causalc("models --semantics completion " + theory("intro.ct"));
  EXPECT_EQ(completion.out, "p\n1 model\n");
}

TEST(Cli, Verify) {
  auto r = causalc("verify " + theory("switches.ct"));
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(r.out.rfind("PASS", 0), 0u) << r.out;
  auto fuzz = causalc("verify --fuzz 1000 --seed 7");
  EXPECT_EQ(fuzz.status, 0) << fuzz.out;
  EXPECT_NE(fuzz.out.find("PASS"), std::string::npos) << fuzz.out;
}

TEST(Cli, CorruptedTranslationFails) {
  auto r = causalc("verify --corrupt-translation " + theory("intro.ct"));
  EXPECT_EQ(r.status, 2) << r.out;
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, Errors) {
  auto path = temp_file("quantified_head.ct", "universe a. explainable p/1.\nforall X: p(X) <= true.\n");
  auto r = causalc("models " + path);
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("2:"), std::string::npos) << r.out;
  EXPECT_EQ(causalc("models /nonexistent/file.ct").status, 1);
  EXPECT_EQ(causalc("frobnicate").status, 1);
  EXPECT_EQ(causalc("--help").status, 0);
}

TEST(Cli, Guardrail) {
  std::string text = "universe a.\nexplainable";
  for (int i = 0; i < 30; ++i) text += std::string(i ? "," : "") + " p" + std::to_string(i) + "/0";
  text += ".\n";
  auto path = temp_file("big.ct", text);
  auto r = causalc("models " + path);
  EXPECT_EQ(r.status, 3) << r.out;
  auto small = causalc("models --max-atoms 1 " + theory("intro.ct"));
  EXPECT_EQ(small.status, 3) << small.out;
}

TEST(Cli, DeterministicOutput) {
  for (const char* args : {"emit ", "translate ", "models --semantics stable "}) {
    auto a = causalc(args + theory("switches.ct"));
    auto b = causalc(args + theory("switches.ct"));
    EXPECT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Cli, EmitLegacyMatchesGolden) {
  auto r = causalc("emit --legacy-lparse " + theory("choice.ct"));
  EXPECT_EQ(r.out, testing_support::slurp(std::string(CAUSAL_GOLDEN_DIR) + "/choice.lp"));
}

TEST(Cli, ConfigFile) {
  auto config = temp_file("causalc.ini", "[models]\nsemantics=stable\nproject=true\n");
  auto r = causalc("--config " + config + " models " + theory("intro.ct"));
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(r.out, "p\n1 model\n");
}

TEST(Cli, SolveWithMock) {
  auto r = causalc("solve --solver '" + std::string(CAUSAL_THEORIES_DIR) + "/../tests/mock_solver.sh' " +
                   theory("switches.ct"));
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("2 models"), std::string::npos) << r.out;
}
