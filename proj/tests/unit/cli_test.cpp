#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell with stdout captured (stderr discarded
// unless the command redirects it).
Outcome cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" + std::string(MONOREF_CLI) + "' " + args;
  Outcome o;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return o;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) o.out.append(buf.data(), n);
  const int status = pclose(p);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string corpus(const std::string& f) { return "'" + std::string(MONOREF_CORPUS_DIR) + "/" + f + "'"; }

TEST(Cli, Check) {
  EXPECT_EQ(cli("check " + corpus("ex2.gtlc")).out, "int\n");
  EXPECT_EQ(cli("check " + corpus("ex3.gtlc")).out, "dyn\n");
  const Outcome bad = cli("check " + corpus("ill-typed.gtlc") + " 2>&1");
  EXPECT_EQ(bad.code, 4);
  EXPECT_NE(bad.out.find("type error"), std::string::npos);
}

TEST(Cli, RunBothSemantics) {
  const Outcome m = cli("run " + corpus("ex1.gtlc"));
  EXPECT_EQ(m.code, 1);
  EXPECT_EQ(m.out, "error: cast\n");
  const Outcome g = cli("run --semantics guarded " + corpus("ex1.gtlc"));
  EXPECT_EQ(g.code, 0);
  EXPECT_EQ(g.out, "#t\n");
  EXPECT_EQ(cli("run " + corpus("cycle.gtlc")).out, "42\n");
}

TEST(Cli, Diff) {
  const Outcome d = cli("diff " + corpus("ex3.gtlc"));
  EXPECT_EQ(d.out, "monotonic: error: cast\nguarded: #inj\nDIFFER\n");
  EXPECT_EQ(cli("diff " + corpus("ex2.gtlc")).out, "monotonic: 4\nguarded: 4\nAGREE\n");
}

TEST(Cli, Compile) {
  const Outcome c = cli("compile " + corpus("ex2.gtlc"));
  EXPECT_EQ(c.code, 0);
  EXPECT_EQ(c.out.rfind("(let ", 0), 0u) << c.out;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("run " + corpus("bad-paren.gtlc") + " 2>/dev/null").code, 5);
  EXPECT_EQ(cli("run /nonexistent/file.gtlc 2>/dev/null").code, 6);
  EXPECT_EQ(cli("run " + corpus("ill-typed.gtlc") + " 2>/dev/null").code, 4);
  const Outcome t = cli("run " + corpus("cycle.gtlc"), "MONOREF_FUEL=3");
  EXPECT_EQ(t.code, 3);
  EXPECT_EQ(t.out, "timeout\n");
  EXPECT_EQ(cli("run --fuel 3 " + corpus("cycle.gtlc")).code, 3);
}

TEST(Cli, TraceGoesToStderr) {
  const Outcome t = cli("run --trace " + corpus("cycle.gtlc") + " 2>&1 >/dev/null");
  EXPECT_EQ(t.code, 0);
  EXPECT_EQ(t.out.rfind("1\t", 0), 0u) << t.out;
  std::size_t lines = 0;
  for (char ch : t.out) lines += ch == '\n' ? 1 : 0;
  EXPECT_EQ(lines, 13u);
}

}  // namespace
