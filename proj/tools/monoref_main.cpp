// monoref: check, compile, run and diff gradually-typed programs.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "monoref/guarded.hpp"
#include "monoref/surface.hpp"

namespace {

using namespace monoref;

enum Exit : int {
  kOk = 0,
  kCastError = 1,
  kStuck = 2,
  kTimeOut = 3,
  kTypeError = 4,
  kParseError = 5,
  kIoError = 6,
};

int exit_code(const Observable& o) {
  switch (o.kind()) {
    case Observable::Kind::CastError: return kCastError;
    case Observable::Kind::Stuck: return kStuck;
    case Observable::Kind::TimeOut: return kTimeOut;
    default: return kOk;
  }
}

// Reads, parses, typechecks and elaborates; on failure reports and returns
// the exit code instead.
struct Loaded {
  std::optional<surface::Compiled> program;
  int error = kOk;
};

Loaded load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << path << ": cannot read file\n";
    return {std::nullopt, kIoError};
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    auto compiled = surface::compile(buf.str());
    if (!compiled) {
      std::cerr << path << ":" << compiled.error().str() << "\n";
      return {std::nullopt, kTypeError};
    }
    return {std::move(compiled).value(), kOk};
  } catch (const ParseError& e) {
    std::cerr << path << ":" << e.pos().line << ":" << e.pos().column << ": parse error: " << e.detail() << "\n";
    return {std::nullopt, kParseError};
  }
}

void trace_line(std::size_t index, StepRule rule, std::size_t active, std::size_t heap) {
  std::cerr << index << '\t' << to_string(rule) << '\t' << active << '\t' << heap << '\n';
}

Observable run_monotonic(const Stmt& s, std::uint64_t fuel, bool trace) {
  StepObserver obs;
  if (trace) {
    obs = [](std::size_t i, StepRule r, const State& st) { trace_line(i, r, st.active.size(), st.heap.size()); };
  }
  return run(s, fuel, obs);
}

Observable run_guarded(const Stmt& s, std::uint64_t fuel, bool trace) {
  guarded::GStepObserver obs;
  if (trace) {
    obs = [](std::size_t i, StepRule r, const guarded::GState& st) { trace_line(i, r, 0, st.heap.size()); };
  }
  return guarded::run_g(s, fuel, obs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpreter and differential workbench for monotonic and guarded references"};
  app.require_subcommand(1);

  std::string path;
  std::string semantics = "monotonic";
  std::uint64_t fuel = kDefaultFuel;
  bool trace = false;

  auto add_fuel = [&](CLI::App* cmd) {
    cmd->add_option("--fuel", fuel, "Maximum number of machine steps")
        ->envname("MONOREF_FUEL")
        ->check(CLI::PositiveNumber);
  };

  auto* check = app.add_subcommand("check", "Typecheck a program and print its type");
  check->add_option("file", path, "Source file")->required();

  auto* compile = app.add_subcommand("compile", "Print the elaborated intermediate code");
  compile->add_option("file", path, "Source file")->required();

  auto* run_cmd = app.add_subcommand("run", "Run a program and print its observable result");
  run_cmd->add_option("file", path, "Source file")->required();
  run_cmd->add_option("--semantics", semantics, "Reference semantics")
      ->check(CLI::IsMember({"monotonic", "guarded"}));
  add_fuel(run_cmd);
  run_cmd->add_flag("--trace", trace, "Print one line per machine step to stderr");

  auto* diff = app.add_subcommand("diff", "Run under both semantics and compare");
  diff->add_option("file", path, "Source file")->required();
  add_fuel(diff);

  CLI11_PARSE(app, argc, argv);

  Loaded loaded = load(path);
  if (!loaded.program) return loaded.error;
  const auto& prog = *loaded.program;

  if (*check) {
    std::cout << prog.type.str() << "\n";
    return kOk;
  }
  if (*compile) {
    std::cout << print_ir(prog.ir) << "\n";
    return kOk;
  }
  if (*run_cmd) {
    const Observable o = semantics == "guarded" ? run_guarded(prog.ir, fuel, trace)
                                                : run_monotonic(prog.ir, fuel, trace);
    std::cout << o.str() << "\n";
    return exit_code(o);
  }
  const Observable m = run(prog.ir, fuel);
  const Observable g = guarded::run_g(prog.ir, fuel);
  std::cout << "monotonic: " << m.str() << "\n"
            << "guarded: " << g.str() << "\n"
            << (m == g ? "AGREE" : "DIFFER") << "\n";
  return kOk;
}
