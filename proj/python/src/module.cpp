#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>

#include "monoref/guarded.hpp"
#include "monoref/surface.hpp"

namespace py = pybind11;
using namespace monoref;

namespace {

// Surface type errors; surfaces in Python as TypeCheckError.
struct TypeCheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

surface::Compiled compile_or_throw(const std::string& text) {
  auto c = surface::compile(text);
  if (!c) throw TypeCheckFailure{c.error().str()};
  return std::move(c).value();
}

std::string run_program(const std::string& text, const std::string& semantics, std::uint64_t fuel) {
  const auto c = compile_or_throw(text);
  if (semantics == "monotonic") return run(c.ir, fuel).str();
  if (semantics == "guarded") return guarded::run_g(c.ir, fuel).str();
  throw py::value_error("semantics must be 'monotonic' or 'guarded'");
}

}  // namespace

PYBIND11_MODULE(_monoref, m) {
  m.doc() = "Gradually typed references: monotonic and guarded interpreters";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<TypeCheckFailure>(m, "TypeCheckError", PyExc_ValueError);

  m.attr("DEFAULT_FUEL") = kDefaultFuel;

  m.def(
      "check", [](const std::string& text) { return compile_or_throw(text).type.str(); }, py::arg("source"),
      "Type of a surface program, as an s-expression.");
  m.def(
      "compile", [](const std::string& text) { return print_ir(compile_or_throw(text).ir); }, py::arg("source"),
      "Elaborated IR of a surface program.");
  m.def("run", &run_program, py::arg("source"), py::arg("semantics") = "monotonic", py::arg("fuel") = kDefaultFuel,
        "Runs a program and returns the rendered observable.");
  m.def(
      "diff",
      [](const std::string& text, std::uint64_t fuel) {
        const auto c = compile_or_throw(text);
        return py::make_tuple(run(c.ir, fuel).str(), guarded::run_g(c.ir, fuel).str());
      },
      py::arg("source"), py::arg("fuel") = kDefaultFuel, "Observables under (monotonic, guarded).");
}
