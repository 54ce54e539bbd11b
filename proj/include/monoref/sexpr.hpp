#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace monoref {

struct SourcePos {
  int line = 1;
  int column = 1;
  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, const std::string& message);
  [[nodiscard]] SourcePos pos() const { return pos_; }
  [[nodiscard]] const std::string& detail() const { return detail_; }

 private:
  SourcePos pos_;
  std::string detail_;
};

struct SExpr {
  using List = std::vector<SExpr>;
  SourcePos pos;
  std::variant<std::string, List> node;

  [[nodiscard]] bool is_atom() const { return node.index() == 0; }
  [[nodiscard]] bool is_list() const { return node.index() == 1; }
  [[nodiscard]] const std::string& atom() const { return std::get<0>(node); }
  [[nodiscard]] const List& list() const { return std::get<1>(node); }
  [[nodiscard]] bool is_atom(std::string_view s) const { return is_atom() && atom() == s; }
};

/// Reads every top-level datum. `;` starts a comment running to end of line.
[[nodiscard]] std::vector<SExpr> read_sexprs(std::string_view text);

/// Reads exactly one datum.
[[nodiscard]] SExpr read_single_sexpr(std::string_view text);

}  // namespace monoref
