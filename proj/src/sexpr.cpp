#include "monoref/sexpr.hpp"

#include <cctype>

namespace monoref {

ParseError::ParseError(SourcePos pos, const std::string& message)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message),
      pos_(pos),
      detail_(message) {}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_blank();
    while (!eof()) {
      out.push_back(read());
      skip_blank();
    }
    return out;
  }

 private:
  [[nodiscard]] bool eof() const { return i_ >= text_.size(); }
  [[nodiscard]] char peek() const { return text_[i_]; }

  void advance() {
    if (text_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++i_;
  }

  void skip_blank() {
    while (!eof()) {
      const char c = peek();
      if (c == ';') {
        while (!eof() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  static bool is_delimiter(char c) {
    return c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c));
  }

  SExpr read() {
    const SourcePos start = pos_;
    const char c = peek();
    if (c == ')') throw ParseError(start, "unexpected ')'");
    if (c == '[' || c == ']' || c == '{' || c == '}') {
      throw ParseError(start, std::string("unsupported bracket '") + c + "'");
    }
    if (c == '(') {
      advance();
      SExpr::List items;
      skip_blank();
      while (true) {
        if (eof()) throw ParseError(start, "unbalanced '(': missing ')'");
        if (peek() == ')') {
          advance();
          break;
        }
        items.push_back(read());
        skip_blank();
      }
      return SExpr{start, std::move(items)};
    }
    std::string atom;
    while (!eof() && !is_delimiter(peek())) {
      atom.push_back(peek());
      advance();
    }
    return SExpr{start, std::move(atom)};
  }

  std::string_view text_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text) { return Reader(text).read_all(); }

SExpr read_single_sexpr(std::string_view text) {
  auto all = read_sexprs(text);
  if (all.empty()) throw ParseError(SourcePos{}, "empty input: expected an expression");
  if (all.size() > 1) throw ParseError(all[1].pos, "expected a single top-level expression");
  return std::move(all.front());
}

}  // namespace monoref
