#pragma once

// Gradually-typed surface language and its cast-inserting ANF elaborator.
//
//   e ::= n | #t | #f | x | (lambda (x T) e) | (e e) | (pair e e)
//       | (fst e) | (snd e) | (succ e) | (prev e) | (zero? e)
//       | (ref T e) | (! e) | (:= e e) | (cast e T)
//       | (let (x e) e) | (begin e e ...)
//
// Identifiers may not contain `$`; that character is reserved for names the
// elaborator generates.

#include <string_view>
#include <variant>
#include <vector>

#include "monoref/typecheck.hpp"

namespace monoref::surface {

struct SurfExpr;
using SBox = Box<SurfExpr>;

enum class PrimOp : std::uint8_t { Succ, Prev, IsZero };

struct SurfExpr {
  struct Lit {
    Const value;
  };
  struct Var {
    Name name;
  };
  struct Lambda {
    Name param;
    Ty ann;
    SBox body;
  };
  struct App {
    SBox fn;
    SBox arg;
  };
  struct Pair {
    SBox fst;
    SBox snd;
  };
  struct Fst {
    SBox pair;
  };
  struct Snd {
    SBox pair;
  };
  struct Prim {
    PrimOp op;
    SBox arg;
  };
  struct RefNew {
    Ty cell;
    SBox init;
  };
  struct Deref {
    SBox ref;
  };
  struct Assign {
    SBox target;
    SBox value;
  };
  struct Cast {
    SBox value;
    Ty target;
  };
  struct Let {
    Name var;
    SBox rhs;
    SBox body;
  };
  struct Begin {
    SBox first;
    SBox second;
  };

  using Node = std::variant<Lit, Var, Lambda, App, Pair, Fst, Snd, Prim, RefNew, Deref, Assign, Cast, Let, Begin>;
  SourcePos pos;
  Node node;
};

/// Parses one program. Throws ParseError.
[[nodiscard]] SurfExpr parse_surface(std::string_view text);

/// A ~ B.
[[nodiscard]] bool consistent(const Ty& a, const Ty& b);

/// An implicit cast the checker found necessary.
struct Coercion {
  SourcePos pos;
  Ty from;
  Ty to;
};

/// Synthesises the type of `e`. Every boundary where a consistent but
/// unequal type is accepted is appended to `coercions`, if given.
[[nodiscard]] Checked<Ty> typecheck_surface(const TyEnv& gamma, const SurfExpr& e,
                                            std::vector<Coercion>* coercions = nullptr);

/// Elaborates a closed, typechecked program. User binders are renamed apart
/// and temporaries are `$t0`, `$t1`, ...; an application in tail position
/// becomes a tail call. Throws std::logic_error if `e` does not typecheck.
[[nodiscard]] Stmt elaborate(const SurfExpr& e);

struct Compiled {
  SurfExpr ast;
  Ty type;
  Stmt ir;
};

/// Parse, typecheck and elaborate. Throws ParseError; type errors are
/// returned.
[[nodiscard]] Checked<Compiled> compile(std::string_view text);

}  // namespace monoref::surface
