#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "monoref/types.hpp"

namespace monoref {

/// Unbounded integers, so Succ/Prev can never overflow.
using BigInt = boost::multiprecision::cpp_int;

/// Identifiers. Names beginning with `$` are reserved for generated
/// temporaries and the function-cast wrapper.
using Name = std::string;

[[nodiscard]] inline bool is_reserved_name(std::string_view n) {
  return !n.empty() && n.front() == '$';
}

/// Immutable shared box; lets recursive variants hold incomplete types.
template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}
  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  [[nodiscard]] const T* get() const { return ptr_.get(); }

 private:
  std::shared_ptr<const T> ptr_;
};

template <class T>
bool operator==(const Box<T>& a, const Box<T>& b) {
  return a.get() == b.get() || *a == *b;
}

class Const {
 public:
  Const(BigInt n) : value_(std::move(n)) {}
  Const(std::int64_t n) : value_(BigInt(n)) {}
  Const(int n) : value_(BigInt(n)) {}
  Const(bool b) : value_(b) {}

  [[nodiscard]] bool is_int() const { return value_.index() == 0; }
  [[nodiscard]] bool is_bool() const { return value_.index() == 1; }
  [[nodiscard]] const BigInt& as_int() const { return std::get<0>(value_); }
  [[nodiscard]] bool as_bool() const { return std::get<1>(value_); }

  /// Decimal for integers, `#t` / `#f` for booleans.
  [[nodiscard]] std::string str() const;

  friend bool operator==(const Const&, const Const&) = default;

 private:
  std::variant<BigInt, bool> value_;
};

[[nodiscard]] Ty typeof_const(const Const& c);

struct Opr {
  enum class Kind : std::uint8_t { Succ, Prev, IsZero, Fst, Snd };
  Kind kind;
  // Component types of the pair; only meaningful for Fst/Snd.
  Ty a = Ty::Dyn();
  Ty b = Ty::Dyn();

  static Opr succ() { return {Kind::Succ}; }
  static Opr prev() { return {Kind::Prev}; }
  static Opr is_zero() { return {Kind::IsZero}; }
  static Opr fst(Ty a, Ty b) { return {Kind::Fst, std::move(a), std::move(b)}; }
  static Opr snd(Ty a, Ty b) { return {Kind::Snd, std::move(a), std::move(b)}; }

  friend bool operator==(const Opr& x, const Opr& y);
};

[[nodiscard]] Ty typeof_opr(const Opr& f);

struct Stmt;

/// Pure, heap-read-only expressions.
struct Expr {
  struct Var {
    Name name;
    friend bool operator==(const Var&, const Var&) = default;
  };
  struct Lit {
    Const value;
    friend bool operator==(const Lit&, const Lit&) = default;
  };
  struct PrimApp {
    Opr op;
    Box<Expr> arg;
    friend bool operator==(const PrimApp&, const PrimApp&) = default;
  };
  struct MkPair {
    Box<Expr> fst;
    Box<Expr> snd;
    friend bool operator==(const MkPair&, const MkPair&) = default;
  };
  struct Lam {
    Name param;
    Ty param_ty;
    Box<Stmt> body;
    friend bool operator==(const Lam&, const Lam&) = default;
  };
  struct Deref {
    Box<Expr> ref;
    friend bool operator==(const Deref&, const Deref&) = default;
  };

  using Node = std::variant<Var, Lit, PrimApp, MkPair, Lam, Deref>;
  Node node;

  friend bool operator==(const Expr&, const Expr&) = default;
};

/// Effectful statements in A-normal form. Every control path ends in
/// Return or TailCall.
struct Stmt {
  struct Let {
    Name var;
    Expr rhs;
    Box<Stmt> body;
    friend bool operator==(const Let&, const Let&) = default;
  };
  struct Return {
    Expr value;
    friend bool operator==(const Return&, const Return&) = default;
  };
  struct Call {
    Name var;
    Expr fn;
    Expr arg;
    Box<Stmt> body;
    friend bool operator==(const Call&, const Call&) = default;
  };
  struct TailCall {
    Expr fn;
    Expr arg;
    friend bool operator==(const TailCall&, const TailCall&) = default;
  };
  struct Alloc {
    Name var;
    Ty cell_ty;
    Expr init;
    Box<Stmt> body;
    friend bool operator==(const Alloc&, const Alloc&) = default;
  };
  struct Update {
    Expr ref;
    Expr value;
    Box<Stmt> body;
    friend bool operator==(const Update&, const Update&) = default;
  };
  struct DynUpdate {
    Expr ref;
    Expr value;
    Ty ann;
    Box<Stmt> body;
    friend bool operator==(const DynUpdate&, const DynUpdate&) = default;
  };
  struct Cast {
    Name var;
    Expr value;
    Ty src;
    Ty tgt;
    Box<Stmt> body;
    friend bool operator==(const Cast&, const Cast&) = default;
  };
  struct DynDeref {
    Name var;
    Expr ref;
    Ty ann;
    Box<Stmt> body;
    friend bool operator==(const DynDeref&, const DynDeref&) = default;
  };

  using Node = std::variant<Let, Return, Call, TailCall, Alloc, Update, DynUpdate, Cast, DynDeref>;
  Node node;

  friend bool operator==(const Stmt&, const Stmt&) = default;
};

/// Builders for IR terms.
namespace ir {

[[nodiscard]] Expr var(Name x);
[[nodiscard]] Expr lit(Const c);
[[nodiscard]] Expr prim(Opr f, Expr arg);
[[nodiscard]] Expr pair(Expr a, Expr b);
[[nodiscard]] Expr lam(Name x, Ty param_ty, Stmt body);
[[nodiscard]] Expr deref(Expr r);

[[nodiscard]] Stmt let(Name x, Expr rhs, Stmt body);
[[nodiscard]] Stmt ret(Expr e);
[[nodiscard]] Stmt call(Name x, Expr fn, Expr arg, Stmt body);
[[nodiscard]] Stmt tail_call(Expr fn, Expr arg);
[[nodiscard]] Stmt alloc(Name x, Ty cell_ty, Expr init, Stmt body);
[[nodiscard]] Stmt update(Expr r, Expr v, Stmt body);
[[nodiscard]] Stmt dyn_update(Expr r, Expr v, Ty ann, Stmt body);
[[nodiscard]] Stmt cast(Name x, Expr e, Ty src, Ty tgt, Stmt body);
[[nodiscard]] Stmt dyn_deref(Name x, Expr r, Ty ann, Stmt body);

}  // namespace ir

/// IR as s-expressions; `print_ir` output is accepted by `read_ir`.
///
///   (let x e s)  (return e)  (call x f a s)  (tail-call f a)
///   (alloc x T e s)  (update r v s)  (dyn-update r v T s)
///   (cast x e A B s)  (dyn-deref x r T s)
///   e ::= x | n | #t | #f | (succ e) | (prev e) | (zero? e)
///       | (fst A B e) | (snd A B e) | (pair e e) | (lambda (x T) s) | (! e)
[[nodiscard]] std::string print_ir(const Stmt& s);
[[nodiscard]] std::string print_ir(const Expr& e);

/// Throws ParseError.
[[nodiscard]] Stmt read_ir(std::string_view text);

struct SExpr;

/// Reads `int | bool | dyn | (-> A B) | (pair-ty A B) | (ref-ty A)`; also
/// accepts the short spellings `(ref A)`, `(pair A B)` and `(× A B)`.
/// Throws ParseError.
[[nodiscard]] Ty read_type(const SExpr& sx);

/// Integer literal `-?[0-9]+`, or nullopt if the atom is not one.
[[nodiscard]] std::optional<BigInt> read_int_literal(std::string_view atom);

/// Counts the SCast, SDynDeref and SDynUpdate nodes, including those under
/// lambdas.
struct CastCensus {
  int casts = 0;
  int dyn_derefs = 0;
  int dyn_updates = 0;
  int ref_casts = 0;  // casts whose source or target mentions a Ref type
};
[[nodiscard]] CastCensus census(const Stmt& s);

}  // namespace monoref
