#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "monoref/plist.hpp"
#include "monoref/syntax.hpp"

namespace monoref {

using Address = std::size_t;

struct Val;

/// Run-time environment, newest binding first.
using Env = AssocList<Name, Val>;

struct VConst {
  Const value;
  friend bool operator==(const VConst&, const VConst&) = default;
};

struct VPair {
  Box<Val> fst;
  Box<Val> snd;
  friend bool operator==(const VPair&, const VPair&) = default;
};

struct Closure {
  Name param;
  Ty param_ty;
  Box<Stmt> body;
  Env env;
  friend bool operator==(const Closure& a, const Closure& b);
};

struct VRef {
  Address addr;
  friend bool operator==(const VRef&, const VRef&) = default;
};

/// A value of non-★ type `src` boxed at ★. `payload` is never itself an
/// Inject.
struct Inject {
  Box<Val> payload;
  Ty src;
  friend bool operator==(const Inject&, const Inject&) = default;
};

struct Val {
  using Node = std::variant<VConst, VPair, Closure, VRef, Inject>;
  Node node;

  template <class T>
  [[nodiscard]] const T* as() const {
    return std::get_if<T>(&node);
  }

  friend bool operator==(const Val&, const Val&) = default;
};

namespace val {

[[nodiscard]] Val integer(BigInt n);
[[nodiscard]] Val boolean(bool b);
[[nodiscard]] Val constant(Const c);
[[nodiscard]] Val pair(Val a, Val b);
[[nodiscard]] Val ref(Address a);
[[nodiscard]] Val inject(Val v, Ty src);
[[nodiscard]] Val closure(Name param, Ty param_ty, Stmt body, Env env);

}  // namespace val

/// Heap cell contents: a plain value, or a value with a pending cast that
/// the active-address worklist has yet to perform.
struct CastedVal {
  struct Plain {
    Val v;
    friend bool operator==(const Plain&, const Plain&) = default;
  };
  struct Pending {
    Val v;
    Ty src;
    Ty tgt;
    friend bool operator==(const Pending&, const Pending&) = default;
  };

  std::variant<Plain, Pending> node;

  [[nodiscard]] static CastedVal plain(Val v) { return CastedVal{Plain{std::move(v)}}; }
  [[nodiscard]] static CastedVal pending(Val v, Ty src, Ty tgt) {
    return CastedVal{Pending{std::move(v), std::move(src), std::move(tgt)}};
  }
  [[nodiscard]] bool is_plain() const { return node.index() == 0; }
  [[nodiscard]] const Plain* as_plain() const { return std::get_if<Plain>(&node); }
  [[nodiscard]] const Pending* as_pending() const { return std::get_if<Pending>(&node); }

  friend bool operator==(const CastedVal&, const CastedVal&) = default;
};

class Observable {
 public:
  enum class Kind : std::uint8_t { Pair, Fun, Con, Addr, Inj, Stuck, TimeOut, CastError };

  [[nodiscard]] static Observable pair(Observable a, Observable b);
  [[nodiscard]] static Observable con(Const c);
  [[nodiscard]] static Observable of(Kind k);  // any nullary kind
  [[nodiscard]] static Observable from(Failure f);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] const Const& constant() const { return *con_; }
  [[nodiscard]] const Observable& fst() const { return children_.at(0); }
  [[nodiscard]] const Observable& snd() const { return children_.at(1); }

  /// Canonical rendering: decimal integers, `#t`/`#f`, `(pair O O)`, `#fun`,
  /// `#addr`, `#inj`, `error: stuck`, `timeout`, `error: cast`.
  [[nodiscard]] std::string str() const;

  friend bool operator==(const Observable&, const Observable&) = default;

 private:
  Kind kind_ = Kind::Stuck;
  std::optional<Const> con_;
  std::vector<Observable> children_;
};

[[nodiscard]] Observable observe(const Val& v);

/// Debug rendering of run-time values.
[[nodiscard]] std::string show(const Val& v);
[[nodiscard]] std::string show(const CastedVal& cv);

}  // namespace monoref
