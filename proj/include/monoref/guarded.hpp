#pragma once

// Guarded references for the same IR: a reference cast wraps the reference
// in a proxy holding the two cell types, reads cast src⇒tgt and writes cast
// tgt⇒src. The heap is never retyped and there is no active list.

#include <cstdint>
#include <variant>
#include <vector>

#include "monoref/machine.hpp"

namespace monoref::guarded {

struct GVal;
using GEnv = AssocList<Name, GVal>;

struct GPair {
  Box<GVal> fst;
  Box<GVal> snd;
  friend bool operator==(const GPair&, const GPair&) = default;
};

struct GClosure {
  Name param;
  Ty param_ty;
  Box<Stmt> body;
  GEnv env;
  friend bool operator==(const GClosure& a, const GClosure& b);
};

struct GInject {
  Box<GVal> payload;
  Ty src;
  friend bool operator==(const GInject&, const GInject&) = default;
};

/// Mediates Ref src ⇒ Ref tgt. `inner` is a VRef or another proxy.
struct GProxy {
  Box<GVal> inner;
  Ty src;
  Ty tgt;
  friend bool operator==(const GProxy&, const GProxy&) = default;
};

struct GVal {
  using Node = std::variant<VConst, GPair, GClosure, VRef, GInject, GProxy>;
  Node node;

  template <class T>
  [[nodiscard]] const T* as() const {
    return std::get_if<T>(&node);
  }

  friend bool operator==(const GVal&, const GVal&) = default;
};

struct GCell {
  GVal v;
  Ty tag;  // allocation type; never consulted by reads
  friend bool operator==(const GCell&, const GCell&) = default;
};

using GHeap = std::vector<GCell>;

struct GFrame {
  Name ret_var;
  Stmt cont;
  GEnv saved_env;
  friend bool operator==(const GFrame&, const GFrame&) = default;
};

struct GState {
  Stmt stmt;
  GEnv env;
  PList<GFrame> stack;
  GHeap heap;

  [[nodiscard]] static GState initial(Stmt s) { return GState{std::move(s), {}, {}, {}}; }
};

/// Pure value cast; never touches the heap.
[[nodiscard]] Result<GVal> cast_g(const GVal& v, const Ty& a, const Ty& b);

/// Reads through a proxy chain, applying each layer's cast innermost first.
[[nodiscard]] Result<GVal> gread(const GVal& ref, const GHeap& mu);

/// Writes through a proxy chain, applying each layer's reverse cast
/// outermost first, then stores at the underlying address.
[[nodiscard]] Result<GHeap> gwrite(const GVal& ref, const GVal& v, GHeap mu);

[[nodiscard]] Result<GVal> eval_g(const Expr& e, const GEnv& rho, const GHeap& mu);

[[nodiscard]] Result<GState> step_g(GState s, StepRule* fired = nullptr);

[[nodiscard]] bool is_final(const GState& s);

[[nodiscard]] Observable observe_g(const GVal& v);

using GStepObserver = std::function<void(std::size_t index, StepRule rule, const GState& after)>;

[[nodiscard]] Observable steps_g(std::uint64_t fuel, GState s, const GStepObserver& observer = {});

[[nodiscard]] Observable run_g(const Stmt& s, std::uint64_t fuel = kDefaultFuel,
                               const GStepObserver& observer = {});

}  // namespace monoref::guarded
