#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "monoref/machine.hpp"
#include "monoref/sexpr.hpp"

namespace monoref {

/// Type environment, newest binding first.
using TyEnv = AssocList<Name, Ty>;

/// Heap typing Σ.
using StoreTy = std::map<Address, Ty>;

/// A type error. `path` locates the failing node in the IR (outermost
/// first); surface errors carry a source position instead.
struct Diagnostic {
  std::string message;
  std::vector<std::string> path;
  std::optional<SourcePos> pos;

  [[nodiscard]] std::string str() const;
};

/// Either a value or a diagnostic.
template <class T>
class [[nodiscard]] Checked {
 public:
  Checked(T value) : state_(std::in_place_index<0>, std::move(value)) {}
  Checked(Diagnostic d) : state_(std::in_place_index<1>, std::move(d)) {}

  [[nodiscard]] bool ok() const { return state_.index() == 0; }
  explicit operator bool() const { return ok(); }
  [[nodiscard]] const T& value() const& { return std::get<0>(state_); }
  [[nodiscard]] T&& value() && { return std::get<0>(std::move(state_)); }
  const T& operator*() const& { return value(); }
  const T* operator->() const { return &value(); }
  [[nodiscard]] const Diagnostic& error() const { return std::get<1>(state_); }

 private:
  std::variant<T, Diagnostic> state_;
};

/// Records, for every lambda body the checker visits, the type environment
/// in force where the lambda appears. Closures created from that lambda
/// carry a run-time environment that lines up with it binding for binding,
/// which is what makes the closure typing rule decidable.
class LamTypings {
 public:
  void record(const Box<Stmt>& body, TyEnv gamma);
  [[nodiscard]] const TyEnv* find(const Stmt* body) const;
  [[nodiscard]] std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    Box<Stmt> keep_alive;
    TyEnv gamma;
  };
  std::unordered_map<const Stmt*, Entry> entries_;
};

[[nodiscard]] Checked<Ty> check_expr(const TyEnv& gamma, const Expr& e, LamTypings* typings = nullptr);
[[nodiscard]] Checked<Ty> check_stmt(const TyEnv& gamma, const Stmt& s, LamTypings* typings = nullptr);

[[nodiscard]] StoreTy derive_store_typing(const Heap& mu);

/// Σ ⊢ v : A.
///
/// Closures: the environment typing is taken from `typings` when the body
/// was seen by the checker, recovered from the wrapper shape for
/// function-cast wrappers, and otherwise reconstructed from the captured
/// values' minimal run-time types.
[[nodiscard]] bool wt_val(const StoreTy& sigma, const Val& v, const Ty& a, const LamTypings* typings = nullptr);

/// Γ;Σ ⊢ ρ, binding for binding.
[[nodiscard]] bool wt_env(const TyEnv& gamma, const StoreTy& sigma, const Env& rho,
                          const LamTypings* typings = nullptr);

[[nodiscard]] bool wt_casted(const StoreTy& sigma, const CastedVal& cv, const Ty& a,
                             const LamTypings* typings = nullptr);

[[nodiscard]] bool wt_heap(const StoreTy& sigma, const Heap& mu, const std::set<Address>& active,
                           const LamTypings* typings = nullptr);

/// Σ' ⊑ Σ: same domain, each type in Σ' ⊑ the one in Σ.
[[nodiscard]] bool store_lesseq(const StoreTy& after, const StoreTy& before);

[[nodiscard]] bool wt_observable(const Observable& o, const Ty& a);

/// Minimal run-time type of a value, if one can be determined.
[[nodiscard]] std::optional<Ty> runtime_type(const StoreTy& sigma, const Val& v,
                                             const LamTypings* typings = nullptr);

}  // namespace monoref
