#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "monoref/result.hpp"

namespace monoref {

/// Types: Int | Bool | A × B | A → B | Ref A | ★.
///
/// A `Ty` is an immutable tree shared by pointer, so copies are cheap.
/// Equality is structural.
class Ty {
 public:
  enum class Kind : std::uint8_t { Int, Bool, Pair, Arrow, Ref, Dyn };

  [[nodiscard]] static Ty Int();
  [[nodiscard]] static Ty Bool();
  [[nodiscard]] static Ty Dyn();
  [[nodiscard]] static Ty Pair(Ty left, Ty right);
  [[nodiscard]] static Ty Arrow(Ty dom, Ty cod);
  [[nodiscard]] static Ty Ref(Ty cell);

  [[nodiscard]] Kind kind() const;
  [[nodiscard]] bool is(Kind k) const { return kind() == k; }
  [[nodiscard]] bool is_dyn() const { return is(Kind::Dyn); }

  // Children. Pair: left/right. Arrow: dom/cod. Ref: cell.
  [[nodiscard]] const Ty& left() const;
  [[nodiscard]] const Ty& right() const;
  [[nodiscard]] const Ty& dom() const { return left(); }
  [[nodiscard]] const Ty& cod() const { return right(); }
  [[nodiscard]] const Ty& cell() const { return left(); }

  /// Canonical s-expression rendering: `int`, `(-> int bool)`,
  /// `(pair-ty int dyn)`, `(ref-ty dyn)`.
  [[nodiscard]] std::string str() const;

  friend bool operator==(const Ty& a, const Ty& b);

 private:
  struct Node;
  explicit Ty(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// A ⊑ B: A is less or equally dynamic than B.
[[nodiscard]] bool lesseq(const Ty& a, const Ty& b);

/// Greatest lower bound under ⊑; CastError when the head constructors clash.
[[nodiscard]] Result<Ty> meet(const Ty& a, const Ty& b);

/// True iff ★ occurs nowhere in the type.
[[nodiscard]] bool is_static(const Ty& a);

/// Top-level constructor with all arguments collapsed to ★.
[[nodiscard]] Ty ground(const Ty& a);

/// Height of the type tree; base types and ★ have depth 1.
[[nodiscard]] int depth(const Ty& a);

[[nodiscard]] bool contains_ref(const Ty& a);

}  // namespace monoref
