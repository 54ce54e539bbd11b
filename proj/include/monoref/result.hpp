#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <variant>

namespace monoref {

/// The three ways a run-time computation can fail. `Stuck` marks a broken
/// internal invariant and is unreachable from well-typed programs;
/// `CastError` is the user-visible run-time failure.
enum class Failure : std::uint8_t { Stuck, TimeOut, CastError };

[[nodiscard]] constexpr std::string_view to_string(Failure f) {
  switch (f) {
    case Failure::Stuck: return "stuck";
    case Failure::TimeOut: return "timeout";
    case Failure::CastError: return "cast error";
  }
  return "?";
}

template <class T>
class [[nodiscard]] Result {
 public:
  Result(T value) : state_(std::in_place_index<0>, std::move(value)) {}
  Result(Failure f) : state_(std::in_place_index<1>, f) {}

  [[nodiscard]] bool ok() const { return state_.index() == 0; }
  explicit operator bool() const { return ok(); }

  [[nodiscard]] T& value() & { return std::get<0>(state_); }
  [[nodiscard]] const T& value() const& { return std::get<0>(state_); }
  [[nodiscard]] T&& value() && { return std::get<0>(std::move(state_)); }

  T& operator*() & { return value(); }
  const T& operator*() const& { return value(); }
  T* operator->() { return &value(); }
  const T* operator->() const { return &value(); }

  /// Precondition: !ok().
  [[nodiscard]] Failure failure() const { return std::get<1>(state_); }

  [[nodiscard]] bool is(Failure f) const { return !ok() && failure() == f; }

 private:
  std::variant<T, Failure> state_;
};

}  // namespace monoref

#define MONOREF_CONCAT_INNER(a, b) a##b
#define MONOREF_CONCAT(a, b) MONOREF_CONCAT_INNER(a, b)

/// Monadic bind: evaluates the Result-valued expression, returns its failure
/// from the enclosing function, or binds the success value to `lhs`.
#define MONOREF_TRY(lhs, ...) \
  MONOREF_TRY_IMPL(MONOREF_CONCAT(monoref_try_, __LINE__), lhs, __VA_ARGS__)

#define MONOREF_TRY_IMPL(tmp, lhs, ...) \
  auto tmp = (__VA_ARGS__);             \
  if (!tmp.ok()) return tmp.failure();  \
  lhs = std::move(tmp).value()
