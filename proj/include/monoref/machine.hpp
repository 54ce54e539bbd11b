#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "monoref/result.hpp"
#include "monoref/values.hpp"

namespace monoref {

/// A heap cell: contents plus the run-time type tag of the cell.
struct Cell {
  CastedVal content;
  Ty tag;
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Tagged heap. Addresses are dense: a fresh address is the current size,
/// and cells are never reclaimed. Writes are strong updates.
class Heap {
 public:
  Heap() = default;

  [[nodiscard]] std::size_t size() const { return cells_.size(); }
  [[nodiscard]] bool contains(Address a) const { return a < cells_.size(); }

  Address allocate(Cell cell) {
    cells_.push_back(std::move(cell));
    return cells_.size() - 1;
  }

  [[nodiscard]] const Cell* find(Address a) const { return contains(a) ? &cells_[a] : nullptr; }

  /// Stuck on an unallocated address.
  [[nodiscard]] Result<Cell> lookup(Address a) const {
    if (!contains(a)) return Failure::Stuck;
    return cells_[a];
  }

  /// Precondition: contains(a).
  void store(Address a, Cell cell) { cells_.at(a) = std::move(cell); }

  [[nodiscard]] const std::vector<Cell>& cells() const { return cells_; }

  friend bool operator==(const Heap&, const Heap&) = default;

 private:
  std::vector<Cell> cells_;
};

struct Frame {
  Name ret_var;
  Stmt cont;
  Env saved_env;
  friend bool operator==(const Frame&, const Frame&) = default;
};

using Stack = PList<Frame>;

/// Worklist of addresses with pending casts; head first, duplicates allowed.
using ActiveList = std::vector<Address>;

struct State {
  Stmt stmt;
  Env env;
  Stack stack;
  Heap heap;
  ActiveList active;

  [[nodiscard]] static State initial(Stmt s) { return State{std::move(s), {}, {}, {}, {}}; }

  friend bool operator==(const State&, const State&) = default;
};

[[nodiscard]] Result<Val> delta(const Opr& f, const Val& v);
[[nodiscard]] Result<Address> to_addr(const Val& v);
[[nodiscard]] Result<Val> to_val(const CastedVal& cv);

/// Pure expression evaluation. Only safe when no casts are pending.
[[nodiscard]] Result<Val> eval(const Expr& e, const Env& rho, const Heap& mu);

/// Names used inside the function-cast wrapper. The wrapped function is the
/// only binding in the wrapper's environment, so they cannot capture.
namespace wrap_names {
inline const Name param = "$w0";
inline const Name fn = "$w1";
inline const Name result = "$w2";
inline const Name arg = "$w3";
inline const Name cast_result = "$w4";
}  // namespace wrap_names

/// Body of the wrapper for a cast A→B ⇒ C→D: cast the argument C⇒A, call
/// the wrapped function, cast the result B⇒D, return it.
[[nodiscard]] Stmt wrap_body(const Ty& a, const Ty& b, const Ty& c, const Ty& d);

[[nodiscard]] Val wrap(Val v, const Ty& a, const Ty& b, const Ty& c, const Ty& d);

/// Pending casts compose by retargeting; they never stack.
[[nodiscard]] CastedVal mk_vcast(const CastedVal& cv, const Ty& c, const Ty& d);

struct CastOutcome {
  Val value;
  Heap heap;
  ActiveList active;
};

/// Casts `v` from `a` to `b`. Casting a reference never wraps it: the
/// referenced cell is retyped to the meet of its tag and the target cell
/// type, with the actual value conversion queued on the active list.
[[nodiscard]] Result<CastOutcome> cast(const Val& v, const Ty& a, const Ty& b, Heap mu, ActiveList active);

enum class StepRule : std::uint8_t {
  ActiveDrop,       // head address holds a plain value
  ActiveCommit,     // pending cast finished and the tag is unchanged
  ActiveSupersede,  // pending cast finished but the tag moved meanwhile
  Let,
  Return,
  Call,
  TailCall,
  Alloc,
  Update,
  DynUpdate,
  Cast,
  DynDeref,
};

[[nodiscard]] std::string_view to_string(StepRule r);

/// One machine transition. Final states and ill-shaped states are Stuck.
/// If `fired` is non-null it receives the rule that was attempted.
[[nodiscard]] Result<State> step(State s, StepRule* fired = nullptr);

/// Return with empty stack and empty active list.
[[nodiscard]] bool is_final(const State& s);

/// Called after every successful transition with the 1-based step index.
using StepObserver = std::function<void(std::size_t index, StepRule rule, const State& after)>;

inline constexpr std::uint64_t kDefaultFuel = 1'000'000;

/// Fuelled driver: each transition and the final read-out of the return
/// expression consume one unit.
[[nodiscard]] Observable steps(std::uint64_t fuel, State s, const StepObserver& observer = {});

[[nodiscard]] Observable run(const Stmt& s, std::uint64_t fuel = kDefaultFuel, const StepObserver& observer = {});

}  // namespace monoref
