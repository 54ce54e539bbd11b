#pragma once

// Random generators shared by the property tests and the acceptance runner.
// Everything is driven by an explicit std::mt19937_64 so runs are
// reproducible from a seed.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "monoref/typecheck.hpp"

namespace monoref::testing {

using Rng = std::mt19937_64;

/// Every type of depth ≤ max_depth (base types and dyn have depth 1).
std::vector<Ty> enumerate_types(int max_depth);

/// Random type; `depth` bounds the height.
Ty random_type(Rng& rng, int depth);

/// A random P with P ⊑ t.
Ty more_precise(Rng& rng, const Ty& t, int depth);

/// A random S with t ⊑ S.
Ty less_precise(Rng& rng, const Ty& t);

/// A random S with S ~ t.
Ty consistent_with(Rng& rng, const Ty& t, int depth);

/// Closed, well-typed surface program text. Biased toward reference
/// allocation, reference casts and dynamically typed operations.
std::string random_program(Rng& rng, int size);

/// Inputs for one cast: Σ ⊢ v : a and the heap is well typed with the
/// given active list. `b` is the cast target.
struct CastInstance {
  Val v;
  Ty a;
  Ty b;
  Heap heap;
  ActiveList active;
  LamTypings typings;
};

CastInstance random_cast_instance(Rng& rng);

/// A typed closing environment and heap plus an expression over it, for
/// evaluation-safety checks.
struct EvalInstance {
  TyEnv gamma;
  Env rho;
  Heap heap;
  Expr expr;
  LamTypings typings;
};

EvalInstance random_eval_instance(Rng& rng);

}  // namespace monoref::testing
