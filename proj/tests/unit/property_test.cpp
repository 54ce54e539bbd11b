#include <gtest/gtest.h>

#include <set>

#include "generators.hpp"
#include "monoref/guarded.hpp"
#include "monoref/surface.hpp"

namespace monoref {
namespace {

std::set<Address> active_set(const ActiveList& l) { return {l.begin(), l.end()}; }

// Σ restricted to the addresses of `before`.
StoreTy restrict_to(const StoreTy& sigma, const StoreTy& before) {
  StoreTy out;
  for (const auto& [a, t] : sigma) {
    if (before.contains(a)) out.emplace(a, t);
  }
  return out;
}

TEST(Generators, ProgramsAreWellTyped) {
  testing::Rng rng(1);
  for (int i = 0; i < 400; ++i) {
    const std::string text = testing::random_program(rng, 1 + i % 24);
    auto c = surface::compile(text);
    ASSERT_TRUE(c.ok()) << text << "\n" << c.error().str();
  }
}

TEST(Generators, CastInstancesSatisfyTheirPreconditions) {
  testing::Rng rng(2);
  for (int i = 0; i < 500; ++i) {
    const auto inst = testing::random_cast_instance(rng);
    const StoreTy sigma = derive_store_typing(inst.heap);
    ASSERT_TRUE(wt_val(sigma, inst.v, inst.a, &inst.typings)) << show(inst.v) << " : " << inst.a.str();
    ASSERT_TRUE(wt_heap(sigma, inst.heap, active_set(inst.active), &inst.typings));
  }
}

// Heap well-typedness and monotonicity of Σ hold after every transition.
TEST(Preservation, HeapInvariantsAlongRuns) {
  testing::Rng rng(3);
  int steps_checked = 0;
  for (int i = 0; i < 150; ++i) {
    const std::string text = testing::random_program(rng, 18);
    auto c = surface::compile(text);
    ASSERT_TRUE(c.ok());
    LamTypings typings;
    ASSERT_TRUE(check_stmt({}, c->ir, &typings).ok());
    StoreTy prev;
    bool failed = false;
    const Observable o = run(c->ir, 5000, [&](std::size_t index, StepRule rule, const State& after) {
      if (failed) return;
      const StoreTy sigma = derive_store_typing(after.heap);
      if (!wt_heap(sigma, after.heap, active_set(after.active), &typings)) {
        ADD_FAILURE() << "heap ill-typed after step " << index << " (" << to_string(rule) << ")\n" << text;
        failed = true;
      }
      if (!store_lesseq(restrict_to(sigma, prev), prev)) {
        ADD_FAILURE() << "store typing grew after step " << index << "\n" << text;
        failed = true;
      }
      prev = sigma;
      ++steps_checked;
    });
    ASSERT_FALSE(failed);
    ASSERT_NE(o.kind(), Observable::Kind::Stuck) << text;
    ASSERT_TRUE(wt_observable(o, c->type)) << text << " => " << o.str();
  }
  EXPECT_GT(steps_checked, 1000);
}

TEST(Determinism, RepeatedRunsAgree) {
  testing::Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const Stmt ir = surface::compile(testing::random_program(rng, 16))->ir;
    ASSERT_EQ(run(ir, 5000), run(ir, 5000));
    ASSERT_EQ(guarded::run_g(ir, 5000), guarded::run_g(ir, 5000));
  }
}

TEST(EvalSafety, WellTypedExpressionsEvaluate) {
  testing::Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const auto inst = testing::random_eval_instance(rng);
    LamTypings typings = inst.typings;
    auto t = check_expr(inst.gamma, inst.expr, &typings);
    ASSERT_TRUE(t.ok()) << print_ir(inst.expr) << "\n" << t.error().str();
    const StoreTy sigma = derive_store_typing(inst.heap);
    ASSERT_TRUE(wt_env(inst.gamma, sigma, inst.rho, &typings));
    auto v = eval(inst.expr, inst.rho, inst.heap);
    ASSERT_TRUE(v.ok()) << print_ir(inst.expr);
    ASSERT_TRUE(wt_val(sigma, *v, *t, &typings)) << print_ir(inst.expr) << " => " << show(*v);
  }
}

TEST(CastSafety, SuccessfulCastsPreserveTyping) {
  testing::Rng rng(6);
  int succeeded = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto inst = testing::random_cast_instance(rng);
    const StoreTy sigma = derive_store_typing(inst.heap);
    auto r = cast(inst.v, inst.a, inst.b, inst.heap, inst.active);
    ASSERT_FALSE(r.is(Failure::Stuck)) << show(inst.v) << " : " << inst.a.str() << " => " << inst.b.str();
    if (!r.ok()) continue;
    ++succeeded;
    const StoreTy after = derive_store_typing(r->heap);
    ASSERT_TRUE(wt_val(after, r->value, inst.b, &inst.typings))
        << show(inst.v) << " : " << inst.a.str() << " => " << inst.b.str() << " gave " << show(r->value);
    ASSERT_TRUE(wt_heap(after, r->heap, active_set(r->active), &inst.typings));
    ASSERT_TRUE(store_lesseq(after, sigma));
  }
  EXPECT_GT(succeeded, 100);
}

}  // namespace
}  // namespace monoref
