#include <gtest/gtest.h>

#include "monoref/machine.hpp"
#include "monoref/typecheck.hpp"

namespace monoref {
namespace {

const Ty I = Ty::Int();
const Ty B = Ty::Bool();
const Ty D = Ty::Dyn();

Val four() { return val::integer(4); }
Val inj4() { return val::inject(four(), I); }

Heap heap_of(std::initializer_list<Cell> cells) {
  Heap h;
  for (const Cell& c : cells) (void)h.allocate(c);
  return h;
}

Cell plain(Val v, Ty tag) { return Cell{CastedVal::plain(std::move(v)), std::move(tag)}; }

// Steps to a final state and evaluates its return expression.
Result<Val> run_to_value(State s, int limit = 1000) {
  for (int i = 0; i < limit && !is_final(s); ++i) {
    auto next = step(std::move(s));
    if (!next) return next.failure();
    s = std::move(next).value();
  }
  if (!is_final(s)) return Failure::TimeOut;
  return eval(std::get<Stmt::Return>(s.stmt.node).value, s.env, s.heap);
}

Val succ_closure() { return val::closure("n", I, ir::ret(ir::prim(Opr::succ(), ir::var("n"))), Env{}); }
Val id_closure(const Ty& t) { return val::closure("n", t, ir::ret(ir::var("n")), Env{}); }

State apply(Val f, Val arg) {
  Env env = extend(Name("a"), std::move(arg), extend(Name("f"), std::move(f), Env{}));
  return State{ir::call("r", ir::var("f"), ir::var("a"), ir::ret(ir::var("r"))), env, {}, {}, {}};
}

TEST(Lookup, FirstMatchWins) {
  AssocList<std::string, int> xs = extend(std::string("x"), 1, extend(std::string("x"), 2, {}));
  EXPECT_EQ(*lookup(std::string("x"), xs), 1);
  EXPECT_TRUE(lookup(std::string("y"), AssocList<std::string, int>{}).is(Failure::Stuck));
  AssocList<std::string, int> ys = extend(std::string("x"), 1, extend(std::string("y"), 2, {}));
  EXPECT_EQ(*lookup(std::string("y"), ys), 2);
}

TEST(Delta, Operators) {
  EXPECT_EQ(*delta(Opr::succ(), four()), val::integer(5));
  EXPECT_EQ(*delta(Opr::prev(), four()), val::integer(3));
  EXPECT_EQ(*delta(Opr::is_zero(), val::integer(0)), val::boolean(true));
  EXPECT_EQ(*delta(Opr::is_zero(), four()), val::boolean(false));
  EXPECT_EQ(*delta(Opr::fst(I, B), val::pair(four(), val::boolean(true))), four());
  EXPECT_EQ(*delta(Opr::snd(I, B), val::pair(four(), val::boolean(true))), val::boolean(true));
  EXPECT_TRUE(delta(Opr::succ(), val::boolean(true)).is(Failure::Stuck));
  EXPECT_TRUE(delta(Opr::fst(I, I), four()).is(Failure::Stuck));
}

TEST(Delta, IntegersAreUnbounded) {
  const BigInt big = BigInt(1) << 200;
  EXPECT_EQ(*delta(Opr::succ(), val::integer(big)), val::integer(big + 1));
  EXPECT_EQ(*delta(Opr::prev(), val::integer(-big)), val::integer(-big - 1));
}

TEST(ToAddr, OnlyBareReferences) {
  EXPECT_EQ(*to_addr(val::ref(3)), 3u);
  EXPECT_TRUE(to_addr(val::integer(3)).is(Failure::Stuck));
  EXPECT_TRUE(to_addr(val::inject(val::ref(3), Ty::Ref(I))).is(Failure::Stuck));
}

TEST(ToVal, PendingCellsAreUnreadable) {
  EXPECT_EQ(*to_val(CastedVal::plain(val::integer(7))), val::integer(7));
  EXPECT_TRUE(to_val(CastedVal::pending(val::integer(7), I, I)).is(Failure::Stuck));
  EXPECT_EQ(*to_val(CastedVal::plain(val::ref(0))), val::ref(0));
}

TEST(Eval, Examples) {
  const Env rho = extend(Name("x"), val::integer(9), Env{});
  EXPECT_EQ(*eval(ir::var("x"), rho, {}), val::integer(9));
  const Env r = extend(Name("r"), val::ref(0), Env{});
  EXPECT_EQ(*eval(ir::deref(ir::var("r")), r, heap_of({plain(val::integer(7), I)})), val::integer(7));
  const Heap pending = heap_of({Cell{CastedVal::pending(val::integer(7), I, I), I}});
  EXPECT_TRUE(eval(ir::deref(ir::var("r")), r, pending).is(Failure::Stuck));
  EXPECT_TRUE(eval(ir::var("nope"), rho, {}).is(Failure::Stuck));
}

TEST(Eval, LambdaCapturesEnvironment) {
  const Env rho = extend(Name("x"), val::integer(9), Env{});
  auto v = eval(ir::lam("y", I, ir::ret(ir::var("x"))), rho, {});
  ASSERT_TRUE(v.ok());
  const auto* c = v->as<Closure>();
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->env, rho);
}

TEST(Wrap, IdentityCastToDynRoundTripsInjection) {
  const Val w = wrap(id_closure(I), I, I, D, D);
  auto r = run_to_value(apply(w, inj4()));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r, inj4());
}

TEST(Wrap, IdentityTypesBehaveAsWrappedFunction) {
  const Val w = wrap(succ_closure(), I, I, I, I);
  EXPECT_EQ(*run_to_value(apply(w, four())), val::integer(5));
}

TEST(Wrap, ArgumentCastFailure) {
  const Val w = wrap(succ_closure(), I, I, B, B);
  EXPECT_TRUE(run_to_value(apply(w, val::boolean(true))).is(Failure::CastError));
}

TEST(Wrap, ClosureBindsOnlyTheWrappedFunction) {
  const Val w = wrap(succ_closure(), I, I, D, D);
  const auto* c = w.as<Closure>();
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->param_ty, D);
  ASSERT_EQ(c->env.size(), 1u);
  EXPECT_EQ(c->env.head().first, wrap_names::fn);
}

TEST(MkVcast, ComposesByRetargeting) {
  EXPECT_EQ(mk_vcast(CastedVal::plain(four()), I, I), CastedVal::pending(four(), I, I));
  const Ty dd = Ty::Pair(D, D);
  const Val v = val::inject(val::pair(four(), four()), Ty::Pair(I, I));
  EXPECT_EQ(mk_vcast(CastedVal::pending(v, D, dd), dd, Ty::Pair(I, D)), CastedVal::pending(v, D, Ty::Pair(I, D)));
  EXPECT_EQ(mk_vcast(CastedVal::plain(inj4()), D, I), CastedVal::pending(inj4(), D, I));
}

TEST(Cast, BaseIdentity) {
  auto r = cast(four(), I, I, {}, {});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->value, four());
  EXPECT_EQ(r->heap.size(), 0u);
  EXPECT_TRUE(r->active.empty());
}

TEST(Cast, ProjectionGroundMismatch) {
  EXPECT_TRUE(cast(val::inject(val::boolean(true), B), D, I, {}, {}).is(Failure::CastError));
}

TEST(Cast, ProjectionAndInjection) {
  auto p = cast(inj4(), D, I, {}, {});
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p->value, four());
  auto q = cast(four(), I, D, {}, {});
  ASSERT_TRUE(q.ok());
  EXPECT_EQ(q->value, inj4());
  EXPECT_TRUE(cast(four(), I, B, {}, {}).is(Failure::CastError));
}

TEST(Cast, ProjectionRecursesAtSourceType) {
  // [<4,#t> : int×bool ⇒ ★] cast to ★×bool keeps the components.
  const Val pv = val::pair(four(), val::boolean(true));
  auto r = cast(val::inject(pv, Ty::Pair(I, B)), D, Ty::Pair(D, B), {}, {});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->value, val::pair(inj4(), val::boolean(true)));
}

TEST(Cast, ReferenceLowersCellAndQueuesAddress) {
  const Heap before = heap_of({plain(inj4(), D)});
  auto r = cast(val::ref(0), Ty::Ref(D), Ty::Ref(I), before, {});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->value, val::ref(0));
  EXPECT_EQ(r->heap, heap_of({Cell{CastedVal::pending(inj4(), D, I), I}}));
  EXPECT_EQ(r->active, (ActiveList{0}));
}

TEST(Cast, ReferenceToLessPreciseLeavesHeapAlone) {
  const Heap before = heap_of({plain(four(), I)});
  auto r = cast(val::ref(0), Ty::Ref(I), Ty::Ref(D), before, {});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->value, val::ref(0));
  EXPECT_EQ(r->heap, before);
  EXPECT_TRUE(r->active.empty());
}

TEST(Cast, ReferenceMeetFailure) {
  const Heap before = heap_of({plain(four(), I)});
  EXPECT_TRUE(cast(val::ref(0), Ty::Ref(D), Ty::Ref(B), before, {}).is(Failure::CastError));
}

TEST(Cast, ReferenceCastPrependsToActiveList) {
  const Heap before = heap_of({plain(inj4(), D), plain(inj4(), D)});
  auto r = cast(val::ref(1), Ty::Ref(D), Ty::Ref(I), before, ActiveList{0});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->active, (ActiveList{1, 0}));
}

TEST(Cast, PairsThreadTheHeap) {
  const Heap before = heap_of({plain(inj4(), D), plain(val::inject(val::boolean(true), B), D)});
  const Ty src = Ty::Pair(Ty::Ref(D), Ty::Ref(D));
  auto r = cast(val::pair(val::ref(0), val::ref(1)), src, Ty::Pair(Ty::Ref(I), Ty::Ref(B)), before, {});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->heap.find(0)->tag, I);
  EXPECT_EQ(r->heap.find(1)->tag, B);
  EXPECT_EQ(r->active, (ActiveList{1, 0}));
  EXPECT_TRUE(cast(four(), Ty::Pair(I, I), Ty::Pair(I, I), {}, {}).is(Failure::CastError));
}

TEST(Cast, ArrowsWrap) {
  auto r = cast(succ_closure(), Ty::Arrow(I, I), Ty::Arrow(D, D), {}, {});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->value, wrap(succ_closure(), I, I, D, D));
}

TEST(Step, ActiveDropOnPlainCell) {
  State s{ir::ret(ir::lit(Const(1))), {}, {}, heap_of({plain(four(), I)}), {0}};
  StepRule rule{};
  auto next = step(s, &rule);
  ASSERT_TRUE(next.ok());
  EXPECT_EQ(rule, StepRule::ActiveDrop);
  EXPECT_TRUE(next->active.empty());
  EXPECT_EQ(next->heap, s.heap);
}

TEST(Step, ActiveCommit) {
  State s{ir::ret(ir::lit(Const(1))), {}, {}, heap_of({Cell{CastedVal::pending(inj4(), D, I), I}}), {0}};
  StepRule rule{};
  auto next = step(s, &rule);
  ASSERT_TRUE(next.ok());
  EXPECT_EQ(rule, StepRule::ActiveCommit);
  EXPECT_EQ(next->heap, heap_of({plain(four(), I)}));
  EXPECT_TRUE(next->active.empty());
}

TEST(Step, CommitRemovesEveryOccurrence) {
  State s{ir::ret(ir::lit(Const(1))), {}, {}, heap_of({Cell{CastedVal::pending(inj4(), D, I), I}, plain(four(), I)}),
          {0, 1, 0, 0}};
  auto next = step(s);
  ASSERT_TRUE(next.ok());
  EXPECT_EQ(next->active, (ActiveList{1}));
}

TEST(Step, ActiveCastErrorPropagates) {
  State s{ir::ret(ir::lit(Const(1))), {}, {},
          heap_of({Cell{CastedVal::pending(val::inject(val::boolean(true), B), D, I), I}}), {0}};
  EXPECT_TRUE(step(s).is(Failure::CastError));
}

// Cell 0 holds a pair whose second component points back at cell 0. Casting
// the pending value lowers cell 0's own tag, so the first attempt is
// superseded and the second one commits.
TEST(Step, SupersededCastIsRetried) {
  const Ty cell_int_dyn = Ty::Pair(I, D);
  const Ty a = Ty::Pair(D, Ty::Ref(cell_int_dyn));
  const Ty src = Ty::Pair(D, Ty::Ref(D));
  const Val v = val::pair(inj4(), val::ref(0));
  State s{ir::ret(ir::lit(Const(1))), {}, {}, heap_of({Cell{CastedVal::pending(v, src, a), a}}), {0}};

  StepRule rule{};
  auto first = step(s, &rule);
  ASSERT_TRUE(first.ok());
  EXPECT_EQ(rule, StepRule::ActiveSupersede);
  const Ty lowered = Ty::Pair(I, Ty::Ref(cell_int_dyn));
  EXPECT_EQ(first->heap.find(0)->tag, lowered);
  EXPECT_EQ(first->active, (ActiveList{0, 0}));

  auto second = step(*first, &rule);
  ASSERT_TRUE(second.ok());
  EXPECT_EQ(rule, StepRule::ActiveCommit);
  EXPECT_EQ(second->heap, heap_of({plain(val::pair(four(), val::ref(0)), lowered)}));
  EXPECT_TRUE(second->active.empty());
  EXPECT_TRUE(is_final(*second));
}

TEST(Step, AllocUsesHeapSizeAsAddress) {
  State s{ir::alloc("x", I, ir::lit(Const(4)), ir::ret(ir::var("x"))), {}, {},
          heap_of({plain(four(), I), plain(four(), I)}), {}};
  StepRule rule{};
  auto next = step(s, &rule);
  ASSERT_TRUE(next.ok());
  EXPECT_EQ(rule, StepRule::Alloc);
  EXPECT_EQ(*lookup(Name("x"), next->env), val::ref(2));
  EXPECT_EQ(next->heap.size(), 3u);
  EXPECT_EQ(*next->heap.find(2), plain(four(), I));
}

TEST(Step, UpdateKeepsTag) {
  State s{ir::update(ir::var("r"), ir::lit(Const(5)), ir::ret(ir::lit(Const(0)))),
          extend(Name("r"), val::ref(0), Env{}), {}, heap_of({plain(four(), I)}), {}};
  auto next = step(s);
  ASSERT_TRUE(next.ok());
  EXPECT_EQ(*next->heap.find(0), plain(val::integer(5), I));
}

TEST(Step, DynUpdateQueuesCastToCurrentTag) {
  State s{ir::dyn_update(ir::var("r"), ir::var("v"), D, ir::ret(ir::lit(Const(0)))),
          extend(Name("v"), inj4(), extend(Name("r"), val::ref(0), Env{})), {}, heap_of({plain(four(), I)}), {}};
  auto next = step(s);
  ASSERT_TRUE(next.ok());
  EXPECT_EQ(*next->heap.find(0), (Cell{CastedVal::pending(inj4(), D, I), I}));
  EXPECT_EQ(next->active, (ActiveList{0}));
}

TEST(Step, DynDerefCastsTagToAnnotation) {
  State s{ir::dyn_deref("x", ir::var("r"), D, ir::ret(ir::var("x"))), extend(Name("r"), val::ref(0), Env{}), {},
          heap_of({plain(four(), I)}), {}};
  auto r = run_to_value(s);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r, inj4());
}

TEST(Step, CallPushesFrameAndReturnPops) {
  State s = apply(succ_closure(), four());
  StepRule rule{};
  auto called = step(s, &rule);
  ASSERT_TRUE(called.ok());
  EXPECT_EQ(rule, StepRule::Call);
  EXPECT_EQ(called->stack.size(), 1u);
  auto returned = step(*called, &rule);
  ASSERT_TRUE(returned.ok());
  EXPECT_EQ(rule, StepRule::Return);
  EXPECT_TRUE(returned->stack.empty());
  EXPECT_EQ(*lookup(Name("r"), returned->env), val::integer(5));
}

TEST(Step, TailCallDoesNotGrowStack) {
  State s{ir::tail_call(ir::var("f"), ir::lit(Const(4))), extend(Name("f"), succ_closure(), Env{}), {}, {}, {}};
  StepRule rule{};
  auto next = step(s, &rule);
  ASSERT_TRUE(next.ok());
  EXPECT_EQ(rule, StepRule::TailCall);
  EXPECT_TRUE(next->stack.empty());
}

TEST(Step, CallingANonFunctionIsStuck) {
  State s{ir::tail_call(ir::lit(Const(3)), ir::lit(Const(4))), {}, {}, {}, {}};
  EXPECT_TRUE(step(s).is(Failure::Stuck));
}

TEST(Step, FinalStateIsStuck) {
  EXPECT_TRUE(step(State::initial(ir::ret(ir::lit(Const(4))))).is(Failure::Stuck));
}

TEST(Step, Deterministic) {
  State s{ir::cast("y", ir::var("r"), Ty::Ref(D), Ty::Ref(I), ir::ret(ir::var("y"))),
          extend(Name("r"), val::ref(0), Env{}), {}, heap_of({plain(inj4(), D)}), {}};
  auto a = step(s);
  auto b = step(s);
  ASSERT_TRUE(a.ok());
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(*a, *b);
}

TEST(Final, RequiresEmptyStackAndActiveList) {
  const Stmt ret = ir::ret(ir::lit(Const(4)));
  EXPECT_TRUE(is_final(State{ret, {}, {}, {}, {}}));
  EXPECT_FALSE(is_final(State{ret, {}, Stack::cons(Frame{"x", ret, {}}, {}), {}, {}}));
  EXPECT_FALSE(is_final(State{ret, {}, {}, heap_of({plain(four(), I)}), {0}}));
}

TEST(Steps, Fuel) {
  const Stmt ret4 = ir::ret(ir::lit(Const(4)));
  EXPECT_EQ(steps(0, State::initial(ret4)).kind(), Observable::Kind::TimeOut);
  EXPECT_EQ(steps(1, State::initial(ret4)), Observable::con(Const(4)));
  const Stmt bad = ir::cast("x", ir::lit(Const(4)), I, B, ret4);
  EXPECT_EQ(steps(10, State::initial(bad)).kind(), Observable::Kind::CastError);
  EXPECT_EQ(run(ret4), Observable::con(Const(4)));
}

TEST(Steps, DivergenceTimesOut) {
  // Landin's knot through a Ref (int -> int).
  const Ty f = Ty::Arrow(I, I);
  const Stmt knot = ir::alloc(
      "r", f, ir::lam("n", I, ir::ret(ir::var("n"))),
      ir::update(ir::var("r"),
                 ir::lam("n", I, ir::let("g", ir::deref(ir::var("r")), ir::tail_call(ir::var("g"), ir::var("n")))),
                 ir::let("g", ir::deref(ir::var("r")), ir::tail_call(ir::var("g"), ir::lit(Const(0))))));
  ASSERT_TRUE(check_stmt({}, knot).ok());
  EXPECT_EQ(run(knot, 5000).kind(), Observable::Kind::TimeOut);
}

TEST(Observe, Table) {
  EXPECT_EQ(observe(val::integer(42)), Observable::con(Const(42)));
  EXPECT_EQ(observe(inj4()).kind(), Observable::Kind::Inj);
  EXPECT_EQ(observe(val::pair(val::integer(1), val::boolean(true))),
            Observable::pair(Observable::con(Const(1)), Observable::con(Const(true))));
  EXPECT_EQ(observe(succ_closure()).kind(), Observable::Kind::Fun);
  EXPECT_EQ(observe(val::ref(0)).kind(), Observable::Kind::Addr);
}

TEST(Observe, CanonicalRendering) {
  EXPECT_EQ(Observable::con(Const(-7)).str(), "-7");
  EXPECT_EQ(Observable::con(Const(false)).str(), "#f");
  EXPECT_EQ(Observable::pair(Observable::con(Const(1)), Observable::of(Observable::Kind::Fun)).str(), "(pair 1 #fun)");
  EXPECT_EQ(Observable::of(Observable::Kind::Addr).str(), "#addr");
  EXPECT_EQ(Observable::of(Observable::Kind::Inj).str(), "#inj");
  EXPECT_EQ(Observable::of(Observable::Kind::Stuck).str(), "error: stuck");
  EXPECT_EQ(Observable::of(Observable::Kind::TimeOut).str(), "timeout");
  EXPECT_EQ(Observable::of(Observable::Kind::CastError).str(), "error: cast");
}

}  // namespace
}  // namespace monoref
