#include "monoref/machine.hpp"

#include <algorithm>

namespace monoref {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};

Result<Val> delta(const Opr& f, const Val& v) {
  switch (f.kind) {
    case Opr::Kind::Succ:
    case Opr::Kind::Prev:
    case Opr::Kind::IsZero: {
      const auto* c = v.as<VConst>();
      if (c == nullptr || !c->value.is_int()) return Failure::Stuck;
      const BigInt& n = c->value.as_int();
      if (f.kind == Opr::Kind::Succ) return val::integer(n + 1);
      if (f.kind == Opr::Kind::Prev) return val::integer(n - 1);
      return val::boolean(n == 0);
    }
    case Opr::Kind::Fst:
    case Opr::Kind::Snd: {
      const auto* p = v.as<VPair>();
      if (p == nullptr) return Failure::Stuck;
      return f.kind == Opr::Kind::Fst ? *p->fst : *p->snd;
    }
  }
  return Failure::Stuck;
}

Result<Address> to_addr(const Val& v) {
  if (const auto* r = v.as<VRef>()) return r->addr;
  return Failure::Stuck;
}

Result<Val> to_val(const CastedVal& cv) {
  if (const auto* p = cv.as_plain()) return p->v;
  return Failure::Stuck;
}

Result<Val> eval(const Expr& e, const Env& rho, const Heap& mu) {
  return std::visit(
      overloaded{
          [&](const Expr::Var& n) -> Result<Val> { return lookup(n.name, rho); },
          [&](const Expr::Lit& n) -> Result<Val> { return val::constant(n.value); },
          [&](const Expr::PrimApp& n) -> Result<Val> {
            MONOREF_TRY(Val v, eval(*n.arg, rho, mu));
            return delta(n.op, v);
          },
          [&](const Expr::MkPair& n) -> Result<Val> {
            MONOREF_TRY(Val a, eval(*n.fst, rho, mu));
            MONOREF_TRY(Val b, eval(*n.snd, rho, mu));
            return val::pair(std::move(a), std::move(b));
          },
          [&](const Expr::Lam& n) -> Result<Val> { return Val{Closure{n.param, n.param_ty, n.body, rho}}; },
          [&](const Expr::Deref& n) -> Result<Val> {
            MONOREF_TRY(Val v, eval(*n.ref, rho, mu));
            MONOREF_TRY(Address a, to_addr(v));
            MONOREF_TRY(Cell cell, mu.lookup(a));
            return to_val(cell.content);
          },
      },
      e.node);
}

Stmt wrap_body(const Ty& a, const Ty& b, const Ty& c, const Ty& d) {
  using namespace wrap_names;
  return ir::cast(arg, ir::var(param), c, a,
                  ir::call(result, ir::var(fn), ir::var(arg),
                           ir::cast(cast_result, ir::var(result), b, d, ir::ret(ir::var(cast_result)))));
}

Val wrap(Val v, const Ty& a, const Ty& b, const Ty& c, const Ty& d) {
  return val::closure(wrap_names::param, c, wrap_body(a, b, c, d), extend(wrap_names::fn, std::move(v), Env{}));
}

CastedVal mk_vcast(const CastedVal& cv, const Ty& c, const Ty& d) {
  if (const auto* p = cv.as_plain()) return CastedVal::pending(p->v, c, d);
  const auto& q = *cv.as_pending();
  return CastedVal::pending(q.v, q.src, d);
}

Result<CastOutcome> cast(const Val& v, const Ty& a, const Ty& b, Heap mu, ActiveList active) {
  using K = Ty::Kind;
  const bool same_kind = a.kind() == b.kind();

  if (same_kind && (a.is(K::Int) || a.is(K::Bool) || a.is(K::Dyn))) {
    return CastOutcome{v, std::move(mu), std::move(active)};
  }
  if (same_kind && a.is(K::Arrow)) {
    return CastOutcome{wrap(v, a.dom(), a.cod(), b.dom(), b.cod()), std::move(mu), std::move(active)};
  }
  if (same_kind && a.is(K::Pair)) {
    if (const auto* p = v.as<VPair>()) {
      MONOREF_TRY(CastOutcome first, cast(*p->fst, a.left(), b.left(), std::move(mu), std::move(active)));
      MONOREF_TRY(CastOutcome second,
                  cast(*p->snd, a.right(), b.right(), std::move(first.heap), std::move(first.active)));
      return CastOutcome{val::pair(std::move(first.value), std::move(second.value)), std::move(second.heap),
                         std::move(second.active)};
    }
    return Failure::CastError;
  }
  if (same_kind && a.is(K::Ref)) {
    const auto* r = v.as<VRef>();
    if (r == nullptr) return Failure::CastError;
    MONOREF_TRY(Cell cell, mu.lookup(r->addr));
    MONOREF_TRY(Ty lowered, meet(b.cell(), cell.tag));
    // Already at least as precise: leave the heap alone. This is also what
    // stops a cast from chasing a cycle forever.
    if (lesseq(cell.tag, lowered)) return CastOutcome{v, std::move(mu), std::move(active)};
    mu.store(r->addr, Cell{mk_vcast(cell.content, cell.tag, lowered), lowered});
    active.insert(active.begin(), r->addr);
    return CastOutcome{v, std::move(mu), std::move(active)};
  }
  if (a.is_dyn()) {
    const auto* inj = v.as<Inject>();
    if (inj == nullptr) return Failure::CastError;
    if (!(ground(inj->src) == ground(b))) return Failure::CastError;
    return cast(*inj->payload, inj->src, b, std::move(mu), std::move(active));
  }
  if (b.is_dyn()) {
    return CastOutcome{val::inject(v, a), std::move(mu), std::move(active)};
  }
  return Failure::CastError;
}

std::string_view to_string(StepRule r) {
  switch (r) {
    case StepRule::ActiveDrop: return "active-drop";
    case StepRule::ActiveCommit: return "active-commit";
    case StepRule::ActiveSupersede: return "active-supersede";
    case StepRule::Let: return "let";
    case StepRule::Return: return "return";
    case StepRule::Call: return "call";
    case StepRule::TailCall: return "tail-call";
    case StepRule::Alloc: return "alloc";
    case StepRule::Update: return "update";
    case StepRule::DynUpdate: return "dyn-update";
    case StepRule::Cast: return "cast";
    case StepRule::DynDeref: return "dyn-deref";
  }
  return "?";
}

namespace {

void remove_all(ActiveList& active, Address a) { std::erase(active, a); }

Result<State> step_active(State s, StepRule* fired) {
  const Address a = s.active.front();
  MONOREF_TRY(Cell cell, s.heap.lookup(a));
  if (cell.content.is_plain()) {
    if (fired) *fired = StepRule::ActiveDrop;
    s.active.erase(s.active.begin());
    return s;
  }
  const auto& pending = *cell.content.as_pending();
  MONOREF_TRY(CastOutcome out, cast(pending.v, pending.src, pending.tgt, std::move(s.heap), std::move(s.active)));
  MONOREF_TRY(Cell now, out.heap.lookup(a));
  if (lesseq(cell.tag, now.tag)) {
    if (fired) *fired = StepRule::ActiveCommit;
    out.heap.store(a, Cell{CastedVal::plain(std::move(out.value)), cell.tag});
    remove_all(out.active, a);
  } else {
    if (fired) *fired = StepRule::ActiveSupersede;
  }
  s.heap = std::move(out.heap);
  s.active = std::move(out.active);
  return s;
}

Result<State> step_stmt(State s, StepRule* fired) {
  // Pull the node out first: s.stmt is overwritten below.
  const Stmt current = s.stmt;
  auto note = [&](StepRule r) {
    if (fired) *fired = r;
  };
  return std::visit(
      overloaded{
          [&](const Stmt::Let& n) -> Result<State> {
            note(StepRule::Let);
            MONOREF_TRY(Val v, eval(n.rhs, s.env, s.heap));
            s.env = extend(n.var, std::move(v), std::move(s.env));
            s.stmt = *n.body;
            return std::move(s);
          },
          [&](const Stmt::Return& n) -> Result<State> {
            note(StepRule::Return);
            if (s.stack.empty()) return Failure::Stuck;
            MONOREF_TRY(Val v, eval(n.value, s.env, s.heap));
            Frame frame = s.stack.head();
            s.stack = Stack(s.stack.tail());
            s.env = extend(frame.ret_var, std::move(v), std::move(frame.saved_env));
            s.stmt = std::move(frame.cont);
            return std::move(s);
          },
          [&](const Stmt::Call& n) -> Result<State> {
            note(StepRule::Call);
            MONOREF_TRY(Val f, eval(n.fn, s.env, s.heap));
            MONOREF_TRY(Val arg, eval(n.arg, s.env, s.heap));
            const auto* clo = f.as<Closure>();
            if (clo == nullptr) return Failure::Stuck;
            s.stack = Stack::cons(Frame{n.var, *n.body, std::move(s.env)}, std::move(s.stack));
            s.env = extend(clo->param, std::move(arg), clo->env);
            s.stmt = *clo->body;
            return std::move(s);
          },
          [&](const Stmt::TailCall& n) -> Result<State> {
            note(StepRule::TailCall);
            MONOREF_TRY(Val f, eval(n.fn, s.env, s.heap));
            MONOREF_TRY(Val arg, eval(n.arg, s.env, s.heap));
            const auto* clo = f.as<Closure>();
            if (clo == nullptr) return Failure::Stuck;
            s.env = extend(clo->param, std::move(arg), clo->env);
            s.stmt = *clo->body;
            return std::move(s);
          },
          [&](const Stmt::Alloc& n) -> Result<State> {
            note(StepRule::Alloc);
            MONOREF_TRY(Val v, eval(n.init, s.env, s.heap));
            const Address a = s.heap.allocate(Cell{CastedVal::plain(std::move(v)), n.cell_ty});
            s.env = extend(n.var, val::ref(a), std::move(s.env));
            s.stmt = *n.body;
            return std::move(s);
          },
          [&](const Stmt::Update& n) -> Result<State> {
            note(StepRule::Update);
            MONOREF_TRY(Val r, eval(n.ref, s.env, s.heap));
            MONOREF_TRY(Val v, eval(n.value, s.env, s.heap));
            MONOREF_TRY(Address a, to_addr(r));
            MONOREF_TRY(Cell cell, s.heap.lookup(a));
            s.heap.store(a, Cell{CastedVal::plain(std::move(v)), std::move(cell.tag)});
            s.stmt = *n.body;
            return std::move(s);
          },
          [&](const Stmt::DynUpdate& n) -> Result<State> {
            note(StepRule::DynUpdate);
            MONOREF_TRY(Val r, eval(n.ref, s.env, s.heap));
            MONOREF_TRY(Val v, eval(n.value, s.env, s.heap));
            MONOREF_TRY(Address a, to_addr(r));
            MONOREF_TRY(Cell cell, s.heap.lookup(a));
            s.heap.store(a, Cell{CastedVal::pending(std::move(v), n.ann, cell.tag), cell.tag});
            s.active = ActiveList{a};
            s.stmt = *n.body;
            return std::move(s);
          },
          [&](const Stmt::Cast& n) -> Result<State> {
            note(StepRule::Cast);
            MONOREF_TRY(Val v, eval(n.value, s.env, s.heap));
            MONOREF_TRY(CastOutcome out, cast(v, n.src, n.tgt, std::move(s.heap), {}));
            s.env = extend(n.var, std::move(out.value), std::move(s.env));
            s.heap = std::move(out.heap);
            s.active = std::move(out.active);
            s.stmt = *n.body;
            return std::move(s);
          },
          [&](const Stmt::DynDeref& n) -> Result<State> {
            note(StepRule::DynDeref);
            MONOREF_TRY(Val r, eval(n.ref, s.env, s.heap));
            MONOREF_TRY(Address a, to_addr(r));
            MONOREF_TRY(Cell cell, s.heap.lookup(a));
            MONOREF_TRY(Val v, to_val(cell.content));
            MONOREF_TRY(CastOutcome out, cast(v, cell.tag, n.ann, std::move(s.heap), {}));
            s.env = extend(n.var, std::move(out.value), std::move(s.env));
            s.heap = std::move(out.heap);
            s.active = std::move(out.active);
            s.stmt = *n.body;
            return std::move(s);
          },
      },
      current.node);
}

}  // namespace

Result<State> step(State s, StepRule* fired) {
  if (!s.active.empty()) return step_active(std::move(s), fired);
  return step_stmt(std::move(s), fired);
}

bool is_final(const State& s) {
  return std::holds_alternative<Stmt::Return>(s.stmt.node) && s.stack.empty() && s.active.empty();
}

Observable steps(std::uint64_t fuel, State s, const StepObserver& observer) {
  std::size_t index = 0;
  while (true) {
    if (fuel == 0) return Observable::of(Observable::Kind::TimeOut);
    --fuel;
    if (is_final(s)) {
      auto v = eval(std::get<Stmt::Return>(s.stmt.node).value, s.env, s.heap);
      if (!v) return Observable::from(v.failure());
      return observe(*v);
    }
    StepRule rule = StepRule::Let;
    auto next = step(std::move(s), &rule);
    if (!next) return Observable::from(next.failure());
    s = std::move(next).value();
    ++index;
    if (observer) observer(index, rule, s);
  }
}

Observable run(const Stmt& s, std::uint64_t fuel, const StepObserver& observer) {
  return steps(fuel, State::initial(s), observer);
}

}  // namespace monoref
