#include "monoref/guarded.hpp"

namespace monoref::guarded {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};

bool operator==(const GClosure& a, const GClosure& b) {
  return a.param == b.param && a.param_ty == b.param_ty && a.body == b.body && a.env == b.env;
}

Result<GVal> cast_g(const GVal& v, const Ty& a, const Ty& b) {
  using K = Ty::Kind;
  const bool same_kind = a.kind() == b.kind();

  if (same_kind && (a.is(K::Int) || a.is(K::Bool) || a.is(K::Dyn))) return v;
  if (same_kind && a.is(K::Arrow)) {
    return GVal{GClosure{wrap_names::param, b.dom(), wrap_body(a.dom(), a.cod(), b.dom(), b.cod()),
                         extend(wrap_names::fn, v, GEnv{})}};
  }
  if (same_kind && a.is(K::Pair)) {
    const auto* p = v.as<GPair>();
    if (p == nullptr) return Failure::CastError;
    MONOREF_TRY(GVal first, cast_g(*p->fst, a.left(), b.left()));
    MONOREF_TRY(GVal second, cast_g(*p->snd, a.right(), b.right()));
    return GVal{GPair{std::move(first), std::move(second)}};
  }
  if (same_kind && a.is(K::Ref)) {
    if (v.as<VRef>() == nullptr && v.as<GProxy>() == nullptr) return Failure::CastError;
    return GVal{GProxy{v, a.cell(), b.cell()}};
  }
  if (a.is_dyn()) {
    const auto* inj = v.as<GInject>();
    if (inj == nullptr) return Failure::CastError;
    if (!(ground(inj->src) == ground(b))) return Failure::CastError;
    return cast_g(*inj->payload, inj->src, b);
  }
  if (b.is_dyn()) return GVal{GInject{v, a}};
  return Failure::CastError;
}

Result<GVal> gread(const GVal& ref, const GHeap& mu) {
  if (const auto* r = ref.as<VRef>()) {
    if (r->addr >= mu.size()) return Failure::Stuck;
    return mu[r->addr].v;
  }
  if (const auto* p = ref.as<GProxy>()) {
    MONOREF_TRY(GVal inner, gread(*p->inner, mu));
    return cast_g(inner, p->src, p->tgt);
  }
  return Failure::Stuck;
}

Result<GHeap> gwrite(const GVal& ref, const GVal& v, GHeap mu) {
  if (const auto* r = ref.as<VRef>()) {
    if (r->addr >= mu.size()) return Failure::Stuck;
    mu[r->addr].v = v;
    return mu;
  }
  if (const auto* p = ref.as<GProxy>()) {
    MONOREF_TRY(GVal w, cast_g(v, p->tgt, p->src));
    return gwrite(*p->inner, w, std::move(mu));
  }
  return Failure::Stuck;
}

namespace {

Result<GVal> delta_g(const Opr& f, const GVal& v) {
  switch (f.kind) {
    case Opr::Kind::Succ:
    case Opr::Kind::Prev:
    case Opr::Kind::IsZero: {
      const auto* c = v.as<VConst>();
      if (c == nullptr || !c->value.is_int()) return Failure::Stuck;
      const BigInt& n = c->value.as_int();
      if (f.kind == Opr::Kind::Succ) return GVal{VConst{Const(BigInt(n + 1))}};
      if (f.kind == Opr::Kind::Prev) return GVal{VConst{Const(BigInt(n - 1))}};
      return GVal{VConst{Const(n == 0)}};
    }
    case Opr::Kind::Fst:
    case Opr::Kind::Snd: {
      const auto* p = v.as<GPair>();
      if (p == nullptr) return Failure::Stuck;
      return f.kind == Opr::Kind::Fst ? *p->fst : *p->snd;
    }
  }
  return Failure::Stuck;
}

}  // namespace

Result<GVal> eval_g(const Expr& e, const GEnv& rho, const GHeap& mu) {
  return std::visit(
      overloaded{
          [&](const Expr::Var& n) -> Result<GVal> { return lookup(n.name, rho); },
          [&](const Expr::Lit& n) -> Result<GVal> { return GVal{VConst{n.value}}; },
          [&](const Expr::PrimApp& n) -> Result<GVal> {
            MONOREF_TRY(GVal v, eval_g(*n.arg, rho, mu));
            return delta_g(n.op, v);
          },
          [&](const Expr::MkPair& n) -> Result<GVal> {
            MONOREF_TRY(GVal a, eval_g(*n.fst, rho, mu));
            MONOREF_TRY(GVal b, eval_g(*n.snd, rho, mu));
            return GVal{GPair{std::move(a), std::move(b)}};
          },
          [&](const Expr::Lam& n) -> Result<GVal> { return GVal{GClosure{n.param, n.param_ty, n.body, rho}}; },
          [&](const Expr::Deref& n) -> Result<GVal> {
            MONOREF_TRY(GVal r, eval_g(*n.ref, rho, mu));
            return gread(r, mu);
          },
      },
      e.node);
}

Result<GState> step_g(GState s, StepRule* fired) {
  const Stmt current = s.stmt;
  auto note = [&](StepRule r) {
    if (fired) *fired = r;
  };
  auto enter = [&](const GVal& f, GVal arg) -> Result<GState> {
    const auto* clo = f.as<GClosure>();
    if (clo == nullptr) return Failure::Stuck;
    s.env = extend(clo->param, std::move(arg), clo->env);
    s.stmt = *clo->body;
    return std::move(s);
  };
  return std::visit(
      overloaded{
          [&](const Stmt::Let& n) -> Result<GState> {
            note(StepRule::Let);
            MONOREF_TRY(GVal v, eval_g(n.rhs, s.env, s.heap));
            s.env = extend(n.var, std::move(v), std::move(s.env));
            s.stmt = *n.body;
            return std::move(s);
          },
          [&](const Stmt::Return& n) -> Result<GState> {
            note(StepRule::Return);
            if (s.stack.empty()) return Failure::Stuck;
            MONOREF_TRY(GVal v, eval_g(n.value, s.env, s.heap));
            GFrame frame = s.stack.head();
            s.stack = PList<GFrame>(s.stack.tail());
            s.env = extend(frame.ret_var, std::move(v), std::move(frame.saved_env));
            s.stmt = std::move(frame.cont);
            return std::move(s);
          },
          [&](const Stmt::Call& n) -> Result<GState> {
            note(StepRule::Call);
            MONOREF_TRY(GVal f, eval_g(n.fn, s.env, s.heap));
            MONOREF_TRY(GVal arg, eval_g(n.arg, s.env, s.heap));
            if (f.as<GClosure>() == nullptr) return Failure::Stuck;
            s.stack = PList<GFrame>::cons(GFrame{n.var, *n.body, s.env}, std::move(s.stack));
            return enter(f, std::move(arg));
          },
          [&](const Stmt::TailCall& n) -> Result<GState> {
            note(StepRule::TailCall);
            MONOREF_TRY(GVal f, eval_g(n.fn, s.env, s.heap));
            MONOREF_TRY(GVal arg, eval_g(n.arg, s.env, s.heap));
            return enter(f, std::move(arg));
          },
          [&](const Stmt::Alloc& n) -> Result<GState> {
            note(StepRule::Alloc);
            MONOREF_TRY(GVal v, eval_g(n.init, s.env, s.heap));
            s.heap.push_back(GCell{std::move(v), n.cell_ty});
            s.env = extend(n.var, GVal{VRef{s.heap.size() - 1}}, std::move(s.env));
            s.stmt = *n.body;
            return std::move(s);
          },
          [&](const Stmt::Update& n) -> Result<GState> {
            note(StepRule::Update);
            MONOREF_TRY(GVal r, eval_g(n.ref, s.env, s.heap));
            MONOREF_TRY(GVal v, eval_g(n.value, s.env, s.heap));
            MONOREF_TRY(s.heap, gwrite(r, v, std::move(s.heap)));
            s.stmt = *n.body;
            return std::move(s);
          },
          [&](const Stmt::DynUpdate& n) -> Result<GState> {
            note(StepRule::DynUpdate);
            MONOREF_TRY(GVal r, eval_g(n.ref, s.env, s.heap));
            MONOREF_TRY(GVal v, eval_g(n.value, s.env, s.heap));
            MONOREF_TRY(s.heap, gwrite(r, v, std::move(s.heap)));
            s.stmt = *n.body;
            return std::move(s);
          },
          [&](const Stmt::Cast& n) -> Result<GState> {
            note(StepRule::Cast);
            MONOREF_TRY(GVal v, eval_g(n.value, s.env, s.heap));
            MONOREF_TRY(GVal w, cast_g(v, n.src, n.tgt));
            s.env = extend(n.var, std::move(w), std::move(s.env));
            s.stmt = *n.body;
            return std::move(s);
          },
          [&](const Stmt::DynDeref& n) -> Result<GState> {
            note(StepRule::DynDeref);
            MONOREF_TRY(GVal r, eval_g(n.ref, s.env, s.heap));
            MONOREF_TRY(GVal v, gread(r, s.heap));
            s.env = extend(n.var, std::move(v), std::move(s.env));
            s.stmt = *n.body;
            return std::move(s);
          },
      },
      current.node);
}

bool is_final(const GState& s) { return std::holds_alternative<Stmt::Return>(s.stmt.node) && s.stack.empty(); }

Observable observe_g(const GVal& v) {
  using K = Observable::Kind;
  return std::visit(overloaded{
                        [](const VConst& c) { return Observable::con(c.value); },
                        [](const GPair& p) { return Observable::pair(observe_g(*p.fst), observe_g(*p.snd)); },
                        [](const GClosure&) { return Observable::of(K::Fun); },
                        [](const VRef&) { return Observable::of(K::Addr); },
                        [](const GInject&) { return Observable::of(K::Inj); },
                        [](const GProxy&) { return Observable::of(K::Addr); },
                    },
                    v.node);
}

Observable steps_g(std::uint64_t fuel, GState s, const GStepObserver& observer) {
  std::size_t index = 0;
  while (true) {
    if (fuel == 0) return Observable::of(Observable::Kind::TimeOut);
    --fuel;
    if (is_final(s)) {
      auto v = eval_g(std::get<Stmt::Return>(s.stmt.node).value, s.env, s.heap);
      if (!v) return Observable::from(v.failure());
      return observe_g(*v);
    }
    StepRule rule = StepRule::Let;
    auto next = step_g(std::move(s), &rule);
    if (!next) return Observable::from(next.failure());
    s = std::move(next).value();
    ++index;
    if (observer) observer(index, rule, s);
  }
}

Observable run_g(const Stmt& s, std::uint64_t fuel, const GStepObserver& observer) {
  return steps_g(fuel, GState::initial(s), observer);
}

}  // namespace monoref::guarded
