#include "monoref/typecheck.hpp"

namespace monoref {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};

std::string Diagnostic::str() const {
  std::string out;
  if (pos) out += std::to_string(pos->line) + ":" + std::to_string(pos->column) + ": ";
  out += "type error: " + message;
  if (!path.empty()) {
    out += " [at ";
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (i > 0) out += " > ";
      out += path[i];
    }
    out += "]";
  }
  return out;
}

void LamTypings::record(const Box<Stmt>& body, TyEnv gamma) {
  entries_.insert_or_assign(body.get(), Entry{body, std::move(gamma)});
}

const TyEnv* LamTypings::find(const Stmt* body) const {
  auto it = entries_.find(body);
  return it == entries_.end() ? nullptr : &it->second.gamma;
}

namespace {

class Checker {
 public:
  explicit Checker(LamTypings* typings) : typings_(typings) {}

  Checked<Ty> expr(const TyEnv& gamma, const Expr& e) {
    return std::visit(
        overloaded{
            [&](const Expr::Var& n) -> Checked<Ty> {
              if (const Ty* t = find(n.name, gamma)) return *t;
              return fail("unbound variable '" + n.name + "'");
            },
            [&](const Expr::Lit& n) -> Checked<Ty> { return typeof_const(n.value); },
            [&](const Expr::PrimApp& n) -> Checked<Ty> {
              const Ty fn = typeof_opr(n.op);
              Scope scope(*this, "operand of " + op_name(n.op));
              auto arg = expr(gamma, *n.arg);
              if (!arg) return arg;
              if (!(*arg == fn.dom())) {
                return fail(op_name(n.op) + " expects " + fn.dom().str() + ", got " + arg->str());
              }
              return fn.cod();
            },
            [&](const Expr::MkPair& n) -> Checked<Ty> {
              Checked<Ty> a = [&] {
                Scope scope(*this, "pair first");
                return expr(gamma, *n.fst);
              }();
              if (!a) return a;
              Scope scope(*this, "pair second");
              auto b = expr(gamma, *n.snd);
              if (!b) return b;
              return Ty::Pair(*a, *b);
            },
            [&](const Expr::Lam& n) -> Checked<Ty> {
              if (typings_) typings_->record(n.body, gamma);
              Scope scope(*this, "lambda " + n.param);
              auto body = stmt(extend(n.param, n.param_ty, gamma), *n.body);
              if (!body) return body;
              return Ty::Arrow(n.param_ty, *body);
            },
            [&](const Expr::Deref& n) -> Checked<Ty> {
              Scope scope(*this, "dereference");
              auto r = expr(gamma, *n.ref);
              if (!r) return r;
              if (!r->is(Ty::Kind::Ref)) return fail("dereference of non-reference type " + r->str());
              if (!is_static(r->cell())) {
                return fail("non-static deref: cell type " + r->cell().str() + " mentions dyn");
              }
              return r->cell();
            },
        },
        e.node);
  }

  Checked<Ty> stmt(const TyEnv& gamma, const Stmt& s) {
    return std::visit(
        overloaded{
            [&](const Stmt::Let& n) -> Checked<Ty> {
              Scope scope(*this, "let " + n.var);
              auto rhs = expr(gamma, n.rhs);
              if (!rhs) return rhs;
              return stmt(extend(n.var, *rhs, gamma), *n.body);
            },
            [&](const Stmt::Return& n) -> Checked<Ty> {
              Scope scope(*this, "return");
              return expr(gamma, n.value);
            },
            [&](const Stmt::Call& n) -> Checked<Ty> {
              Scope scope(*this, "call " + n.var);
              auto result = application(gamma, n.fn, n.arg);
              if (!result) return result;
              return stmt(extend(n.var, *result, gamma), *n.body);
            },
            [&](const Stmt::TailCall& n) -> Checked<Ty> {
              Scope scope(*this, "tail-call");
              return application(gamma, n.fn, n.arg);
            },
            [&](const Stmt::Alloc& n) -> Checked<Ty> {
              Scope scope(*this, "alloc " + n.var);
              auto init = expr(gamma, n.init);
              if (!init) return init;
              if (!(*init == n.cell_ty)) {
                return fail("allocation at " + n.cell_ty.str() + " initialised with " + init->str());
              }
              return stmt(extend(n.var, Ty::Ref(n.cell_ty), gamma), *n.body);
            },
            [&](const Stmt::Update& n) -> Checked<Ty> {
              Scope scope(*this, "update");
              auto r = expr(gamma, n.ref);
              if (!r) return r;
              if (!r->is(Ty::Kind::Ref)) return fail("update of non-reference type " + r->str());
              if (!is_static(r->cell())) {
                return fail("non-static update: cell type " + r->cell().str() + " mentions dyn");
              }
              auto v = expr(gamma, n.value);
              if (!v) return v;
              if (!(*v == r->cell())) return fail("update of " + r->str() + " with " + v->str());
              return stmt(gamma, *n.body);
            },
            [&](const Stmt::DynUpdate& n) -> Checked<Ty> {
              Scope scope(*this, "dyn-update");
              auto r = expr(gamma, n.ref);
              if (!r) return r;
              if (!r->is(Ty::Kind::Ref)) return fail("update of non-reference type " + r->str());
              if (!(r->cell() == n.ann)) {
                return fail("annotation " + n.ann.str() + " does not match reference type " + r->str());
              }
              auto v = expr(gamma, n.value);
              if (!v) return v;
              if (!(*v == n.ann)) return fail("update of " + r->str() + " with " + v->str());
              return stmt(gamma, *n.body);
            },
            [&](const Stmt::Cast& n) -> Checked<Ty> {
              Scope scope(*this, "cast " + n.var);
              auto v = expr(gamma, n.value);
              if (!v) return v;
              if (!(*v == n.src)) return fail("cast source " + n.src.str() + " but operand has type " + v->str());
              return stmt(extend(n.var, n.tgt, gamma), *n.body);
            },
            [&](const Stmt::DynDeref& n) -> Checked<Ty> {
              Scope scope(*this, "dyn-deref " + n.var);
              auto r = expr(gamma, n.ref);
              if (!r) return r;
              if (!r->is(Ty::Kind::Ref)) return fail("dereference of non-reference type " + r->str());
              if (!(r->cell() == n.ann)) {
                return fail("annotation " + n.ann.str() + " does not match reference type " + r->str());
              }
              return stmt(extend(n.var, n.ann, gamma), *n.body);
            },
        },
        s.node);
  }

 private:
  // Pushes a path segment for the lifetime of the scope.
  class Scope {
   public:
    Scope(Checker& c, std::string seg) : c_(c) { c_.path_.push_back(std::move(seg)); }
    ~Scope() { c_.path_.pop_back(); }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

   private:
    Checker& c_;
  };

  static std::string op_name(const Opr& f) {
    switch (f.kind) {
      case Opr::Kind::Succ: return "succ";
      case Opr::Kind::Prev: return "prev";
      case Opr::Kind::IsZero: return "zero?";
      case Opr::Kind::Fst: return "fst";
      case Opr::Kind::Snd: return "snd";
    }
    return "?";
  }

  Checked<Ty> application(const TyEnv& gamma, const Expr& fn, const Expr& arg) {
    auto f = expr(gamma, fn);
    if (!f) return f;
    if (!f->is(Ty::Kind::Arrow)) return fail("call of non-function type " + f->str());
    auto a = expr(gamma, arg);
    if (!a) return a;
    if (!(*a == f->dom())) return fail("function expects " + f->dom().str() + ", got " + a->str());
    return f->cod();
  }

  Diagnostic fail(std::string message) const { return Diagnostic{std::move(message), path_, std::nullopt}; }

  LamTypings* typings_;
  std::vector<std::string> path_;
};

// Recognises the wrapper produced by a function cast and recovers the type
// of the wrapped function from the casts in its body.
std::optional<TyEnv> wrapper_env_typing(const Closure& c) {
  if (c.param != wrap_names::param || c.env.size() != 1 || c.env.head().first != wrap_names::fn) {
    return std::nullopt;
  }
  const auto* outer = std::get_if<Stmt::Cast>(&c.body->node);
  if (outer == nullptr) return std::nullopt;
  const auto* call = std::get_if<Stmt::Call>(&outer->body->node);
  if (call == nullptr) return std::nullopt;
  const auto* inner = std::get_if<Stmt::Cast>(&call->body->node);
  if (inner == nullptr) return std::nullopt;
  const Stmt expected = wrap_body(outer->tgt, inner->src, outer->src, inner->tgt);
  if (!(expected == *c.body)) return std::nullopt;
  return extend(wrap_names::fn, Ty::Arrow(outer->tgt, inner->src), TyEnv{});
}

std::optional<TyEnv> closure_env_typing(const StoreTy& sigma, const Closure& c, const LamTypings* typings) {
  if (typings != nullptr) {
    if (const TyEnv* g = typings->find(c.body.get())) return *g;
  }
  if (auto g = wrapper_env_typing(c)) return g;
  // Rebuild from the captured values, oldest binding first.
  std::vector<std::pair<Name, Ty>> bindings;
  for (const auto& [name, v] : c.env) {
    auto t = runtime_type(sigma, v, typings);
    if (!t) return std::nullopt;
    bindings.emplace_back(name, std::move(*t));
  }
  TyEnv gamma;
  for (auto it = bindings.rbegin(); it != bindings.rend(); ++it) gamma = extend(it->first, it->second, gamma);
  return gamma;
}

std::optional<Ty> closure_type(const StoreTy& sigma, const Closure& c, const LamTypings* typings) {
  auto gamma = closure_env_typing(sigma, c, typings);
  if (!gamma || !wt_env(*gamma, sigma, c.env, typings)) return std::nullopt;
  auto body = check_stmt(extend(c.param, c.param_ty, *gamma), *c.body);
  if (!body) return std::nullopt;
  return Ty::Arrow(c.param_ty, *body);
}

}  // namespace

Checked<Ty> check_expr(const TyEnv& gamma, const Expr& e, LamTypings* typings) {
  return Checker(typings).expr(gamma, e);
}

Checked<Ty> check_stmt(const TyEnv& gamma, const Stmt& s, LamTypings* typings) {
  return Checker(typings).stmt(gamma, s);
}

StoreTy derive_store_typing(const Heap& mu) {
  StoreTy sigma;
  for (Address a = 0; a < mu.size(); ++a) sigma.emplace(a, mu.cells()[a].tag);
  return sigma;
}

std::optional<Ty> runtime_type(const StoreTy& sigma, const Val& v, const LamTypings* typings) {
  return std::visit(overloaded{
                        [](const VConst& c) -> std::optional<Ty> { return typeof_const(c.value); },
                        [&](const VPair& p) -> std::optional<Ty> {
                          auto a = runtime_type(sigma, *p.fst, typings);
                          auto b = runtime_type(sigma, *p.snd, typings);
                          if (!a || !b) return std::nullopt;
                          return Ty::Pair(*a, *b);
                        },
                        [&](const Closure& c) { return closure_type(sigma, c, typings); },
                        [&](const VRef& r) -> std::optional<Ty> {
                          auto it = sigma.find(r.addr);
                          if (it == sigma.end()) return std::nullopt;
                          return Ty::Ref(it->second);
                        },
                        [](const Inject&) -> std::optional<Ty> { return Ty::Dyn(); },
                    },
                    v.node);
}

bool wt_val(const StoreTy& sigma, const Val& v, const Ty& a, const LamTypings* typings) {
  return std::visit(overloaded{
                        [&](const VConst& c) { return typeof_const(c.value) == a; },
                        [&](const VPair& p) {
                          return a.is(Ty::Kind::Pair) && wt_val(sigma, *p.fst, a.left(), typings) &&
                                 wt_val(sigma, *p.snd, a.right(), typings);
                        },
                        [&](const Closure& c) {
                          if (!a.is(Ty::Kind::Arrow) || !(a.dom() == c.param_ty)) return false;
                          auto t = closure_type(sigma, c, typings);
                          return t.has_value() && *t == a;
                        },
                        [&](const VRef& r) {
                          if (!a.is(Ty::Kind::Ref)) return false;
                          auto it = sigma.find(r.addr);
                          return it != sigma.end() && lesseq(it->second, a.cell());
                        },
                        [&](const Inject& i) { return a.is_dyn() && wt_val(sigma, *i.payload, i.src, typings); },
                    },
                    v.node);
}

bool wt_env(const TyEnv& gamma, const StoreTy& sigma, const Env& rho, const LamTypings* typings) {
  auto g = gamma.begin();
  auto r = rho.begin();
  for (; g != gamma.end() && r != rho.end(); ++g, ++r) {
    if (g->first != r->first) return false;
    if (!wt_val(sigma, r->second, g->second, typings)) return false;
  }
  return g == gamma.end() && r == rho.end();
}

bool wt_casted(const StoreTy& sigma, const CastedVal& cv, const Ty& a, const LamTypings* typings) {
  if (const auto* p = cv.as_plain()) return wt_val(sigma, p->v, a, typings);
  const auto& q = *cv.as_pending();
  return q.tgt == a && lesseq(q.tgt, q.src) && wt_val(sigma, q.v, q.src, typings);
}

bool wt_heap(const StoreTy& sigma, const Heap& mu, const std::set<Address>& active, const LamTypings* typings) {
  for (const auto& [a, ty] : sigma) {
    const Cell* cell = mu.find(a);
    if (cell == nullptr || !(cell->tag == ty)) return false;
    if (!wt_casted(sigma, cell->content, ty, typings)) return false;
    if (!active.contains(a) && !cell->content.is_plain()) return false;
  }
  // Every allocated address lies below the allocation counter by
  // construction of Heap, so only the active-set containment remains.
  for (Address a : active) {
    if (!sigma.contains(a)) return false;
  }
  return true;
}

bool store_lesseq(const StoreTy& after, const StoreTy& before) {
  if (after.size() != before.size()) return false;
  for (const auto& [a, ty] : before) {
    auto it = after.find(a);
    if (it == after.end() || !lesseq(it->second, ty)) return false;
  }
  return true;
}

bool wt_observable(const Observable& o, const Ty& a) {
  using K = Observable::Kind;
  switch (o.kind()) {
    case K::Pair: return a.is(Ty::Kind::Pair) && wt_observable(o.fst(), a.left()) && wt_observable(o.snd(), a.right());
    case K::Fun: return a.is(Ty::Kind::Arrow);
    case K::Con: return typeof_const(o.constant()) == a;
    case K::Stuck: return false;
    case K::TimeOut:
    case K::CastError: return true;
    case K::Addr: return a.is(Ty::Kind::Ref);
    case K::Inj: return a.is_dyn();
  }
  return false;
}

}  // namespace monoref
