#include "monoref/surface.hpp"

#include <functional>
#include <set>
#include <stdexcept>

namespace monoref::surface {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};

namespace {

// ---------------------------------------------------------------------------
// Parsing

const std::set<std::string, std::less<>> kKeywords = {
    "lambda", "let", "begin", "ref", "!", ":=", "cast", "pair", "fst", "snd", "succ", "prev", "zero?",
};

SurfExpr make(SourcePos pos, SurfExpr::Node node) { return SurfExpr{pos, std::move(node)}; }

Name parse_name(const SExpr& sx) {
  if (!sx.is_atom()) throw ParseError(sx.pos, "expected an identifier");
  const auto& a = sx.atom();
  if (kKeywords.contains(a)) throw ParseError(sx.pos, "'" + a + "' is a reserved word");
  if (a.find('$') != std::string::npos) throw ParseError(sx.pos, "identifiers may not contain '$'");
  if (a.front() == '#' || read_int_literal(a)) throw ParseError(sx.pos, "expected an identifier, got '" + a + "'");
  return a;
}

void arity(const SExpr& sx, std::size_t n, std::string_view form) {
  if (sx.list().size() != n) {
    throw ParseError(sx.pos, "'" + std::string(form) + "' expects " + std::to_string(n - 1) + " operand(s)");
  }
}

// (x T) or (x e)
const SExpr::List& binder(const SExpr& sx, std::string_view form) {
  if (!sx.is_list() || sx.list().size() != 2) {
    throw ParseError(sx.pos, "malformed binder in '" + std::string(form) + "'");
  }
  return sx.list();
}

SurfExpr parse_expr(const SExpr& sx) {
  if (sx.is_atom()) {
    const auto& a = sx.atom();
    if (auto n = read_int_literal(a)) return make(sx.pos, SurfExpr::Lit{Const(std::move(*n))});
    if (a == "#t") return make(sx.pos, SurfExpr::Lit{Const(true)});
    if (a == "#f") return make(sx.pos, SurfExpr::Lit{Const(false)});
    return make(sx.pos, SurfExpr::Var{parse_name(sx)});
  }
  const auto& l = sx.list();
  if (l.empty()) throw ParseError(sx.pos, "empty expression");
  const std::string head = l[0].is_atom() ? l[0].atom() : std::string();
  auto sub = [&](std::size_t i) { return SBox(parse_expr(l[i])); };

  if (head == "lambda") {
    arity(sx, 3, head);
    const auto& b = binder(l[1], head);
    return make(sx.pos, SurfExpr::Lambda{parse_name(b[0]), read_type(b[1]), sub(2)});
  }
  if (head == "let") {
    arity(sx, 3, head);
    const auto& b = binder(l[1], head);
    return make(sx.pos, SurfExpr::Let{parse_name(b[0]), SBox(parse_expr(b[1])), sub(2)});
  }
  if (head == "begin") {
    if (l.size() < 2) throw ParseError(sx.pos, "'begin' needs at least one expression");
    SurfExpr acc = parse_expr(l.back());
    for (std::size_t i = l.size() - 2; i >= 1; --i) {
      acc = make(l[i].pos, SurfExpr::Begin{sub(i), SBox(std::move(acc))});
    }
    return acc;
  }
  if (head == "ref") {
    arity(sx, 3, head);
    return make(sx.pos, SurfExpr::RefNew{read_type(l[1]), sub(2)});
  }
  if (head == "!") {
    arity(sx, 2, head);
    return make(sx.pos, SurfExpr::Deref{sub(1)});
  }
  if (head == ":=") {
    arity(sx, 3, head);
    return make(sx.pos, SurfExpr::Assign{sub(1), sub(2)});
  }
  if (head == "cast") {
    arity(sx, 3, head);
    return make(sx.pos, SurfExpr::Cast{sub(1), read_type(l[2])});
  }
  if (head == "pair") {
    arity(sx, 3, head);
    return make(sx.pos, SurfExpr::Pair{sub(1), sub(2)});
  }
  if (head == "fst" || head == "snd") {
    arity(sx, 2, head);
    if (head == "fst") return make(sx.pos, SurfExpr::Fst{sub(1)});
    return make(sx.pos, SurfExpr::Snd{sub(1)});
  }
  if (head == "succ" || head == "prev" || head == "zero?") {
    arity(sx, 2, head);
    const PrimOp op = head == "succ" ? PrimOp::Succ : head == "prev" ? PrimOp::Prev : PrimOp::IsZero;
    return make(sx.pos, SurfExpr::Prim{op, sub(1)});
  }
  if (l.size() != 2) throw ParseError(sx.pos, "application takes exactly one argument");
  return make(sx.pos, SurfExpr::App{sub(0), sub(1)});
}

// ---------------------------------------------------------------------------
// Typing

Ty prim_arg(PrimOp) { return Ty::Int(); }
Ty prim_result(PrimOp op) { return op == PrimOp::IsZero ? Ty::Bool() : Ty::Int(); }

std::string prim_name(PrimOp op) {
  switch (op) {
    case PrimOp::Succ: return "succ";
    case PrimOp::Prev: return "prev";
    case PrimOp::IsZero: return "zero?";
  }
  return "?";
}

const Ty& dyn_fn() {
  static const Ty t = Ty::Arrow(Ty::Dyn(), Ty::Dyn());
  return t;
}
const Ty& dyn_pair() {
  static const Ty t = Ty::Pair(Ty::Dyn(), Ty::Dyn());
  return t;
}
const Ty& dyn_ref() {
  static const Ty t = Ty::Ref(Ty::Dyn());
  return t;
}

class SurfaceChecker {
 public:
  explicit SurfaceChecker(std::vector<Coercion>* out) : out_(out) {}

  Checked<Ty> check(const TyEnv& gamma, const SurfExpr& e) {
    const SourcePos pos = e.pos;
    auto fail = [&](std::string msg) -> Checked<Ty> { return Diagnostic{std::move(msg), {}, pos}; };
    return std::visit(
        overloaded{
            [&](const SurfExpr::Lit& n) -> Checked<Ty> { return typeof_const(n.value); },
            [&](const SurfExpr::Var& n) -> Checked<Ty> {
              if (const Ty* t = find(n.name, gamma)) return *t;
              return fail("unbound variable '" + n.name + "'");
            },
            [&](const SurfExpr::Lambda& n) -> Checked<Ty> {
              auto body = check(extend(n.param, n.ann, gamma), *n.body);
              if (!body) return body;
              return Ty::Arrow(n.ann, *body);
            },
            [&](const SurfExpr::App& n) -> Checked<Ty> {
              auto f = check(gamma, *n.fn);
              if (!f) return f;
              Ty fn = *f;
              if (fn.is_dyn()) {
                note(n.fn->pos, fn, dyn_fn());
                fn = dyn_fn();
              }
              if (!fn.is(Ty::Kind::Arrow)) return fail("application of non-function type " + fn.str());
              auto a = check(gamma, *n.arg);
              if (!a) return a;
              if (!admit(n.arg->pos, *a, fn.dom())) {
                return fail("argument of type " + a->str() + " is inconsistent with parameter type " + fn.dom().str());
              }
              return fn.cod();
            },
            [&](const SurfExpr::Pair& n) -> Checked<Ty> {
              auto a = check(gamma, *n.fst);
              if (!a) return a;
              auto b = check(gamma, *n.snd);
              if (!b) return b;
              return Ty::Pair(*a, *b);
            },
            [&](const SurfExpr::Fst& n) -> Checked<Ty> { return projection(gamma, *n.pair, true, pos); },
            [&](const SurfExpr::Snd& n) -> Checked<Ty> { return projection(gamma, *n.pair, false, pos); },
            [&](const SurfExpr::Prim& n) -> Checked<Ty> {
              auto a = check(gamma, *n.arg);
              if (!a) return a;
              if (!admit(n.arg->pos, *a, prim_arg(n.op))) {
                return fail(prim_name(n.op) + " expects int, got " + a->str());
              }
              return prim_result(n.op);
            },
            [&](const SurfExpr::RefNew& n) -> Checked<Ty> {
              auto a = check(gamma, *n.init);
              if (!a) return a;
              if (!admit(n.init->pos, *a, n.cell)) {
                return fail("initialiser of type " + a->str() + " is inconsistent with cell type " + n.cell.str());
              }
              return Ty::Ref(n.cell);
            },
            [&](const SurfExpr::Deref& n) -> Checked<Ty> {
              auto r = reference(gamma, *n.ref);
              if (!r) return r;
              return r->cell();
            },
            [&](const SurfExpr::Assign& n) -> Checked<Ty> {
              auto r = reference(gamma, *n.target);
              if (!r) return r;
              auto v = check(gamma, *n.value);
              if (!v) return v;
              if (!admit(n.value->pos, *v, r->cell())) {
                return fail("cannot store " + v->str() + " into " + r->str());
              }
              return r->cell();
            },
            [&](const SurfExpr::Cast& n) -> Checked<Ty> {
              auto a = check(gamma, *n.value);
              if (!a) return a;
              if (!consistent(*a, n.target)) {
                return fail("cannot cast " + a->str() + " to inconsistent type " + n.target.str());
              }
              if (!(*a == n.target)) note(n.value->pos, *a, n.target);
              return n.target;
            },
            [&](const SurfExpr::Let& n) -> Checked<Ty> {
              auto a = check(gamma, *n.rhs);
              if (!a) return a;
              return check(extend(n.var, *a, gamma), *n.body);
            },
            [&](const SurfExpr::Begin& n) -> Checked<Ty> {
              auto a = check(gamma, *n.first);
              if (!a) return a;
              return check(gamma, *n.second);
            },
        },
        e.node);
  }

 private:
  void note(SourcePos pos, const Ty& from, const Ty& to) {
    if (out_) out_->push_back(Coercion{pos, from, to});
  }

  // Accepts `actual` where `expected` is required.
  bool admit(SourcePos pos, const Ty& actual, const Ty& expected) {
    if (!consistent(actual, expected)) return false;
    if (!(actual == expected)) note(pos, actual, expected);
    return true;
  }

  Checked<Ty> reference(const TyEnv& gamma, const SurfExpr& e) {
    auto r = check(gamma, e);
    if (!r) return r;
    if (r->is_dyn()) {
      note(e.pos, *r, dyn_ref());
      return dyn_ref();
    }
    if (!r->is(Ty::Kind::Ref)) return Diagnostic{"expected a reference, got " + r->str(), {}, e.pos};
    return r;
  }

  Checked<Ty> projection(const TyEnv& gamma, const SurfExpr& e, bool first, SourcePos pos) {
    auto p = check(gamma, e);
    if (!p) return p;
    Ty t = *p;
    if (t.is_dyn()) {
      note(e.pos, t, dyn_pair());
      t = dyn_pair();
    }
    if (!t.is(Ty::Kind::Pair)) {
      return Diagnostic{std::string(first ? "fst" : "snd") + " of non-pair type " + t.str(), {}, pos};
    }
    return first ? t.left() : t.right();
  }

  std::vector<Coercion>* out_;
};

// ---------------------------------------------------------------------------
// Elaboration

Ty must(Checked<Ty> t) {
  if (!t) throw std::logic_error("elaborate: program does not typecheck: " + t.error().str());
  return *t;
}

class Elaborator {
 public:
  // Receives an atom (variable or literal) and its type; builds the rest of
  // the program.
  using Kont = std::function<Stmt(Expr, Ty)>;

  struct Scope {
    AssocList<Name, std::pair<Name, Ty>> names;  // user name -> (IR name, type)
  };

  Stmt tail(const Scope& sc, const SurfExpr& e, Ty* result) {
    if (const auto* app = std::get_if<SurfExpr::App>(&e.node)) {
      return application(sc, *app, [&](const Expr& fn, const Expr& arg, const Ty& fn_ty) {
        *result = fn_ty.cod();
        return ir::tail_call(fn, arg);
      });
    }
    if (const auto* let = std::get_if<SurfExpr::Let>(&e.node)) {
      return bind(sc, *let->rhs, [&](Expr a, Ty t) {
        const Name x = user_name(let->var);
        Scope inner{extend(let->var, std::pair{x, t}, sc.names)};
        return ir::let(x, std::move(a), tail(inner, *let->body, result));
      });
    }
    if (const auto* seq = std::get_if<SurfExpr::Begin>(&e.node)) {
      return bind(sc, *seq->first, [&](Expr, Ty) { return tail(sc, *seq->second, result); });
    }
    return bind(sc, e, [&](Expr a, Ty t) {
      *result = t;
      return ir::ret(std::move(a));
    });
  }

  Stmt bind(const Scope& sc, const SurfExpr& e, const Kont& k) {
    return std::visit(
        overloaded{
            [&](const SurfExpr::Lit& n) { return k(ir::lit(n.value), typeof_const(n.value)); },
            [&](const SurfExpr::Var& n) {
              const auto* entry = find(n.name, sc.names);
              if (entry == nullptr) throw std::logic_error("elaborate: unbound variable " + n.name);
              return k(ir::var(entry->first), entry->second);
            },
            [&](const SurfExpr::Lambda& n) {
              const Name x = user_name(n.param);
              Scope inner{extend(n.param, std::pair{x, n.ann}, sc.names)};
              Ty body_ty = Ty::Dyn();
              Stmt body = tail(inner, *n.body, &body_ty);
              // Closures are let-bound so that every atom is a variable or a
              // literal and can be used twice without building two closures.
              const Name t = temp();
              const Ty fn_ty = Ty::Arrow(n.ann, body_ty);
              return ir::let(t, ir::lam(x, n.ann, std::move(body)), k(ir::var(t), fn_ty));
            },
            [&](const SurfExpr::App& n) {
              return application(sc, n, [&](const Expr& fn, const Expr& arg, const Ty& fn_ty) {
                const Name t = temp();
                return ir::call(t, fn, arg, k(ir::var(t), fn_ty.cod()));
              });
            },
            [&](const SurfExpr::Pair& n) {
              return bind(sc, *n.fst, [&](Expr a, Ty ta) {
                return bind(sc, *n.snd, [&](Expr b, Ty tb) {
                  return let_bind(ir::pair(a, b), Ty::Pair(ta, tb), k);
                });
              });
            },
            [&](const SurfExpr::Fst& n) { return projection(sc, *n.pair, true, k); },
            [&](const SurfExpr::Snd& n) { return projection(sc, *n.pair, false, k); },
            [&](const SurfExpr::Prim& n) {
              return bind(sc, *n.arg, [&](Expr a, Ty ta) {
                return coerce(std::move(a), ta, prim_arg(n.op), [&](Expr a2, Ty) {
                  const Opr op = n.op == PrimOp::Succ   ? Opr::succ()
                                 : n.op == PrimOp::Prev ? Opr::prev()
                                                        : Opr::is_zero();
                  return let_bind(ir::prim(op, a2), prim_result(n.op), k);
                });
              });
            },
            [&](const SurfExpr::RefNew& n) {
              return bind(sc, *n.init, [&](Expr a, Ty ta) {
                return coerce(std::move(a), ta, n.cell, [&](Expr a2, Ty) {
                  const Name t = temp();
                  return ir::alloc(t, n.cell, a2, k(ir::var(t), Ty::Ref(n.cell)));
                });
              });
            },
            [&](const SurfExpr::Deref& n) {
              return reference(sc, *n.ref, [&](Expr r, Ty rt) {
                const Ty& cell = rt.cell();
                const Name t = temp();
                if (is_static(cell)) return ir::let(t, ir::deref(r), k(ir::var(t), cell));
                return ir::dyn_deref(t, r, cell, k(ir::var(t), cell));
              });
            },
            [&](const SurfExpr::Assign& n) {
              return reference(sc, *n.target, [&](Expr r, Ty rt) {
                const Ty cell = rt.cell();
                return bind(sc, *n.value, [&](Expr v, Ty tv) {
                  return coerce(std::move(v), tv, cell, [&](Expr v2, Ty) {
                    if (is_static(cell)) return ir::update(r, v2, k(v2, cell));
                    return ir::dyn_update(r, v2, cell, k(v2, cell));
                  });
                });
              });
            },
            [&](const SurfExpr::Cast& n) {
              return bind(sc, *n.value, [&](Expr a, Ty ta) { return coerce(std::move(a), ta, n.target, k); });
            },
            [&](const SurfExpr::Let& n) {
              return bind(sc, *n.rhs, [&](Expr a, Ty t) {
                const Name x = user_name(n.var);
                Scope inner{extend(n.var, std::pair{x, t}, sc.names)};
                return ir::let(x, std::move(a), bind(inner, *n.body, k));
              });
            },
            [&](const SurfExpr::Begin& n) {
              return bind(sc, *n.first, [&](Expr, Ty) { return bind(sc, *n.second, k); });
            },
        },
        e.node);
  }

 private:
  using AppKont = std::function<Stmt(const Expr& fn, const Expr& arg, const Ty& fn_ty)>;

  Stmt application(const Scope& sc, const SurfExpr::App& n, const AppKont& k) {
    return bind(sc, *n.fn, [&](Expr f, Ty tf) {
      const Ty fn_ty = tf.is_dyn() ? dyn_fn() : tf;
      if (!fn_ty.is(Ty::Kind::Arrow)) throw std::logic_error("elaborate: application of " + tf.str());
      return coerce(std::move(f), tf, fn_ty, [&](Expr f2, Ty) {
        return bind(sc, *n.arg, [&](Expr a, Ty ta) {
          return coerce(std::move(a), ta, fn_ty.dom(), [&](Expr a2, Ty) { return k(f2, a2, fn_ty); });
        });
      });
    });
  }

  Stmt reference(const Scope& sc, const SurfExpr& e, const Kont& k) {
    return bind(sc, e, [&](Expr r, Ty tr) {
      const Ty ref_ty = tr.is_dyn() ? dyn_ref() : tr;
      if (!ref_ty.is(Ty::Kind::Ref)) throw std::logic_error("elaborate: expected reference, got " + tr.str());
      return coerce(std::move(r), tr, ref_ty, k);
    });
  }

  Stmt projection(const Scope& sc, const SurfExpr& e, bool first, const Kont& k) {
    return bind(sc, e, [&](Expr p, Ty tp) {
      const Ty pair_ty = tp.is_dyn() ? dyn_pair() : tp;
      if (!pair_ty.is(Ty::Kind::Pair)) throw std::logic_error("elaborate: projection from " + tp.str());
      return coerce(std::move(p), tp, pair_ty, [&](Expr p2, Ty) {
        const Ty& a = pair_ty.left();
        const Ty& b = pair_ty.right();
        const Opr op = first ? Opr::fst(a, b) : Opr::snd(a, b);
        return let_bind(ir::prim(op, p2), first ? a : b, k);
      });
    });
  }

  Stmt coerce(Expr a, const Ty& from, const Ty& to, const Kont& k) {
    if (from == to) return k(std::move(a), to);
    if (!consistent(from, to)) throw std::logic_error("elaborate: inconsistent " + from.str() + " ~ " + to.str());
    const Name t = temp();
    return ir::cast(t, std::move(a), from, to, k(ir::var(t), to));
  }

  Stmt let_bind(Expr rhs, Ty ty, const Kont& k) {
    const Name t = temp();
    return ir::let(t, std::move(rhs), k(ir::var(t), std::move(ty)));
  }

  Name temp() { return "$t" + std::to_string(next_temp_++); }

  // The first binder of a name keeps it; later ones get a `$` suffix, which
  // no user identifier can contain.
  Name user_name(const Name& x) {
    if (used_.insert(x).second) return x;
    for (int i = 1;; ++i) {
      Name candidate = x + "$" + std::to_string(i);
      if (used_.insert(candidate).second) return candidate;
    }
  }

  int next_temp_ = 0;
  std::set<Name> used_;
};

}  // namespace

SurfExpr parse_surface(std::string_view text) {
  auto data = read_sexprs(text);
  if (data.empty()) throw ParseError(SourcePos{}, "empty program");
  if (data.size() > 1) throw ParseError(data[1].pos, "expected a single expression");
  return parse_expr(data[0]);
}

bool consistent(const Ty& a, const Ty& b) {
  if (a.is_dyn() || b.is_dyn()) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Ty::Kind::Int:
    case Ty::Kind::Bool: return true;
    case Ty::Kind::Pair:
    case Ty::Kind::Arrow: return consistent(a.left(), b.left()) && consistent(a.right(), b.right());
    case Ty::Kind::Ref: return consistent(a.cell(), b.cell());
    case Ty::Kind::Dyn: return true;
  }
  return false;
}

Checked<Ty> typecheck_surface(const TyEnv& gamma, const SurfExpr& e, std::vector<Coercion>* coercions) {
  return SurfaceChecker(coercions).check(gamma, e);
}

Stmt elaborate(const SurfExpr& e) {
  (void)must(typecheck_surface({}, e));
  Elaborator el;
  Ty ty = Ty::Dyn();
  return el.tail({}, e, &ty);
}

Checked<Compiled> compile(std::string_view text) {
  SurfExpr ast = parse_surface(text);
  auto ty = typecheck_surface({}, ast);
  if (!ty) return ty.error();
  Stmt ir = elaborate(ast);
  return Compiled{std::move(ast), *ty, std::move(ir)};
}

}  // namespace monoref::surface
