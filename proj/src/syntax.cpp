#include "monoref/syntax.hpp"

#include <cctype>
#include <utility>

#include "monoref/sexpr.hpp"

namespace monoref {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};

std::string Const::str() const {
  if (is_bool()) return as_bool() ? "#t" : "#f";
  return as_int().str();
}

Ty typeof_const(const Const& c) { return c.is_int() ? Ty::Int() : Ty::Bool(); }

bool operator==(const Opr& x, const Opr& y) {
  if (x.kind != y.kind) return false;
  if (x.kind == Opr::Kind::Fst || x.kind == Opr::Kind::Snd) return x.a == y.a && x.b == y.b;
  return true;
}

Ty typeof_opr(const Opr& f) {
  switch (f.kind) {
    case Opr::Kind::Succ:
    case Opr::Kind::Prev: return Ty::Arrow(Ty::Int(), Ty::Int());
    case Opr::Kind::IsZero: return Ty::Arrow(Ty::Int(), Ty::Bool());
    case Opr::Kind::Fst: return Ty::Arrow(Ty::Pair(f.a, f.b), f.a);
    case Opr::Kind::Snd: return Ty::Arrow(Ty::Pair(f.a, f.b), f.b);
  }
  return Ty::Dyn();
}

namespace ir {

Expr var(Name x) { return Expr{Expr::Var{std::move(x)}}; }
Expr lit(Const c) { return Expr{Expr::Lit{std::move(c)}}; }
Expr prim(Opr f, Expr arg) { return Expr{Expr::PrimApp{std::move(f), std::move(arg)}}; }
Expr pair(Expr a, Expr b) { return Expr{Expr::MkPair{std::move(a), std::move(b)}}; }
Expr lam(Name x, Ty param_ty, Stmt body) {
  return Expr{Expr::Lam{std::move(x), std::move(param_ty), std::move(body)}};
}
Expr deref(Expr r) { return Expr{Expr::Deref{std::move(r)}}; }

Stmt let(Name x, Expr rhs, Stmt body) { return Stmt{Stmt::Let{std::move(x), std::move(rhs), std::move(body)}}; }
Stmt ret(Expr e) { return Stmt{Stmt::Return{std::move(e)}}; }
Stmt call(Name x, Expr fn, Expr arg, Stmt body) {
  return Stmt{Stmt::Call{std::move(x), std::move(fn), std::move(arg), std::move(body)}};
}
Stmt tail_call(Expr fn, Expr arg) { return Stmt{Stmt::TailCall{std::move(fn), std::move(arg)}}; }
Stmt alloc(Name x, Ty cell_ty, Expr init, Stmt body) {
  return Stmt{Stmt::Alloc{std::move(x), std::move(cell_ty), std::move(init), std::move(body)}};
}
Stmt update(Expr r, Expr v, Stmt body) { return Stmt{Stmt::Update{std::move(r), std::move(v), std::move(body)}}; }
Stmt dyn_update(Expr r, Expr v, Ty ann, Stmt body) {
  return Stmt{Stmt::DynUpdate{std::move(r), std::move(v), std::move(ann), std::move(body)}};
}
Stmt cast(Name x, Expr e, Ty src, Ty tgt, Stmt body) {
  return Stmt{Stmt::Cast{std::move(x), std::move(e), std::move(src), std::move(tgt), std::move(body)}};
}
Stmt dyn_deref(Name x, Expr r, Ty ann, Stmt body) {
  return Stmt{Stmt::DynDeref{std::move(x), std::move(r), std::move(ann), std::move(body)}};
}

}  // namespace ir

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent), ' '); }

std::string print_expr(const Expr& e, int indent);

std::string print_stmt(const Stmt& s, int indent) {
  const std::string nl = "\n" + pad(indent + 2);
  auto cont = [&](const Box<Stmt>& body) { return nl + print_stmt(*body, indent + 2) + ")"; };
  return std::visit(
      overloaded{
          [&](const Stmt::Let& n) { return "(let " + n.var + " " + print_expr(n.rhs, indent) + cont(n.body); },
          [&](const Stmt::Return& n) { return "(return " + print_expr(n.value, indent) + ")"; },
          [&](const Stmt::Call& n) {
            return "(call " + n.var + " " + print_expr(n.fn, indent) + " " + print_expr(n.arg, indent) +
                   cont(n.body);
          },
          [&](const Stmt::TailCall& n) {
            return "(tail-call " + print_expr(n.fn, indent) + " " + print_expr(n.arg, indent) + ")";
          },
          [&](const Stmt::Alloc& n) {
            return "(alloc " + n.var + " " + n.cell_ty.str() + " " + print_expr(n.init, indent) + cont(n.body);
          },
          [&](const Stmt::Update& n) {
            return "(update " + print_expr(n.ref, indent) + " " + print_expr(n.value, indent) + cont(n.body);
          },
          [&](const Stmt::DynUpdate& n) {
            return "(dyn-update " + print_expr(n.ref, indent) + " " + print_expr(n.value, indent) + " " +
                   n.ann.str() + cont(n.body);
          },
          [&](const Stmt::Cast& n) {
            return "(cast " + n.var + " " + print_expr(n.value, indent) + " " + n.src.str() + " " + n.tgt.str() +
                   cont(n.body);
          },
          [&](const Stmt::DynDeref& n) {
            return "(dyn-deref " + n.var + " " + print_expr(n.ref, indent) + " " + n.ann.str() + cont(n.body);
          },
      },
      s.node);
}

std::string print_expr(const Expr& e, int indent) {
  return std::visit(
      overloaded{
          [&](const Expr::Var& n) { return n.name; },
          [&](const Expr::Lit& n) { return n.value.str(); },
          [&](const Expr::PrimApp& n) {
            const std::string arg = print_expr(*n.arg, indent);
            switch (n.op.kind) {
              case Opr::Kind::Succ: return "(succ " + arg + ")";
              case Opr::Kind::Prev: return "(prev " + arg + ")";
              case Opr::Kind::IsZero: return "(zero? " + arg + ")";
              case Opr::Kind::Fst: return "(fst " + n.op.a.str() + " " + n.op.b.str() + " " + arg + ")";
              case Opr::Kind::Snd: return "(snd " + n.op.a.str() + " " + n.op.b.str() + " " + arg + ")";
            }
            return std::string("?");
          },
          [&](const Expr::MkPair& n) {
            return "(pair " + print_expr(*n.fst, indent) + " " + print_expr(*n.snd, indent) + ")";
          },
          [&](const Expr::Lam& n) {
            return "(lambda (" + n.param + " " + n.param_ty.str() + ")\n" + pad(indent + 4) +
                   print_stmt(*n.body, indent + 4) + ")";
          },
          [&](const Expr::Deref& n) { return "(! " + print_expr(*n.ref, indent) + ")"; },
      },
      e.node);
}

}  // namespace

std::string print_ir(const Stmt& s) { return print_stmt(s, 0); }
std::string print_ir(const Expr& e) { return print_expr(e, 0); }

// ---------------------------------------------------------------------------
// Reading

std::optional<BigInt> read_int_literal(std::string_view atom) {
  std::size_t i = 0;
  if (!atom.empty() && atom[0] == '-') i = 1;
  if (i == atom.size()) return std::nullopt;
  for (std::size_t j = i; j < atom.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(atom[j]))) return std::nullopt;
  }
  return BigInt(std::string(atom));
}

namespace {

const SExpr::List& expect_list(const SExpr& sx, std::size_t arity, std::string_view what) {
  if (!sx.is_list() || sx.list().size() != arity) {
    throw ParseError(sx.pos, "malformed " + std::string(what) + ": expected " + std::to_string(arity) +
                                 " elements");
  }
  return sx.list();
}

}  // namespace

Ty read_type(const SExpr& sx) {
  if (sx.is_atom()) {
    const auto& a = sx.atom();
    if (a == "int") return Ty::Int();
    if (a == "bool") return Ty::Bool();
    if (a == "dyn" || a == "★" || a == "*") return Ty::Dyn();
    throw ParseError(sx.pos, "unknown type '" + a + "'");
  }
  const auto& l = sx.list();
  if (l.empty() || !l[0].is_atom()) throw ParseError(sx.pos, "malformed type");
  const auto& head = l[0].atom();
  if (head == "->") {
    expect_list(sx, 3, "arrow type");
    return Ty::Arrow(read_type(l[1]), read_type(l[2]));
  }
  if (head == "pair-ty" || head == "pair" || head == "×") {
    expect_list(sx, 3, "pair type");
    return Ty::Pair(read_type(l[1]), read_type(l[2]));
  }
  if (head == "ref-ty" || head == "ref") {
    expect_list(sx, 2, "reference type");
    return Ty::Ref(read_type(l[1]));
  }
  throw ParseError(sx.pos, "unknown type constructor '" + head + "'");
}

namespace {

Name read_name(const SExpr& sx) {
  if (!sx.is_atom() || sx.atom().empty() || sx.atom()[0] == '(' || read_int_literal(sx.atom()) ||
      sx.atom()[0] == '#') {
    throw ParseError(sx.pos, "expected a variable name");
  }
  return sx.atom();
}

Expr read_ir_expr(const SExpr& sx);

Stmt read_ir_stmt(const SExpr& sx) {
  if (!sx.is_list() || sx.list().empty() || !sx.list()[0].is_atom()) {
    throw ParseError(sx.pos, "expected a statement");
  }
  const auto& l = sx.list();
  const auto& head = l[0].atom();
  if (head == "let") {
    expect_list(sx, 4, "let");
    return ir::let(read_name(l[1]), read_ir_expr(l[2]), read_ir_stmt(l[3]));
  }
  if (head == "return") {
    expect_list(sx, 2, "return");
    return ir::ret(read_ir_expr(l[1]));
  }
  if (head == "call") {
    expect_list(sx, 5, "call");
    return ir::call(read_name(l[1]), read_ir_expr(l[2]), read_ir_expr(l[3]), read_ir_stmt(l[4]));
  }
  if (head == "tail-call") {
    expect_list(sx, 3, "tail-call");
    return ir::tail_call(read_ir_expr(l[1]), read_ir_expr(l[2]));
  }
  if (head == "alloc") {
    expect_list(sx, 5, "alloc");
    return ir::alloc(read_name(l[1]), read_type(l[2]), read_ir_expr(l[3]), read_ir_stmt(l[4]));
  }
  if (head == "update") {
    expect_list(sx, 4, "update");
    return ir::update(read_ir_expr(l[1]), read_ir_expr(l[2]), read_ir_stmt(l[3]));
  }
  if (head == "dyn-update") {
    expect_list(sx, 5, "dyn-update");
    return ir::dyn_update(read_ir_expr(l[1]), read_ir_expr(l[2]), read_type(l[3]), read_ir_stmt(l[4]));
  }
  if (head == "cast") {
    expect_list(sx, 6, "cast");
    return ir::cast(read_name(l[1]), read_ir_expr(l[2]), read_type(l[3]), read_type(l[4]), read_ir_stmt(l[5]));
  }
  if (head == "dyn-deref") {
    expect_list(sx, 5, "dyn-deref");
    return ir::dyn_deref(read_name(l[1]), read_ir_expr(l[2]), read_type(l[3]), read_ir_stmt(l[4]));
  }
  throw ParseError(sx.pos, "unknown statement form '" + head + "'");
}

Expr read_ir_expr(const SExpr& sx) {
  if (sx.is_atom()) {
    const auto& a = sx.atom();
    if (a == "#t") return ir::lit(Const(true));
    if (a == "#f") return ir::lit(Const(false));
    if (auto n = read_int_literal(a)) return ir::lit(Const(*n));
    return ir::var(read_name(sx));
  }
  const auto& l = sx.list();
  if (l.empty() || !l[0].is_atom()) throw ParseError(sx.pos, "expected an expression");
  const auto& head = l[0].atom();
  if (head == "succ" || head == "prev" || head == "zero?") {
    expect_list(sx, 2, head);
    const Opr op = head == "succ" ? Opr::succ() : head == "prev" ? Opr::prev() : Opr::is_zero();
    return ir::prim(op, read_ir_expr(l[1]));
  }
  if (head == "fst" || head == "snd") {
    expect_list(sx, 4, head);
    Ty a = read_type(l[1]);
    Ty b = read_type(l[2]);
    const Opr op = head == "fst" ? Opr::fst(a, b) : Opr::snd(a, b);
    return ir::prim(op, read_ir_expr(l[3]));
  }
  if (head == "pair") {
    expect_list(sx, 3, "pair");
    return ir::pair(read_ir_expr(l[1]), read_ir_expr(l[2]));
  }
  if (head == "lambda") {
    expect_list(sx, 3, "lambda");
    const auto& binder = expect_list(l[1], 2, "lambda parameter");
    return ir::lam(read_name(binder[0]), read_type(binder[1]), read_ir_stmt(l[2]));
  }
  if (head == "!") {
    expect_list(sx, 2, "dereference");
    return ir::deref(read_ir_expr(l[1]));
  }
  throw ParseError(sx.pos, "unknown expression form '" + head + "'");
}

void tally(const Stmt& s, CastCensus& c);

void tally(const Expr& e, CastCensus& c) {
  std::visit(overloaded{
                 [&](const Expr::PrimApp& n) { tally(*n.arg, c); },
                 [&](const Expr::MkPair& n) {
                   tally(*n.fst, c);
                   tally(*n.snd, c);
                 },
                 [&](const Expr::Lam& n) { tally(*n.body, c); },
                 [&](const Expr::Deref& n) { tally(*n.ref, c); },
                 [](const auto&) {},
             },
             e.node);
}

void tally(const Stmt& s, CastCensus& c) {
  std::visit(overloaded{
                 [&](const Stmt::Let& n) {
                   tally(n.rhs, c);
                   tally(*n.body, c);
                 },
                 [&](const Stmt::Return& n) { tally(n.value, c); },
                 [&](const Stmt::Call& n) {
                   tally(n.fn, c);
                   tally(n.arg, c);
                   tally(*n.body, c);
                 },
                 [&](const Stmt::TailCall& n) {
                   tally(n.fn, c);
                   tally(n.arg, c);
                 },
                 [&](const Stmt::Alloc& n) {
                   tally(n.init, c);
                   tally(*n.body, c);
                 },
                 [&](const Stmt::Update& n) {
                   tally(n.ref, c);
                   tally(n.value, c);
                   tally(*n.body, c);
                 },
                 [&](const Stmt::DynUpdate& n) {
                   ++c.dyn_updates;
                   tally(n.ref, c);
                   tally(n.value, c);
                   tally(*n.body, c);
                 },
                 [&](const Stmt::Cast& n) {
                   ++c.casts;
                   if (contains_ref(n.src) || contains_ref(n.tgt)) ++c.ref_casts;
                   tally(n.value, c);
                   tally(*n.body, c);
                 },
                 [&](const Stmt::DynDeref& n) {
                   ++c.dyn_derefs;
                   tally(n.ref, c);
                   tally(*n.body, c);
                 },
             },
             s.node);
}

}  // namespace

Stmt read_ir(std::string_view text) { return read_ir_stmt(read_single_sexpr(text)); }

CastCensus census(const Stmt& s) {
  CastCensus c;
  tally(s, c);
  return c;
}

}  // namespace monoref
