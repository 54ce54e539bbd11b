#include "monoref/values.hpp"

namespace monoref {

bool operator==(const Closure& a, const Closure& b) {
  return a.param == b.param && a.param_ty == b.param_ty && a.body == b.body && a.env == b.env;
}

namespace val {

Val integer(BigInt n) { return Val{VConst{Const(std::move(n))}}; }
Val boolean(bool b) { return Val{VConst{Const(b)}}; }
Val constant(Const c) { return Val{VConst{std::move(c)}}; }
Val pair(Val a, Val b) { return Val{VPair{std::move(a), std::move(b)}}; }
Val ref(Address a) { return Val{VRef{a}}; }
Val inject(Val v, Ty src) { return Val{Inject{std::move(v), std::move(src)}}; }
Val closure(Name param, Ty param_ty, Stmt body, Env env) {
  return Val{Closure{std::move(param), std::move(param_ty), std::move(body), std::move(env)}};
}

}  // namespace val

Observable Observable::pair(Observable a, Observable b) {
  Observable o;
  o.kind_ = Kind::Pair;
  o.children_.push_back(std::move(a));
  o.children_.push_back(std::move(b));
  return o;
}

Observable Observable::con(Const c) {
  Observable o;
  o.kind_ = Kind::Con;
  o.con_ = std::move(c);
  return o;
}

Observable Observable::of(Kind k) {
  Observable o;
  o.kind_ = k;
  return o;
}

Observable Observable::from(Failure f) {
  switch (f) {
    case Failure::Stuck: return of(Kind::Stuck);
    case Failure::TimeOut: return of(Kind::TimeOut);
    case Failure::CastError: return of(Kind::CastError);
  }
  return of(Kind::Stuck);
}

std::string Observable::str() const {
  switch (kind_) {
    case Kind::Pair: return "(pair " + fst().str() + " " + snd().str() + ")";
    case Kind::Fun: return "#fun";
    case Kind::Con: return con_->str();
    case Kind::Addr: return "#addr";
    case Kind::Inj: return "#inj";
    case Kind::Stuck: return "error: stuck";
    case Kind::TimeOut: return "timeout";
    case Kind::CastError: return "error: cast";
  }
  return "?";
}

Observable observe(const Val& v) {
  if (const auto* c = v.as<VConst>()) return Observable::con(c->value);
  if (const auto* p = v.as<VPair>()) return Observable::pair(observe(*p->fst), observe(*p->snd));
  if (v.as<Closure>()) return Observable::of(Observable::Kind::Fun);
  if (v.as<VRef>()) return Observable::of(Observable::Kind::Addr);
  return Observable::of(Observable::Kind::Inj);
}

std::string show(const Val& v) {
  if (const auto* c = v.as<VConst>()) return c->value.str();
  if (const auto* p = v.as<VPair>()) return "<" + show(*p->fst) + ", " + show(*p->snd) + ">";
  if (const auto* f = v.as<Closure>()) return "<closure " + f->param + ":" + f->param_ty.str() + ">";
  if (const auto* r = v.as<VRef>()) return "ref " + std::to_string(r->addr);
  const auto& i = std::get<Inject>(v.node);
  return "[" + show(*i.payload) + " : " + i.src.str() + " => dyn]";
}

std::string show(const CastedVal& cv) {
  if (const auto* p = cv.as_plain()) return show(p->v);
  const auto& q = *cv.as_pending();
  return "(" + show(q.v) + " : " + q.src.str() + " => " + q.tgt.str() + ")";
}

}  // namespace monoref
