#include "monoref/types.hpp"

#include <algorithm>

namespace monoref {

struct Ty::Node {
  Kind kind;
  Ty a;
  Ty b;
};

Ty Ty::Int() {
  static const Ty t(std::make_shared<const Node>(Node{Kind::Int, Ty(nullptr), Ty(nullptr)}));
  return t;
}

Ty Ty::Bool() {
  static const Ty t(std::make_shared<const Node>(Node{Kind::Bool, Ty(nullptr), Ty(nullptr)}));
  return t;
}

Ty Ty::Dyn() {
  static const Ty t(std::make_shared<const Node>(Node{Kind::Dyn, Ty(nullptr), Ty(nullptr)}));
  return t;
}

Ty Ty::Pair(Ty left, Ty right) {
  return Ty(std::make_shared<const Node>(Node{Kind::Pair, std::move(left), std::move(right)}));
}

Ty Ty::Arrow(Ty dom, Ty cod) {
  return Ty(std::make_shared<const Node>(Node{Kind::Arrow, std::move(dom), std::move(cod)}));
}

Ty Ty::Ref(Ty cell) {
  return Ty(std::make_shared<const Node>(Node{Kind::Ref, std::move(cell), Ty(nullptr)}));
}

Ty::Kind Ty::kind() const { return node_->kind; }
const Ty& Ty::left() const { return node_->a; }
const Ty& Ty::right() const { return node_->b; }

bool operator==(const Ty& a, const Ty& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Ty::Kind::Pair:
    case Ty::Kind::Arrow: return a.left() == b.left() && a.right() == b.right();
    case Ty::Kind::Ref: return a.cell() == b.cell();
    default: return true;
  }
}

std::string Ty::str() const {
  switch (kind()) {
    case Kind::Int: return "int";
    case Kind::Bool: return "bool";
    case Kind::Dyn: return "dyn";
    case Kind::Pair: return "(pair-ty " + left().str() + " " + right().str() + ")";
    case Kind::Arrow: return "(-> " + dom().str() + " " + cod().str() + ")";
    case Kind::Ref: return "(ref-ty " + cell().str() + ")";
  }
  return "?";
}

bool lesseq(const Ty& a, const Ty& b) {
  using K = Ty::Kind;
  if (b.is_dyn()) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case K::Int:
    case K::Bool: return true;
    case K::Pair:
    case K::Arrow: return lesseq(a.left(), b.left()) && lesseq(a.right(), b.right());
    case K::Ref: return lesseq(a.cell(), b.cell());
    case K::Dyn: return false;  // b is not ★ here
  }
  return false;
}

Result<Ty> meet(const Ty& a, const Ty& b) {
  using K = Ty::Kind;
  if (a.is_dyn()) return b;
  if (b.is_dyn()) return a;
  if (a.kind() != b.kind()) return Failure::CastError;
  switch (a.kind()) {
    case K::Int:
    case K::Bool: return a;
    case K::Pair: {
      MONOREF_TRY(Ty l, meet(a.left(), b.left()));
      MONOREF_TRY(Ty r, meet(a.right(), b.right()));
      return Ty::Pair(std::move(l), std::move(r));
    }
    case K::Arrow: {
      MONOREF_TRY(Ty d, meet(a.dom(), b.dom()));
      MONOREF_TRY(Ty c, meet(a.cod(), b.cod()));
      return Ty::Arrow(std::move(d), std::move(c));
    }
    case K::Ref: {
      MONOREF_TRY(Ty c, meet(a.cell(), b.cell()));
      return Ty::Ref(std::move(c));
    }
    case K::Dyn: break;
  }
  return Failure::CastError;
}

bool is_static(const Ty& a) {
  switch (a.kind()) {
    case Ty::Kind::Dyn: return false;
    case Ty::Kind::Int:
    case Ty::Kind::Bool: return true;
    case Ty::Kind::Pair:
    case Ty::Kind::Arrow: return is_static(a.left()) && is_static(a.right());
    case Ty::Kind::Ref: return is_static(a.cell());
  }
  return false;
}

Ty ground(const Ty& a) {
  switch (a.kind()) {
    case Ty::Kind::Pair: return Ty::Pair(Ty::Dyn(), Ty::Dyn());
    case Ty::Kind::Arrow: return Ty::Arrow(Ty::Dyn(), Ty::Dyn());
    case Ty::Kind::Ref: return Ty::Ref(Ty::Dyn());
    default: return a;
  }
}

int depth(const Ty& a) {
  switch (a.kind()) {
    case Ty::Kind::Pair:
    case Ty::Kind::Arrow: return 1 + std::max(depth(a.left()), depth(a.right()));
    case Ty::Kind::Ref: return 1 + depth(a.cell());
    default: return 1;
  }
}

bool contains_ref(const Ty& a) {
  switch (a.kind()) {
    case Ty::Kind::Pair:
    case Ty::Kind::Arrow: return contains_ref(a.left()) || contains_ref(a.right());
    case Ty::Kind::Ref: return true;
    default: return false;
  }
}

}  // namespace monoref
