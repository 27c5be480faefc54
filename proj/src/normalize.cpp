#include "xdt/normalize.hpp"

#include "xdt/errors.hpp"

namespace xdt {

namespace {

constexpr int kNormalizeFuel = 10000;

struct Normalizer {
  int fuel = kNormalizeFuel;

  void burn() {
    if (--fuel < 0)
      fail(ErrorCode::Internal, "type normalization exceeded its rewrite budget");
  }

  // Contract head redexes of an application whose parts are already normal.
  Type apply(const Type& f, const Type& a) {
    switch (f->tag) {
      case TyTag::Lam:
        burn();
        return norm(substFunctor(f->a, 0, a));
      case TyTag::Prod:
        burn();
        return tyProd(apply(f->a, a), apply(f->b, a));
      case TyTag::Sum:
        burn();
        return tySum(apply(f->a, a), apply(f->b, a));
      case TyTag::Unit:
        burn();
        return tyUnit();
      case TyTag::Empty:
        burn();
        return tyEmpty();
      default:
        return tyApp(f, a);
    }
  }

  Type norm(const Type& t) {
    switch (t->tag) {
      case TyTag::MixedVar:
      case TyTag::FunctorVar:
      case TyTag::Empty:
      case TyTag::Unit:
        return t;
      case TyTag::App: {
        Type f = norm(t->a);
        Type a = norm(t->b);
        return apply(f, a);
      }
      case TyTag::Lam: {
        Type body = norm(t->a);
        // eta: \X. f X == f when X not free in f
        if (body->tag == TyTag::App && body->b->tag == TyTag::FunctorVar &&
            body->b->index == 0 && !functorOccurs(body->a, 0)) {
          burn();
          return shiftFunctor(body->a, -1);
        }
        if (body == t->a) return t;
        return tyLam(t->binderKind, t->hint, body);
      }
      case TyTag::Mu: {
        Type body = norm(t->a);
        return body == t->a ? t : tyMu(body);
      }
      case TyTag::Fun: {
        Type a = norm(t->a), b = norm(t->b);
        return (a == t->a && b == t->b) ? t : tyFun(a, b);
      }
      case TyTag::Prod: {
        Type a = norm(t->a), b = norm(t->b);
        return (a == t->a && b == t->b) ? t : tyProd(a, b);
      }
      case TyTag::Sum: {
        Type a = norm(t->a), b = norm(t->b);
        return (a == t->a && b == t->b) ? t : tySum(a, b);
      }
    }
    return t;
  }
};

} // namespace

Type normalizeType(const Type& t) {
  Normalizer n;
  return n.norm(t);
}

bool typesEquivalentMono(const Type& a, const Type& b) {
  return typeEq(normalizeType(a), normalizeType(b));
}

bool typesEquivalent(const Scheme& a, const Scheme& b) {
  if (a->binders.size() != b->binders.size()) return false;
  for (size_t i = 0; i < a->binders.size(); i++)
    if (!kindEq(a->binders[i].kind, b->binders[i].kind)) return false;
  return typesEquivalentMono(a->body, b->body);
}

} // namespace xdt
