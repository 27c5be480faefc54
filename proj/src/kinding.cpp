#include "xdt/kinding.hpp"

#include "xdt/errors.hpp"

namespace xdt {

namespace {

// A tree of units/empties under products and sums has no fixed kind; its
// kind comes from context.
bool flexibleConstant(const Type& t) {
  switch (t->tag) {
    case TyTag::Unit:
    case TyTag::Empty:
      return true;
    case TyTag::Prod:
    case TyTag::Sum:
      return flexibleConstant(t->a) && flexibleConstant(t->b);
    default:
      return false;
  }
}

[[noreturn]] void kindMismatch(const Kind& expected, const Kind& actual) {
  fail(ErrorCode::KindMismatch,
       "kind mismatch: expected " + showKind(expected) + ", got " + showKind(actual));
}

} // namespace

Kind inferKind(const KindCtx& delta, const FunctorCtx& phi, const Type& t) {
  switch (t->tag) {
    case TyTag::MixedVar:
      if (t->index < 0 || t->index >= (int)delta.size())
        fail(ErrorCode::UnboundTypeVar, "unbound type variable " + t->hint);
      return delta[t->index];
    case TyTag::FunctorVar:
      if (t->index < 0 || t->index >= (int)phi.size())
        fail(ErrorCode::UnboundTypeVar, "unbound functorial type variable " + t->hint);
      return phi[t->index];
    case TyTag::App: {
      Kind fk = inferKind(delta, phi, t->a);
      if (fk->isStar())
        fail(ErrorCode::KindMismatch, "type of kind * applied to an argument");
      checkKind(delta, phi, t->b, fk->dom);
      return fk->cod;
    }
    case TyTag::Lam: {
      FunctorCtx phi2 = phi;
      phi2.insert(phi2.begin(), t->binderKind);
      Kind bk = inferKind(delta, phi2, t->a);
      return kArrow(t->binderKind, bk);
    }
    case TyTag::Mu: {
      Kind bk = inferKind(delta, phi, t->a);
      if (bk->isStar() || !kindEq(bk->dom, bk->cod))
        fail(ErrorCode::MuBodyNotEndo, "mu body must have kind k -> k, got " + showKind(bk));
      return bk->dom;
    }
    case TyTag::Fun: {
      // K-Fun: the domain is kinded under an empty functor context.
      if (!freeFunctor(t->a).empty())
        fail(ErrorCode::FunctorVarInDomain,
             "functorial variable occurs in the domain of a function type");
      checkKind(delta, {}, t->a, kStar());
      checkKind(delta, phi, t->b, kStar());
      return kStar();
    }
    case TyTag::Empty:
    case TyTag::Unit:
      return kStar(); // polykinded; synthesis defaults to *
    case TyTag::Prod:
    case TyTag::Sum: {
      bool la = flexibleConstant(t->a), lb = flexibleConstant(t->b);
      if (la && lb) return kStar();
      if (la) {
        Kind k = inferKind(delta, phi, t->b);
        checkKind(delta, phi, t->a, k);
        return k;
      }
      Kind k = inferKind(delta, phi, t->a);
      checkKind(delta, phi, t->b, k);
      return k;
    }
  }
  fail(ErrorCode::Internal, "inferKind: unreachable");
}

void checkKind(const KindCtx& delta, const FunctorCtx& phi, const Type& t, const Kind& expected) {
  switch (t->tag) {
    case TyTag::Empty:
    case TyTag::Unit:
      return; // any kind
    case TyTag::Prod:
    case TyTag::Sum:
      checkKind(delta, phi, t->a, expected);
      checkKind(delta, phi, t->b, expected);
      return;
    case TyTag::Lam: {
      if (expected->isStar()) kindMismatch(expected, kArrow(t->binderKind, kStar()));
      if (!kindEq(expected->dom, t->binderKind))
        kindMismatch(expected->dom, t->binderKind);
      FunctorCtx phi2 = phi;
      phi2.insert(phi2.begin(), t->binderKind);
      checkKind(delta, phi2, t->a, expected->cod);
      return;
    }
    case TyTag::Mu:
      checkKind(delta, phi, t->a, kArrow(expected, expected));
      return;
    default: {
      Kind got = inferKind(delta, phi, t);
      if (!kindEq(got, expected)) kindMismatch(expected, got);
      return;
    }
  }
}

void checkScheme(const KindCtx& delta, const Scheme& s) {
  KindCtx d = delta;
  // binders.front() is outermost; innermost ends up at index 0
  for (const Binder& b : s->binders) d.insert(d.begin(), b.kind);
  Kind k = inferKind(d, {}, s->body);
  if (!k->isStar())
    fail(ErrorCode::SchemeBodyNotStar,
         "scheme body must have kind *, got " + showKind(k));
}

} // namespace xdt
