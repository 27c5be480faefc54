#include "xdt/syntax.hpp"

#include "xdt/errors.hpp"

#include <cassert>

namespace xdt {

// ---------------------------------------------------------------------------
// Kinds
// ---------------------------------------------------------------------------

Kind kStar() {
  static const Kind star = std::make_shared<KindNode>();
  return star;
}

Kind kArrow(Kind dom, Kind cod) {
  auto n = std::make_shared<KindNode>();
  n->dom = std::move(dom);
  n->cod = std::move(cod);
  return n;
}

bool kindEq(const Kind& a, const Kind& b) {
  if (a == b) return true;
  if (a->isStar() || b->isStar()) return a->isStar() && b->isStar();
  return kindEq(a->dom, b->dom) && kindEq(a->cod, b->cod);
}

int kindArity(const Kind& k) {
  int n = 0;
  for (Kind c = k; !c->isStar(); c = c->cod) n++;
  return n;
}

std::vector<Kind> kindDomains(const Kind& k) {
  std::vector<Kind> out;
  for (Kind c = k; !c->isStar(); c = c->cod) out.push_back(c->dom);
  return out;
}

std::string showKind(const Kind& k) {
  if (k->isStar()) return "*";
  std::string d = showKind(k->dom);
  if (!k->dom->isStar()) d = "(" + d + ")";
  return d + " -> " + showKind(k->cod);
}

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

static Type mkTy(TypeNode n) { return std::make_shared<TypeNode>(std::move(n)); }

Type tyMixed(int index, std::string hint) {
  TypeNode n;
  n.tag = TyTag::MixedVar;
  n.index = index;
  n.hint = std::move(hint);
  return mkTy(std::move(n));
}

Type tyFunctor(int index, std::string hint) {
  TypeNode n;
  n.tag = TyTag::FunctorVar;
  n.index = index;
  n.hint = std::move(hint);
  return mkTy(std::move(n));
}

Type tyApp(Type fun, Type arg) {
  TypeNode n;
  n.tag = TyTag::App;
  n.a = std::move(fun);
  n.b = std::move(arg);
  return mkTy(std::move(n));
}

Type tyLam(Kind k, std::string hint, Type body) {
  TypeNode n;
  n.tag = TyTag::Lam;
  n.binderKind = std::move(k);
  n.hint = std::move(hint);
  n.a = std::move(body);
  return mkTy(std::move(n));
}

Type tyMu(Type body) {
  TypeNode n;
  n.tag = TyTag::Mu;
  n.a = std::move(body);
  return mkTy(std::move(n));
}

Type tyFun(Type dom, Type cod) {
  TypeNode n;
  n.tag = TyTag::Fun;
  n.a = std::move(dom);
  n.b = std::move(cod);
  return mkTy(std::move(n));
}

Type tyEmpty() {
  static const Type t = mkTy(TypeNode{TyTag::Empty});
  return t;
}

Type tyUnit() {
  static const Type t = mkTy(TypeNode{TyTag::Unit});
  return t;
}

Type tyProd(Type l, Type r) {
  TypeNode n;
  n.tag = TyTag::Prod;
  n.a = std::move(l);
  n.b = std::move(r);
  return mkTy(std::move(n));
}

Type tySum(Type l, Type r) {
  TypeNode n;
  n.tag = TyTag::Sum;
  n.a = std::move(l);
  n.b = std::move(r);
  return mkTy(std::move(n));
}

bool typeEq(const Type& a, const Type& b) {
  if (a == b) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case TyTag::MixedVar:
    case TyTag::FunctorVar:
      return a->index == b->index;
    case TyTag::Lam:
      return kindEq(a->binderKind, b->binderKind) && typeEq(a->a, b->a);
    case TyTag::Mu:
      return typeEq(a->a, b->a);
    case TyTag::Empty:
    case TyTag::Unit:
      return true;
    case TyTag::App:
    case TyTag::Fun:
    case TyTag::Prod:
    case TyTag::Sum:
      return typeEq(a->a, b->a) && typeEq(a->b, b->b);
  }
  return false;
}

namespace {

template <typename FMixed, typename FFunctor>
Type mapVars(const Type& t, int fcut, int mcut, const FMixed& fm, const FFunctor& ff) {
  switch (t->tag) {
    case TyTag::MixedVar:
      return fm(t, mcut, fcut);
    case TyTag::FunctorVar:
      return ff(t, fcut);
    case TyTag::Empty:
    case TyTag::Unit:
      return t;
    case TyTag::Lam: {
      Type body = mapVars(t->a, fcut + 1, mcut, fm, ff);
      if (body == t->a) return t;
      return tyLam(t->binderKind, t->hint, body);
    }
    case TyTag::Mu: {
      Type body = mapVars(t->a, fcut, mcut, fm, ff);
      if (body == t->a) return t;
      return tyMu(body);
    }
    case TyTag::App:
    case TyTag::Fun:
    case TyTag::Prod:
    case TyTag::Sum: {
      Type a = mapVars(t->a, fcut, mcut, fm, ff);
      Type b = mapVars(t->b, fcut, mcut, fm, ff);
      if (a == t->a && b == t->b) return t;
      TypeNode n;
      n.tag = t->tag;
      n.a = std::move(a);
      n.b = std::move(b);
      return std::make_shared<TypeNode>(std::move(n));
    }
  }
  return t;
}

} // namespace

Type shiftFunctor(const Type& t, int d, int cutoff) {
  if (d == 0) return t;
  return mapVars(
      t, cutoff, 0,
      [](const Type& v, int, int) { return v; },
      [d](const Type& v, int cut) {
        if (v->index < cut) return v;
        assert(v->index + d >= cut);
        return tyFunctor(v->index + d, v->hint);
      });
}

Type shiftMixed(const Type& t, int d, int cutoff) {
  if (d == 0) return t;
  return mapVars(
      t, 0, cutoff,
      [d](const Type& v, int cut, int) {
        if (v->index < cut) return v;
        assert(v->index + d >= cut);
        return tyMixed(v->index + d, v->hint);
      },
      [](const Type& v, int) { return v; });
}

Type substFunctor(const Type& t, int index, const Type& by) {
  return mapVars(
      t, 0, 0,
      [](const Type& v, int, int) { return v; },
      [&](const Type& v, int cut) -> Type {
        int i = index + cut;
        if (v->index == i) return shiftFunctor(by, cut);
        if (v->index > i) return tyFunctor(v->index - 1, v->hint);
        return v;
      });
}

Type substMixed(const Type& t, int index, const Type& by) {
  // free functor variables of `by` are shifted over crossed binders
  return mapVars(
      t, 0, 0,
      [&](const Type& v, int, int fcut) -> Type {
        if (v->index == index) return shiftFunctor(by, fcut);
        if (v->index > index) return tyMixed(v->index - 1, v->hint);
        return v;
      },
      [](const Type& v, int) { return v; });
}

namespace {

void collectVars(const Type& t, int fdepth, std::set<int>* mixed, std::set<int>* functor) {
  switch (t->tag) {
    case TyTag::MixedVar:
      if (mixed) mixed->insert(t->index);
      return;
    case TyTag::FunctorVar:
      if (functor && t->index >= fdepth) functor->insert(t->index - fdepth);
      return;
    case TyTag::Lam:
      collectVars(t->a, fdepth + 1, mixed, functor);
      return;
    case TyTag::Mu:
      collectVars(t->a, fdepth, mixed, functor);
      return;
    case TyTag::App:
    case TyTag::Fun:
    case TyTag::Prod:
    case TyTag::Sum:
      collectVars(t->a, fdepth, mixed, functor);
      collectVars(t->b, fdepth, mixed, functor);
      return;
    default:
      return;
  }
}

} // namespace

std::set<int> freeMixed(const Type& t) {
  std::set<int> s;
  collectVars(t, 0, &s, nullptr);
  return s;
}

std::set<int> freeFunctor(const Type& t) {
  std::set<int> s;
  collectVars(t, 0, nullptr, &s);
  return s;
}

bool mixedOccurs(const Type& t, int index) { return freeMixed(t).count(index) > 0; }
bool functorOccurs(const Type& t, int index) { return freeFunctor(t).count(index) > 0; }

Type spineHead(const Type& t, std::vector<Type>& args) {
  if (t->tag == TyTag::App) {
    Type head = spineHead(t->a, args);
    args.push_back(t->b);
    return head;
  }
  return t;
}

Type applySpine(Type head, const std::vector<Type>& args) {
  for (const Type& a : args) head = tyApp(head, a);
  return head;
}

// ---------------------------------------------------------------------------
// Schemes
// ---------------------------------------------------------------------------

Scheme mkScheme(std::vector<Binder> binders, Type body) {
  auto n = std::make_shared<SchemeNode>();
  n->binders = std::move(binders);
  n->body = std::move(body);
  return n;
}

Scheme monoScheme(Type t) { return mkScheme({}, std::move(t)); }

bool schemeEq(const Scheme& a, const Scheme& b) {
  if (a == b) return true;
  if (a->binders.size() != b->binders.size()) return false;
  for (size_t i = 0; i < a->binders.size(); i++)
    if (!kindEq(a->binders[i].kind, b->binders[i].kind)) return false;
  return typeEq(a->body, b->body);
}

Scheme shiftMixedScheme(const Scheme& s, int d, int cutoff) {
  if (d == 0) return s;
  return mkScheme(s->binders, shiftMixed(s->body, d, cutoff + (int)s->binders.size()));
}

Scheme instantiateScheme(const Scheme& s, const Type& by) {
  if (s->binders.empty()) fail(ErrorCode::NotAForall, "cannot instantiate a monomorphic scheme");
  // The outermost binder has the largest index among binder-bound vars.
  int n = (int)s->binders.size();
  Type byShifted = shiftMixed(by, n - 1);
  std::vector<Binder> rest(s->binders.begin() + 1, s->binders.end());
  return mkScheme(std::move(rest), substMixed(s->body, n - 1, byShifted));
}

std::set<int> freeMixedScheme(const Scheme& s) {
  std::set<int> out;
  int n = (int)s->binders.size();
  for (int i : freeMixed(s->body))
    if (i >= n) out.insert(i - n);
  return out;
}

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

static Term mkTm(TermNode n) { return std::make_shared<TermNode>(std::move(n)); }

Term tmVar(int index, std::string hint) {
  TermNode n;
  n.tag = TmTag::Var;
  n.index = index;
  n.hint = std::move(hint);
  return mkTm(std::move(n));
}

Term tmApp(Term f, Term a) {
  TermNode n;
  n.tag = TmTag::App;
  n.a = std::move(f);
  n.b = std::move(a);
  return mkTm(std::move(n));
}

Term tmLam(std::string hint, Term body) {
  TermNode n;
  n.tag = TmTag::Lam;
  n.hint = std::move(hint);
  n.a = std::move(body);
  return mkTm(std::move(n));
}

Term tmLet(std::string hint, Scheme s, Term bound, Term body) {
  TermNode n;
  n.tag = TmTag::Let;
  n.hint = std::move(hint);
  n.scheme = std::move(s);
  n.a = std::move(bound);
  n.b = std::move(body);
  return mkTm(std::move(n));
}

Term tmTyLam(std::string hint, Kind k, Term body) {
  TermNode n;
  n.tag = TmTag::TyLam;
  n.hint = std::move(hint);
  n.binderKind = std::move(k);
  n.a = std::move(body);
  return mkTm(std::move(n));
}

Term tmTyApp(Term f, Type t) {
  TermNode n;
  n.tag = TmTag::TyApp;
  n.a = std::move(f);
  n.type = std::move(t);
  return mkTm(std::move(n));
}

Term tmPrim(TmTag tag) {
  TermNode n;
  n.tag = tag;
  return mkTm(std::move(n));
}

Term tmMap(Type index, Term m) {
  TermNode n;
  n.tag = TmTag::Map;
  n.type = std::move(index);
  n.a = std::move(m);
  return mkTm(std::move(n));
}

Term tmFold(Type index, Term m) {
  TermNode n;
  n.tag = TmTag::Fold;
  n.type = std::move(index);
  n.a = std::move(m);
  return mkTm(std::move(n));
}

Term tmFork(Term l, Term r) {
  TermNode n;
  n.tag = TmTag::Fork;
  n.a = std::move(l);
  n.b = std::move(r);
  return mkTm(std::move(n));
}

Term tmJoin(Term l, Term r) {
  TermNode n;
  n.tag = TmTag::Join;
  n.a = std::move(l);
  n.b = std::move(r);
  return mkTm(std::move(n));
}

Term tmAscribe(Term m, Scheme s) {
  TermNode n;
  n.tag = TmTag::Ascribe;
  n.a = std::move(m);
  n.scheme = std::move(s);
  return mkTm(std::move(n));
}

Term withPos(Term t, int pos) {
  auto n = std::make_shared<TermNode>(*t);
  n->pos = pos;
  return n;
}

Term withAnnA(Term t, Scheme s) {
  auto n = std::make_shared<TermNode>(*t);
  n->annA = std::move(s);
  return n;
}

Term withAnnB(Term t, Scheme s) {
  auto n = std::make_shared<TermNode>(*t);
  n->annB = std::move(s);
  return n;
}

Term withMapAnn(Term t, Type src, Type dst, Kind k) {
  auto n = std::make_shared<TermNode>(*t);
  n->annSrc = std::move(src);
  n->annDst = std::move(dst);
  n->annKind = std::move(k);
  return n;
}

bool isPrimTag(TmTag t) {
  switch (t) {
    case TmTag::In:
    case TmTag::Unin:
    case TmTag::Map:
    case TmTag::Fold:
    case TmTag::Fst:
    case TmTag::Snd:
    case TmTag::Fork:
    case TmTag::Inl:
    case TmTag::Inr:
    case TmTag::Join:
    case TmTag::Tt:
    case TmTag::Absurd:
      return true;
    default:
      return false;
  }
}

bool termEq(const Term& a, const Term& b) {
  if (a == b) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case TmTag::Var:
      return a->index == b->index;
    case TmTag::Lam:
      return termEq(a->a, b->a);
    case TmTag::TyLam:
      return kindEq(a->binderKind, b->binderKind) && termEq(a->a, b->a);
    case TmTag::Let:
      return schemeEq(a->scheme, b->scheme) && termEq(a->a, b->a) && termEq(a->b, b->b);
    case TmTag::Ascribe:
      return schemeEq(a->scheme, b->scheme) && termEq(a->a, b->a);
    case TmTag::App:
    case TmTag::Fork:
    case TmTag::Join:
      return termEq(a->a, b->a) && termEq(a->b, b->b);
    case TmTag::TyApp:
      return typeEq(a->type, b->type) && termEq(a->a, b->a);
    case TmTag::Map:
    case TmTag::Fold:
      return typeEq(a->type, b->type) && termEq(a->a, b->a);
    default:
      return true; // nullary primitives
  }
}

namespace {

// Uniform rewriting over a term: `tcut` counts crossed term binders,
// `mcut` crossed TyLam binders. onVar/onTypes rewrite leaves.
struct TermRewriter {
  // return null to keep the node
  virtual Term onVar(const Term& v, int tcut, int mcut) const = 0;
  virtual Type onType(const Type& t, int mcut) const = 0;
  virtual ~TermRewriter() = default;

  Scheme onScheme(const Scheme& s, int mcut) const {
    if (!s) return s;
    Type body = onType(s->body, mcut + (int)s->binders.size());
    if (body == s->body) return s;
    return mkScheme(s->binders, body);
  }

  Term walk(const Term& t, int tcut, int mcut) const {
    if (t->tag == TmTag::Var) {
      Term r = onVar(t, tcut, mcut);
      return r ? r : t;
    }
    TermNode n = *t;
    bool changed = false;
    auto doTerm = [&](Term& x, int tc, int mc) {
      if (!x) return;
      Term r = walk(x, tc, mc);
      if (r != x) {
        x = r;
        changed = true;
      }
    };
    auto doType = [&](Type& x, int mc) {
      if (!x) return;
      Type r = onType(x, mc);
      if (r != x) {
        x = r;
        changed = true;
      }
    };
    auto doScheme = [&](Scheme& x, int mc) {
      if (!x) return;
      Scheme r = onScheme(x, mc);
      if (r != x) {
        x = r;
        changed = true;
      }
    };
    switch (t->tag) {
      case TmTag::Lam:
        doTerm(n.a, tcut + 1, mcut);
        break;
      case TmTag::Let:
        doScheme(n.scheme, mcut);
        doTerm(n.a, tcut, mcut);
        doTerm(n.b, tcut + 1, mcut);
        break;
      case TmTag::TyLam:
        doTerm(n.a, tcut, mcut + 1);
        break;
      default:
        doTerm(n.a, tcut, mcut);
        doTerm(n.b, tcut, mcut);
        break;
    }
    doType(n.type, mcut);
    if (t->tag != TmTag::Let) doScheme(n.scheme, mcut);
    // annotations live in the same scope as the node
    doScheme(n.annA, mcut);
    doScheme(n.annB, mcut);
    doType(n.annSrc, mcut);
    doType(n.annDst, mcut);
    if (!changed) return t;
    return std::make_shared<TermNode>(std::move(n));
  }
};

} // namespace

Term shiftTerm(const Term& t, int d, int cutoff) {
  if (d == 0) return t;
  struct R : TermRewriter {
    int d;
    Term onVar(const Term& v, int tcut, int) const override {
      if (v->index < tcut) return nullptr;
      assert(v->index + d >= tcut);
      return tmVar(v->index + d, v->hint);
    }
    Type onType(const Type& t, int) const override { return t; }
  } r;
  r.d = d;
  return r.walk(t, cutoff, 0);
}

Term shiftMixedInTerm(const Term& t, int d, int cutoff) {
  if (d == 0) return t;
  struct R : TermRewriter {
    int d;
    Term onVar(const Term&, int, int) const override { return nullptr; }
    Type onType(const Type& t, int mcut) const override { return shiftMixed(t, d, mcut); }
  } r;
  r.d = d;
  return r.walk(t, 0, cutoff);
}

Term substTermInTerm(const Term& t, int index, const Term& by) {
  struct R : TermRewriter {
    int index;
    Term by;
    Term onVar(const Term& v, int tcut, int mcut) const override {
      int i = index + tcut;
      if (v->index == i) return shiftMixedInTerm(shiftTerm(by, tcut), mcut);
      if (v->index > i) return tmVar(v->index - 1, v->hint);
      return nullptr;
    }
    Type onType(const Type& t, int) const override { return t; }
  } r;
  r.index = index;
  r.by = by;
  return r.walk(t, 0, 0);
}

Term substMixedInTerm(const Term& t, int index, const Type& by) {
  struct R : TermRewriter {
    int index;
    Type by;
    Term onVar(const Term&, int, int) const override { return nullptr; }
    Type onType(const Type& t, int mcut) const override {
      return substMixed(t, index + mcut, shiftMixed(by, mcut));
    }
  } r;
  r.index = index;
  r.by = by;
  return r.walk(t, 0, 0);
}

namespace {

void collectTermVars(const Term& t, int tdepth, int mdepth, std::set<int>* tv, std::set<int>* mv) {
  if (!t) return;
  auto doType = [&](const Type& ty, int md) {
    if (!ty || !mv) return;
    for (int i : freeMixed(ty))
      if (i >= md) mv->insert(i - md);
  };
  auto doScheme = [&](const Scheme& s, int md) {
    if (!s || !mv) return;
    for (int i : freeMixedScheme(s))
      if (i >= md) mv->insert(i - md);
  };
  switch (t->tag) {
    case TmTag::Var:
      if (tv && t->index >= tdepth) tv->insert(t->index - tdepth);
      return;
    case TmTag::Lam:
      collectTermVars(t->a, tdepth + 1, mdepth, tv, mv);
      return;
    case TmTag::Let:
      doScheme(t->scheme, mdepth);
      collectTermVars(t->a, tdepth, mdepth, tv, mv);
      collectTermVars(t->b, tdepth + 1, mdepth, tv, mv);
      return;
    case TmTag::TyLam:
      collectTermVars(t->a, tdepth, mdepth + 1, tv, mv);
      return;
    default:
      collectTermVars(t->a, tdepth, mdepth, tv, mv);
      collectTermVars(t->b, tdepth, mdepth, tv, mv);
      doType(t->type, mdepth);
      doScheme(t->scheme, mdepth);
      return;
  }
}

} // namespace

std::set<int> freeTermVars(const Term& t) {
  std::set<int> s;
  collectTermVars(t, 0, 0, &s, nullptr);
  return s;
}

std::set<int> freeMixedInTerm(const Term& t) {
  std::set<int> s;
  collectTermVars(t, 0, 0, nullptr, &s);
  return s;
}

const char* errorCodeName(ErrorCode c) {
  switch (c) {
    case ErrorCode::None: return "ok";
    case ErrorCode::LexError: return "lex-error";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::UnboundName: return "unbound-name";
    case ErrorCode::UnboundTypeVar: return "unbound-type-var";
    case ErrorCode::KindMismatch: return "kind-mismatch";
    case ErrorCode::FunctorVarInDomain: return "functor-var-in-domain";
    case ErrorCode::MuBodyNotEndo: return "mu-body-not-endo";
    case ErrorCode::SchemeBodyNotStar: return "scheme-body-not-star";
    case ErrorCode::TypeMismatch: return "type-mismatch";
    case ErrorCode::CannotSynthesize: return "cannot-synthesize";
    case ErrorCode::EscapingTypeVar: return "escaping-type-var";
    case ErrorCode::NotAForall: return "not-a-forall";
    case ErrorCode::ArrowShapeMismatch: return "arrow-shape-mismatch";
    case ErrorCode::StuckTerm: return "stuck-term";
    case ErrorCode::OutOfFuel: return "out-of-fuel";
    case ErrorCode::NotObservable: return "not-observable";
    case ErrorCode::IllShapedValue: return "ill-shaped-value";
    case ErrorCode::Usage: return "usage";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

} // namespace xdt
