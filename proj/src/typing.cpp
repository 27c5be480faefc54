#include "xdt/typing.hpp"

#include "xdt/errors.hpp"
#include "xdt/normalize.hpp"
#include "xdt/surface.hpp"

#include <cassert>

namespace xdt {

namespace {

Kind arrowKind(const std::vector<Kind>& domains) {
  Kind k = kStar();
  for (auto it = domains.rbegin(); it != domains.rend(); ++it) k = kArrow(*it, k);
  return k;
}

// True if some mixed variable with index < n (at the root) occurs inside the
// domain of a function type. Such a variable cannot be abstracted as a
// functor argument.
bool mixedInFunDomain(const Type& t, int n, bool inDomain = false) {
  switch (t->tag) {
    case TyTag::MixedVar:
      return inDomain && t->index < n;
    case TyTag::FunctorVar:
    case TyTag::Empty:
    case TyTag::Unit:
      return false;
    case TyTag::Fun:
      return mixedInFunDomain(t->a, n, true) || mixedInFunDomain(t->b, n, inDomain);
    case TyTag::Lam:
    case TyTag::Mu:
      return mixedInFunDomain(t->a, n, inDomain);
    default:
      return mixedInFunDomain(t->a, n, inDomain) || mixedInFunDomain(t->b, n, inDomain);
  }
}

// Abstracts the innermost n mixed variables of t as functor lambdas;
// binders.front() becomes the outermost lambda. t must have no free functor
// variables.
Type reabstractOver(const Type& t, const std::vector<Binder>& binders) {
  int n = (int)binders.size();
  if (n == 0) return t;
  if (mixedInFunDomain(t, n))
    fail(ErrorCode::ArrowShapeMismatch,
         "quantified variable occurs in a function domain; no functorial decomposition");
  struct Walk {
    int n;
    Type go(const Type& t, int fdepth) {
      switch (t->tag) {
        case TyTag::MixedVar:
          if (t->index < n) return tyFunctor(t->index + fdepth, t->hint);
          return tyMixed(t->index - n, t->hint);
        case TyTag::FunctorVar:
        case TyTag::Empty:
        case TyTag::Unit:
          return t;
        case TyTag::Lam:
          return tyLam(t->binderKind, t->hint, go(t->a, fdepth + 1));
        case TyTag::Mu:
          return tyMu(go(t->a, fdepth));
        default: {
          TypeNode m = *t;
          m.a = go(t->a, fdepth);
          m.b = t->b ? go(t->b, fdepth) : nullptr;
          return std::make_shared<TypeNode>(std::move(m));
        }
      }
    }
  } w{n};
  Type body = w.go(t, 0);
  for (int i = n - 1; i >= 0; i--) body = tyLam(binders[i].kind, binders[i].hint, body);
  return normalizeType(body);
}

Scheme instantiateAll(Scheme s, const std::vector<Type>& args) {
  for (const Type& a : args) s = instantiateScheme(s, a);
  return s;
}

// ---------------------------------------------------------------------------
// Miller-style matching: solve normalize(applySpine(f(hole), args)) == target
// for the single hole. Hole occurrences must be bare or applied to distinct
// lambda-bound functor variables.
// ---------------------------------------------------------------------------

struct HoleMatcher {
  std::optional<Type> solution; // expressed outside the matched structure
  bool failed = false;

  void record(const Type& cand) {
    if (solution && !typeEq(*solution, cand)) failed = true;
    else solution = cand;
  }

  // binderKinds: kinds of functor lambdas crossed, innermost first
  void match(const Type& p, const Type& d, std::vector<Kind>& binderKinds) {
    if (failed) return;
    int depth = (int)binderKinds.size();
    // hole occurrence?
    if (p->tag == TyTag::FunctorVar && p->index == depth) {
      // bare hole: d must not mention crossed binders
      for (int i : freeFunctor(d))
        if (i < depth) {
          failed = true;
          return;
        }
      record(shiftFunctor(d, -depth));
      return;
    }
    if (p->tag == TyTag::App) {
      std::vector<Type> pargs;
      Type phead = spineHead(p, pargs);
      if (phead->tag == TyTag::FunctorVar && phead->index == depth) {
        // hole applied to a spine of distinct crossed binder vars
        std::vector<int> spineVars;
        bool ok = true;
        for (const Type& a : pargs) {
          if (a->tag != TyTag::FunctorVar || a->index >= depth) {
            ok = false;
            break;
          }
          for (int v : spineVars)
            if (v == a->index) ok = false;
          spineVars.push_back(a->index);
        }
        if (ok) {
          int m = (int)pargs.size();
          // candidate = \y1..\ym. d with spineVars[j] |-> lambda j
          struct Re {
            const std::vector<int>& sv;
            int depth, m;
            bool bad = false;
            Type go(const Type& t, int local) {
              switch (t->tag) {
                case TyTag::FunctorVar: {
                  int i = t->index - local;
                  if (i < 0) return t; // bound inside d
                  if (i < depth) {
                    for (int j = 0; j < m; j++)
                      if (sv[j] == i) return tyFunctor(local + (m - 1 - j), t->hint);
                    bad = true;
                    return t;
                  }
                  return tyFunctor(t->index - depth + m, t->hint);
                }
                case TyTag::Lam:
                  return tyLam(t->binderKind, t->hint, go(t->a, local + 1));
                case TyTag::Mu:
                  return tyMu(go(t->a, local));
                case TyTag::MixedVar:
                case TyTag::Empty:
                case TyTag::Unit:
                  return t;
                default: {
                  TypeNode n = *t;
                  n.a = go(t->a, local);
                  n.b = t->b ? go(t->b, local) : nullptr;
                  return std::make_shared<TypeNode>(std::move(n));
                }
              }
            }
          } re{spineVars, depth, m};
          Type body = re.go(d, 0);
          if (re.bad) {
            failed = true;
            return;
          }
          for (int j = m - 1; j >= 0; j--) {
            const Kind& bk = binderKinds[spineVars[j]];
            body = tyLam(bk, "Y", body);
          }
          record(normalizeType(body));
          return;
        }
        failed = true;
        return;
      }
    }
    if (p->tag != d->tag) {
      failed = true;
      return;
    }
    switch (p->tag) {
      case TyTag::MixedVar:
      case TyTag::FunctorVar:
        if (p->index != d->index) failed = true;
        return;
      case TyTag::Empty:
      case TyTag::Unit:
        return;
      case TyTag::Lam: {
        if (!kindEq(p->binderKind, d->binderKind)) {
          failed = true;
          return;
        }
        binderKinds.insert(binderKinds.begin(), p->binderKind);
        match(p->a, d->a, binderKinds);
        binderKinds.erase(binderKinds.begin());
        return;
      }
      case TyTag::Mu:
        match(p->a, d->a, binderKinds);
        return;
      default:
        match(p->a, d->a, binderKinds);
        if (p->b) match(p->b, d->b, binderKinds);
        return;
    }
  }
};

// Solve normalize((f hole) args) == target for hole. Returns nullopt when
// unsolvable; a null Type when the hole is unconstrained.
std::optional<Type> solveIndexArg(const Type& f, const std::vector<Type>& args,
                                  const Type& target) {
  Type fn = normalizeType(f);
  Type pattern = tyApp(shiftFunctor(fn, 1), tyFunctor(0, "#"));
  for (const Type& a : args) pattern = tyApp(pattern, shiftFunctor(a, 1));
  pattern = normalizeType(pattern);
  if (!functorOccurs(pattern, 0)) {
    // constant functor: any argument works; signal unconstrained
    if (!typeEq(normalizeType(shiftFunctor(pattern, -1)), target)) return std::nullopt;
    return Type(nullptr);
  }
  HoleMatcher m;
  std::vector<Kind> binders;
  m.match(pattern, target, binders);
  if (m.failed || !m.solution) return std::nullopt;
  return m.solution;
}

} // namespace

// ---------------------------------------------------------------------------
// Arrow types
// ---------------------------------------------------------------------------

Scheme expandArrow(const ArrowSpec& spec) {
  int n = kindArity(spec.kind);
  std::vector<Kind> doms = kindDomains(spec.kind);
  std::vector<Binder> binders;
  const char* names[] = {"a", "b", "c", "d", "e"};
  for (int i = 0; i < n; i++) binders.push_back({names[i % 5], doms[i]});
  Type d = shiftMixed(spec.dom, n);
  Type c = shiftMixed(spec.cod, n);
  for (int i = 0; i < n; i++) {
    d = tyApp(d, tyMixed(n - 1 - i, binders[i].hint));
    c = tyApp(c, tyMixed(n - 1 - i, binders[i].hint));
  }
  return mkScheme(std::move(binders), normalizeType(tyFun(d, c)));
}

std::optional<ArrowSpec> matchArrow(const Scheme& s) {
  Type body = normalizeType(s->body);
  if (body->tag != TyTag::Fun) return std::nullopt;
  int n = (int)s->binders.size();
  if (mixedInFunDomain(body->a, n) || mixedInFunDomain(body->b, n)) return std::nullopt;
  std::vector<Kind> doms;
  for (const Binder& b : s->binders) doms.push_back(b.kind);
  ArrowSpec spec;
  spec.kind = arrowKind(doms);
  spec.dom = reabstractOver(body->a, s->binders);
  spec.cod = reabstractOver(body->b, s->binders);
  return spec;
}

// ---------------------------------------------------------------------------
// The bidirectional checker
// ---------------------------------------------------------------------------

namespace {

struct Checker {
  KindCtx delta;
  TermCtx gamma;

  [[noreturn]] void mismatch(const Term& at, const Scheme& expected, const std::string& got) {
    fail(ErrorCode::TypeMismatch,
         "type mismatch: expected " + printScheme(expected) + ", got " + got + " for term " +
             printTerm(at),
         at->pos);
  }

  void pushTermVar(const Scheme& s) { gamma.insert(gamma.begin(), s); }
  void popTermVar() { gamma.erase(gamma.begin()); }

  void pushTypeVar(const Kind& k) {
    delta.insert(delta.begin(), k);
    for (Scheme& s : gamma) s = shiftMixedScheme(s, 1);
  }
  void popTypeVar() {
    delta.erase(delta.begin());
    for (Scheme& s : gamma) s = shiftMixedScheme(s, -1);
  }

  // exception-safe binder scopes
  struct TermScope {
    Checker* c;
    TermScope(Checker* c, const Scheme& s) : c(c) { c->pushTermVar(s); }
    ~TermScope() { c->popTermVar(); }
  };
  struct TypeScope {
    Checker* c;
    TypeScope(Checker* c, const Kind& k) : c(c) { c->pushTypeVar(k); }
    ~TypeScope() { c->popTypeVar(); }
  };

  static bool isPrimHead(const Term& t) {
    switch (t->tag) {
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

  // Peel type applications; outermost application last.
  static Term peelTyApps(const Term& t, std::vector<Type>& args) {
    if (t->tag == TmTag::TyApp) {
      Term head = peelTyApps(t->a, args);
      args.push_back(t->type);
      return head;
    }
    return t;
  }

  // ---- checking ----

  Term check(const Term& m, const Scheme& expected) {
    switch (m->tag) {
      case TmTag::TyLam: {
        if (expected->binders.empty())
          mismatch(m, expected, "a type abstraction");
        if (!kindEq(m->binderKind, expected->binders.front().kind))
          fail(ErrorCode::KindMismatch,
               "type abstraction binder kind " + showKind(m->binderKind) + " does not match " +
                   showKind(expected->binders.front().kind),
               m->pos);
        Scheme rest = mkScheme(
            std::vector<Binder>(expected->binders.begin() + 1, expected->binders.end()),
            expected->body);
        TypeScope scope(this, m->binderKind);
        Term body = check(m->a, rest);
        return withPos(tmTyLam(m->hint, m->binderKind, body), m->pos);
      }
      case TmTag::Let: {
        checkScheme(delta, m->scheme);
        Term bound = check(m->a, m->scheme);
        TermScope scope(this, m->scheme);
        Term body = check(m->b, expected);
        return withPos(tmLet(m->hint, m->scheme, bound, body), m->pos);
      }
      case TmTag::Ascribe: {
        checkScheme(delta, m->scheme);
        Term inner = check(m->a, m->scheme);
        if (!typesEquivalent(m->scheme, expected))
          mismatch(m, expected, printScheme(m->scheme));
        return inner;
      }
      default:
        break;
    }

    // primitive-headed spines handle their own quantifiers; when the
    // expected arrow sits at a smaller kind than the full quantifier prefix,
    // leading binders are made explicit and the spine re-checked under them
    {
      std::vector<Type> tyArgs;
      Term core = peelTyApps(m, tyArgs);
      if (isPrimHead(core)) {
        if (expected->binders.empty()) return checkPrimSpine(m, core, tyArgs, expected);
        try {
          return checkPrimSpine(m, core, tyArgs, expected);
        } catch (const XdtError&) {
          const Binder& b = expected->binders.front();
          Scheme rest = mkScheme(
              std::vector<Binder>(expected->binders.begin() + 1, expected->binders.end()),
              expected->body);
          TypeScope scope(this, b.kind);
          Term body = check(shiftMixedInTerm(m, 1), rest);
          return withPos(tmTyLam(b.hint, b.kind, body), m->pos);
        }
      }
    }

    // synthesizable terms: compare
    if (auto r = tryInfer(m)) {
      if (typesEquivalent(r->second, expected)) return r->first;
      if (expected->binders.empty()) mismatch(m, expected, printScheme(r->second));
      // fall through to implicit generalization
    }

    if (!expected->binders.empty()) {
      // implicit type abstraction: make it explicit in the elaborated term
      const Binder& b = expected->binders.front();
      Scheme rest = mkScheme(
          std::vector<Binder>(expected->binders.begin() + 1, expected->binders.end()),
          expected->body);
      TypeScope scope(this, b.kind);
      Term body = check(shiftMixedInTerm(m, 1), rest);
      return withPos(tmTyLam(b.hint, b.kind, body), m->pos);
    }

    Type te = normalizeType(expected->body);
    switch (m->tag) {
      case TmTag::Lam: {
        if (te->tag != TyTag::Fun) mismatch(m, expected, "a function");
        TermScope scope(this, monoScheme(te->a));
        Term body = check(m->a, monoScheme(te->b));
        return withPos(tmLam(m->hint, body), m->pos);
      }
      case TmTag::App:
        return checkApp(m, te);
      default:
        fail(ErrorCode::CannotSynthesize,
             "term form cannot be checked here: " + printTerm(m), m->pos);
    }
  }

  Term checkApp(const Term& m, const Type& rho) {
    const Term& f = m->a;
    const Term& a = m->b;

    // 1. recorded argument type
    if (m->annA) {
      assert(m->annA->binders.empty());
      Term a2 = check(a, m->annA);
      Term f2 = check(f, monoScheme(tyFun(m->annA->body, rho)));
      return withAnnA(withPos(tmApp(f2, a2), m->pos), m->annA);
    }
    // 2. function synthesizes
    if (auto rf = tryInfer(f)) {
      if (!rf->second->binders.empty())
        fail(ErrorCode::TypeMismatch,
             "polymorphic value applied without type application: " + printTerm(f), m->pos);
      Type tf = normalizeType(rf->second->body);
      if (tf->tag != TyTag::Fun)
        fail(ErrorCode::TypeMismatch, "applied term is not a function: " + printTerm(f),
             m->pos);
      Term a2 = check(a, monoScheme(tf->a));
      if (!typesEquivalentMono(tf->b, rho))
        mismatch(m, monoScheme(rho), printType(tf->b));
      return withAnnA(withPos(tmApp(rf->first, a2), m->pos), monoScheme(tf->a));
    }
    // 3. argument synthesizes
    if (auto ra = tryInfer(a)) {
      if (!ra->second->binders.empty())
        fail(ErrorCode::TypeMismatch,
             "polymorphic value used as a function argument: " + printTerm(a), m->pos);
      Type ta = normalizeType(ra->second->body);
      Term f2 = check(f, monoScheme(tyFun(ta, rho)));
      return withAnnA(withPos(tmApp(f2, ra->first), m->pos), monoScheme(ta));
    }
    // 4. reconstruct the argument type from the head primitive and rho
    std::vector<Type> tyArgs;
    Term core = peelTyApps(f, tyArgs);
    Type rhoN = normalizeType(rho);
    switch (core->tag) {
      case TmTag::In: {
        std::vector<Type> margs;
        Type head = spineHead(rhoN, margs);
        if (head->tag != TyTag::Mu || margs.size() != tyArgs.size())
          fail(ErrorCode::ArrowShapeMismatch,
               "in must produce a recursive type, got " + printType(rhoN), m->pos);
        Type dom = normalizeType(applySpine(tyApp(head->a, head), margs));
        Term a2 = check(a, monoScheme(dom));
        Term f2 = check(f, monoScheme(tyFun(dom, rho)));
        return withAnnA(withPos(tmApp(f2, a2), m->pos), monoScheme(dom));
      }
      case TmTag::Inl:
      case TmTag::Inr: {
        if (rhoN->tag != TyTag::Sum)
          fail(ErrorCode::ArrowShapeMismatch,
               "injection must produce a sum type, got " + printType(rhoN), m->pos);
        Type dom = core->tag == TmTag::Inl ? rhoN->a : rhoN->b;
        Term a2 = check(a, monoScheme(dom));
        Term f2 = check(f, monoScheme(tyFun(dom, rho)));
        return withAnnA(withPos(tmApp(f2, a2), m->pos), monoScheme(dom));
      }
      case TmTag::Fold: {
        // the index determines the domain: mu(index) applied to the spine
        Type idxN = normalizeType(core->type);
        Type dom = normalizeType(applySpine(tyMu(idxN), tyArgs));
        Term a2 = check(a, monoScheme(dom));
        Term f2 = check(f, monoScheme(tyFun(dom, rho)));
        return withAnnA(withPos(tmApp(f2, a2), m->pos), monoScheme(dom));
      }
      case TmTag::Map: {
        // when the mapped morphism synthesizes, its arrow fixes the domain
        auto rg = tryInfer(core->a);
        if (!rg)
          fail(ErrorCode::CannotSynthesize,
               "cannot determine the argument type of map here: " + printTerm(m), m->pos);
        auto spec = matchArrow(rg->second);
        if (!spec)
          fail(ErrorCode::ArrowShapeMismatch,
               "mapped term does not have an arrow type: " + printScheme(rg->second),
               m->pos);
        Type idxN = normalizeType(core->type);
        Type dom = normalizeType(applySpine(tyApp(idxN, spec->dom), tyArgs));
        Term a2 = check(a, monoScheme(dom));
        Term f2 = check(f, monoScheme(tyFun(dom, rho)));
        return withAnnA(withPos(tmApp(f2, a2), m->pos), monoScheme(dom));
      }
      case TmTag::Unin: {
        // unin @ts (in @ts w) at rho: w must itself have type rho, at a
        // constant index, so push the expectation through.
        std::vector<Type> innerArgs;
        if (a->tag == TmTag::App) {
          Term innerCore = peelTyApps(a->a, innerArgs);
          if (innerCore->tag == TmTag::In && innerArgs.size() == tyArgs.size()) {
            // build a constant index B with (B mu(B)) ts == rho
            Type b = shiftFunctor(rhoN, 1);
            for (size_t i = 0; i < tyArgs.size(); i++)
              b = tyLam(kStar(), "_", shiftFunctor(b, 1));
            b = tyLam(arrowKind(std::vector<Kind>(tyArgs.size(), kStar())), "_", b);
            // Kinds of tyArgs may not be *, so recompute honestly:
            std::vector<Kind> ks;
            for (const Type& t : tyArgs) ks.push_back(inferKind(delta, {}, t));
            Type b2 = shiftFunctor(rhoN, (int)tyArgs.size() + 1);
            for (auto it = ks.rbegin(); it != ks.rend(); ++it)
              b2 = tyLam(*it, "_", b2);
            b2 = tyLam(arrowKind(ks), "_", b2);
            Type muB = tyMu(b2);
            Type inner = normalizeType(applySpine(muB, tyArgs));
            Term w2 = check(a->b, monoScheme(rho));
            Term fin = check(a->a, monoScheme(tyFun(rho, inner)));
            Term a2 = withAnnA(withPos(tmApp(fin, w2), a->pos), monoScheme(rho));
            Term f2 = check(f, monoScheme(tyFun(inner, rho)));
            return withAnnA(withPos(tmApp(f2, a2), m->pos), monoScheme(inner));
          }
        }
        fail(ErrorCode::CannotSynthesize,
             "cannot determine the argument type of unin here: " + printTerm(m), m->pos);
      }
      default:
        fail(ErrorCode::CannotSynthesize,
             "cannot determine the argument type of application: " + printTerm(m), m->pos);
    }
  }

  // ---- inference ----

  std::optional<std::pair<Term, Scheme>> tryInfer(const Term& m) {
    switch (m->tag) {
      case TmTag::Var: {
        if (m->index < 0 || m->index >= (int)gamma.size())
          fail(ErrorCode::UnboundName, "unbound variable " + m->hint, m->pos);
        return std::make_pair(m, gamma[m->index]);
      }
      case TmTag::Tt:
        return std::make_pair(m, monoScheme(tyUnit()));
      case TmTag::Ascribe: {
        checkScheme(delta, m->scheme);
        Term inner = check(m->a, m->scheme);
        return std::make_pair(inner, m->scheme);
      }
      case TmTag::TyApp: {
        Term fElab;
        Scheme fScheme;
        if (auto rf = tryInfer(m->a)) {
          fElab = rf->first;
          fScheme = rf->second;
        } else if (m->annA) {
          // recorded function scheme: type abstractions reached by
          // substitution during reduction are re-checked against it
          fElab = check(m->a, m->annA);
          fScheme = m->annA;
        } else {
          return std::nullopt;
        }
        if (fScheme->binders.empty())
          fail(ErrorCode::NotAForall,
               "type application to a monomorphic term: " + printTerm(m), m->pos);
        checkKind(delta, {}, m->type, fScheme->binders.front().kind);
        Scheme inst = instantiateScheme(fScheme, m->type);
        Term t = withAnnA(withPos(tmTyApp(fElab, m->type), m->pos), fScheme);
        return std::make_pair(t, inst);
      }
      case TmTag::App: {
        auto rf = tryInfer(m->a);
        if (!rf) {
          // primitive applications whose full arrow is determined by their
          // parts: unin/projections from the argument's type, map and fold
          // from the index plus an inferable morphism
          std::vector<Type> tyArgs;
          Term core = peelTyApps(m->a, tyArgs);
          Type dom, result;
          switch (core->tag) {
            case TmTag::Unin:
            case TmTag::Fst:
            case TmTag::Snd: {
              auto ra = tryInfer(m->b);
              if (!ra || !ra->second->binders.empty()) return std::nullopt;
              Type ta = normalizeType(ra->second->body);
              if (core->tag == TmTag::Unin) {
                std::vector<Type> margs;
                Type head = spineHead(ta, margs);
                if (head->tag != TyTag::Mu || margs.size() != tyArgs.size())
                  return std::nullopt;
                result = normalizeType(applySpine(tyApp(head->a, head), margs));
              } else {
                if (ta->tag != TyTag::Prod) return std::nullopt;
                result = core->tag == TmTag::Fst ? ta->a : ta->b;
              }
              dom = ta;
              break;
            }
            case TmTag::Map: {
              auto rg = tryInfer(core->a);
              if (!rg) return std::nullopt;
              auto spec = matchArrow(rg->second);
              if (!spec) return std::nullopt;
              Type idxN = normalizeType(core->type);
              dom = normalizeType(applySpine(tyApp(idxN, spec->dom), tyArgs));
              result = normalizeType(applySpine(tyApp(idxN, spec->cod), tyArgs));
              break;
            }
            case TmTag::Fold: {
              auto rg = tryInfer(core->a);
              if (!rg) return std::nullopt;
              auto spec = matchArrow(rg->second);
              if (!spec) return std::nullopt;
              Type idxN = normalizeType(core->type);
              dom = normalizeType(applySpine(tyMu(idxN), tyArgs));
              result = normalizeType(applySpine(spec->cod, tyArgs));
              break;
            }
            default:
              return std::nullopt;
          }
          Term f2 = check(m->a, monoScheme(tyFun(dom, result)));
          Term a2 = check(m->b, monoScheme(dom));
          Term t = withAnnA(withPos(tmApp(f2, a2), m->pos), monoScheme(dom));
          return std::make_pair(t, monoScheme(result));
        }
        if (!rf->second->binders.empty())
          fail(ErrorCode::TypeMismatch,
               "polymorphic value applied without type application: " + printTerm(m->a),
               m->pos);
        Type tf = normalizeType(rf->second->body);
        if (tf->tag != TyTag::Fun)
          fail(ErrorCode::TypeMismatch, "applied term is not a function: " + printTerm(m->a),
               m->pos);
        Term a2 = check(m->b, monoScheme(tf->a));
        Term t = withAnnA(withPos(tmApp(rf->first, a2), m->pos), monoScheme(tf->a));
        return std::make_pair(t, monoScheme(tf->b));
      }
      case TmTag::Let: {
        checkScheme(delta, m->scheme);
        Term bound = check(m->a, m->scheme);
        TermScope scope(this, m->scheme);
        auto rb = tryInfer(m->b);
        if (!rb) return std::nullopt;
        return std::make_pair(
            withPos(tmLet(m->hint, m->scheme, bound, rb->first), m->pos), rb->second);
      }
      default:
        return std::nullopt;
    }
  }

  // ---- primitive spines ----

  struct SplitScheme {
    std::vector<Binder> binders;
    Type dom, cod;      // normalized, in binder context
    std::vector<Type> args;      // full type-argument vector (see below)
    std::vector<Kind> argKinds;
    Kind arrow;         // kind of the arrow type
  };

  SplitScheme splitForPrim(const std::vector<Type>& tyArgs, const Scheme& expected,
                           const Term& at) {
    SplitScheme out;
    out.binders = expected->binders;
    Type body = normalizeType(expected->body);
    if (body->tag != TyTag::Fun)
      fail(ErrorCode::ArrowShapeMismatch,
           "expected type of a primitive is not an arrow: " + printScheme(expected), at->pos);
    out.dom = body->a;
    out.cod = body->b;
    int n = (int)expected->binders.size();
    for (const Type& t : tyArgs) {
      out.argKinds.push_back(inferKind(delta, {}, t));
      out.args.push_back(shiftMixed(normalizeType(t), n));
    }
    for (int i = 0; i < n; i++) {
      out.argKinds.push_back(expected->binders[i].kind);
      out.args.push_back(tyMixed(n - 1 - i, expected->binders[i].hint));
    }
    out.arrow = arrowKind(out.argKinds);
    return out;
  }

  // Ensures kind-k functor components exist for the rule instance.
  void requireFunctorial(const Type& t, int n, const Term& at) {
    if (mixedInFunDomain(t, n))
      fail(ErrorCode::ArrowShapeMismatch,
           "quantified variable occurs in a function domain: " + printType(t), at->pos);
  }

  static bool sameArgs(const std::vector<Type>& a, const std::vector<Type>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); i++)
      if (!typesEquivalentMono(a[i], b[i])) return false;
    return true;
  }

  Term rebuildSpine(Term core, const std::vector<Type>& tyArgs, int pos) {
    for (const Type& t : tyArgs) core = withPos(tmTyApp(core, t), pos);
    return core;
  }

  Term checkPrimSpine(const Term& whole, const Term& core, const std::vector<Type>& tyArgs,
                      const Scheme& expected) {
    // tt: no arrow involved
    if (core->tag == TmTag::Tt) {
      if (!tyArgs.empty() || !expected->binders.empty() ||
          normalizeType(expected->body)->tag != TyTag::Unit)
        mismatch(whole, expected, "tt : 1");
      return core;
    }

    SplitScheme sp = splitForPrim(tyArgs, expected, whole);
    int n = (int)sp.binders.size();
    const Type& D = sp.dom;
    const Type& C = sp.cod;

    auto muSpine = [&](const Type& t, Type& bodyOut) -> bool {
      std::vector<Type> margs;
      Type head = spineHead(t, margs);
      if (head->tag != TyTag::Mu) return false;
      if (!sameArgs(margs, sp.args)) return false;
      for (int i : freeMixed(head->a))
        if (i < n) return false;
      bodyOut = head->a;
      return true;
    };

    switch (core->tag) {
      case TmTag::In: {
        Type b;
        if (!muSpine(C, b))
          fail(ErrorCode::ArrowShapeMismatch,
               "in requires a recursive result type: " + printScheme(expected), whole->pos);
        Type want = normalizeType(applySpine(tyApp(b, tyMu(b)), sp.args));
        if (!typeEq(D, want)) mismatch(whole, expected, "in at " + printType(want));
        return rebuildSpine(core, tyArgs, whole->pos);
      }
      case TmTag::Unin: {
        Type b;
        if (!muSpine(D, b))
          fail(ErrorCode::ArrowShapeMismatch,
               "unin requires a recursive argument type: " + printScheme(expected),
               whole->pos);
        Type want = normalizeType(applySpine(tyApp(b, tyMu(b)), sp.args));
        if (!typeEq(C, want)) mismatch(whole, expected, "unin at " + printType(want));
        return rebuildSpine(core, tyArgs, whole->pos);
      }
      case TmTag::Fst:
      case TmTag::Snd: {
        if (D->tag != TyTag::Prod)
          fail(ErrorCode::ArrowShapeMismatch,
               "projection requires a product argument: " + printScheme(expected), whole->pos);
        requireFunctorial(D, n, whole);
        const Type& want = core->tag == TmTag::Fst ? D->a : D->b;
        if (!typeEq(C, want)) mismatch(whole, expected, "projection at " + printType(want));
        return rebuildSpine(core, tyArgs, whole->pos);
      }
      case TmTag::Inl:
      case TmTag::Inr: {
        if (C->tag != TyTag::Sum)
          fail(ErrorCode::ArrowShapeMismatch,
               "injection requires a sum result: " + printScheme(expected), whole->pos);
        requireFunctorial(C, n, whole);
        const Type& want = core->tag == TmTag::Inl ? C->a : C->b;
        if (!typeEq(D, want)) mismatch(whole, expected, "injection at " + printType(want));
        return rebuildSpine(core, tyArgs, whole->pos);
      }
      case TmTag::Absurd: {
        if (D->tag != TyTag::Empty)
          fail(ErrorCode::ArrowShapeMismatch,
               "absurd requires an empty argument type: " + printScheme(expected), whole->pos);
        requireFunctorial(C, n, whole);
        return rebuildSpine(core, tyArgs, whole->pos);
      }
      case TmTag::Fork:
      case TmTag::Join: {
        bool isFork = core->tag == TmTag::Fork;
        const Type& split = isFork ? C : D;
        if (split->tag != (isFork ? TyTag::Prod : TyTag::Sum))
          fail(ErrorCode::ArrowShapeMismatch,
               std::string(isFork ? "fork" : "join") +
                   " does not fit expected type: " + printScheme(expected),
               whole->pos);
        requireFunctorial(D, n, whole);
        requireFunctorial(C, n, whole);
        Scheme sA = core->annA, sB = core->annB;
        if (sA && sB) {
          // recorded component schemes: validate by instantiating them with
          // the full type-argument vector inside the binder context
          if ((int)sA->binders.size() != (int)sp.args.size() ||
              (int)sB->binders.size() != (int)sp.args.size())
            mismatch(whole, expected, "recorded component schemes");
          Scheme iA = instantiateAll(shiftMixedScheme(sA, n), sp.args);
          Scheme iB = instantiateAll(shiftMixedScheme(sB, n), sp.args);
          Type bA = normalizeType(iA->body), bB = normalizeType(iB->body);
          bool ok = bA->tag == TyTag::Fun && bB->tag == TyTag::Fun &&
                    typeEq(bA->a, isFork ? D : D->a) && typeEq(bB->a, isFork ? D : D->b) &&
                    typeEq(bA->b, isFork ? C->a : C) && typeEq(bB->b, isFork ? C->b : C);
          if (!ok) mismatch(whole, expected, "recorded component schemes");
        } else {
          if (!tyArgs.empty())
            fail(ErrorCode::CannotSynthesize,
                 "type-applied fork/join needs component annotations; ascribe the term",
                 whole->pos);
          sA = mkScheme(sp.binders, isFork ? tyFun(D, C->a) : tyFun(D->a, C));
          sB = mkScheme(sp.binders, isFork ? tyFun(D, C->b) : tyFun(D->b, C));
        }
        Term l = check(core->a, sA);
        Term r = check(core->b, sB);
        Term t = isFork ? tmFork(l, r) : tmJoin(l, r);
        t = withAnnB(withAnnA(withPos(t, whole->pos), sA), sB);
        return rebuildSpine(t, tyArgs, whole->pos);
      }
      case TmTag::Fold: {
        Kind ki = inferKind(delta, {}, core->type);
        if (ki->isStar() || !kindEq(ki->dom, ki->cod))
          fail(ErrorCode::MuBodyNotEndo,
               "fold index must have kind k -> k, got " + showKind(ki), whole->pos);
        Kind kf = ki->dom;
        if (kindArity(kf) != (int)sp.args.size())
          fail(ErrorCode::ArrowShapeMismatch,
               "fold arrow kind does not match expected type", whole->pos);
        Type b;
        if (!muSpine(D, b))
          fail(ErrorCode::ArrowShapeMismatch,
               "fold requires a recursive argument type: " + printScheme(expected),
               whole->pos);
        Type idxN = normalizeType(core->type);
        if (!typeEq(b, shiftMixed(idxN, n)))
          fail(ErrorCode::TypeMismatch,
               "fold index does not match the expected recursive type", whole->pos);
        Type carrier = core->annDst;
        if (!carrier) {
          if (!tyArgs.empty())
            fail(ErrorCode::CannotSynthesize,
                 "type-applied fold needs a carrier annotation; ascribe the term",
                 whole->pos);
          carrier = reabstractOver(C, sp.binders);
        }
        checkKind(delta, {}, carrier, kf);
        // consistency: carrier applied to the args is the expected codomain
        Type cWant = normalizeType(applySpine(shiftMixed(carrier, n), sp.args));
        if (!typeEq(C, cWant))
          mismatch(whole, expected, "fold carrier " + printType(carrier));
        Scheme algScheme =
            expandArrow({normalizeType(tyApp(idxN, carrier)), kf, carrier});
        Term alg = check(core->a, algScheme);
        Term t = withPos(tmFold(core->type, alg), whole->pos);
        t = withMapAnn(t, nullptr, carrier, kf);
        return rebuildSpine(t, tyArgs, whole->pos);
      }
      case TmTag::Map: {
        Kind ki = inferKind(delta, {}, core->type);
        if (ki->isStar())
          fail(ErrorCode::KindMismatch, "map index must have an arrow kind", whole->pos);
        Kind k1 = ki->dom, k2 = ki->cod;
        if (kindArity(k2) != (int)sp.args.size())
          fail(ErrorCode::ArrowShapeMismatch,
               "map arrow kind does not match expected type", whole->pos);
        Type idxN = shiftMixed(normalizeType(core->type), n);
        Type src = core->annSrc, dst = core->annDst;
        if (src && dst) {
          checkKind(delta, {}, src, k1);
          checkKind(delta, {}, dst, k1);
        } else {
          auto s1 = solveIndexArg(idxN, sp.args, D);
          auto s2 = solveIndexArg(idxN, sp.args, C);
          if (!s1 || !s2)
            fail(ErrorCode::ArrowShapeMismatch,
                 "cannot determine the mapped types from " + printScheme(expected),
                 whole->pos);
          if (!*s1 || !*s2)
            fail(ErrorCode::CannotSynthesize,
                 "map over a constant functor needs annotations; ascribe the argument",
                 whole->pos);
          // solutions are in binder context; the metavariables may not
          // depend on the quantified variables
          for (Type* t : {&*s1, &*s2}) {
            for (int i : freeMixed(*t))
              if (i < n)
                fail(ErrorCode::ArrowShapeMismatch,
                     "mapped type depends on the arrow's quantifiers", whole->pos);
            *t = shiftMixed(*t, -n);
          }
          src = *s1;
          dst = *s2;
        }
        // consistency with the expected arrow
        Type dWant = normalizeType(applySpine(tyApp(idxN, shiftMixed(src, n)), sp.args));
        Type cWant = normalizeType(applySpine(tyApp(idxN, shiftMixed(dst, n)), sp.args));
        if (!typeEq(D, dWant) || !typeEq(C, cWant))
          mismatch(whole, expected, "map at " + printType(src) + " => " + printType(dst));
        Term f = check(core->a, expandArrow({src, k1, dst}));
        Term t = withPos(tmMap(core->type, f), whole->pos);
        t = withMapAnn(t, src, dst, k1);
        return rebuildSpine(t, tyArgs, whole->pos);
      }
      default:
        fail(ErrorCode::Internal, "checkPrimSpine: not a primitive", whole->pos);
    }
  }
};

} // namespace

Term checkTerm(const TermCtx& gamma, const KindCtx& delta, const Term& m,
               const Scheme& expected) {
  Checker c{delta, gamma};
  checkScheme(delta, expected);
  return c.check(m, expected);
}

std::pair<Term, Scheme> inferTerm(const TermCtx& gamma, const KindCtx& delta, const Term& m) {
  Checker c{delta, gamma};
  auto r = c.tryInfer(m);
  if (!r)
    fail(ErrorCode::CannotSynthesize,
         "cannot synthesize a type for " + printTerm(m) + "; add an ascription", m->pos);
  return *r;
}

} // namespace xdt
