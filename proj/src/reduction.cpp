#include "xdt/reduction.hpp"

#include "xdt/errors.hpp"
#include "xdt/kinding.hpp"
#include "xdt/normalize.hpp"
#include "xdt/surface.hpp"
#include "xdt/typing.hpp"

#include <cassert>

namespace xdt {

namespace {

// Peel type applications off a term; outermost last.
Term peelTyApps(const Term& t, std::vector<Type>& args) {
  if (t->tag == TmTag::TyApp) {
    Term head = peelTyApps(t->a, args);
    args.push_back(t->type);
    return head;
  }
  return t;
}

Term rebuildTyApps(Term head, const std::vector<Type>& args, const Scheme& headScheme) {
  Scheme s = headScheme;
  for (const Type& a : args) {
    Term n = tmTyApp(head, a);
    if (s) {
      n = withAnnA(n, s);
      s = s->binders.empty() ? nullptr : instantiateScheme(s, a);
    }
    head = n;
  }
  return head;
}

// A primitive value spine: prim core (components already values) under type
// applications, no value argument.
bool isPrimValueSpineCore(const Term& t) {
  switch (t->tag) {
    case TmTag::In:
    case TmTag::Unin:
    case TmTag::Fst:
    case TmTag::Snd:
    case TmTag::Inl:
    case TmTag::Inr:
    case TmTag::Tt:
    case TmTag::Absurd:
      return true;
    case TmTag::Map:
    case TmTag::Fold:
      return isValue(t->a);
    case TmTag::Fork:
    case TmTag::Join:
      return isValue(t->a) && isValue(t->b);
    default:
      return false;
  }
}

bool isPrimValueSpine(const Term& t) {
  if (t->tag == TmTag::TyApp) return isPrimValueSpine(t->a);
  return isPrimValueSpineCore(t);
}

TmTag spineHeadTag(const Term& t) {
  if (t->tag == TmTag::TyApp) return spineHeadTag(t->a);
  return t->tag;
}

} // namespace

bool isValue(const Term& t) {
  switch (t->tag) {
    case TmTag::Lam:
    case TmTag::TyLam:
      return true;
    case TmTag::In:
    case TmTag::Unin:
    case TmTag::Fst:
    case TmTag::Snd:
    case TmTag::Inl:
    case TmTag::Inr:
    case TmTag::Tt:
    case TmTag::Absurd:
      return true;
    case TmTag::Map:
    case TmTag::Fold:
      return isValue(t->a);
    case TmTag::Fork:
    case TmTag::Join:
      return isValue(t->a) && isValue(t->b);
    case TmTag::TyApp:
      return isPrimValueSpine(t->a);
    case TmTag::App: {
      if (!isPrimValueSpine(t->a) || !isValue(t->b)) return false;
      // `unin ts v` with an in-headed v is the roll/unroll redex, so
      // saturated unin applications reduce rather than count as values.
      switch (spineHeadTag(t->a)) {
        case TmTag::In:
        case TmTag::Fork:
        case TmTag::Inl:
        case TmTag::Inr:
        case TmTag::Absurd:
          return true;
        default:
          return false;
      }
    }
    default:
      return false;
  }
}

namespace {

[[noreturn]] void stuck(const Term& t, const std::string& why) {
  fail(ErrorCode::StuckTerm, "stuck term (" + why + "): " + printTerm(t), t->pos);
}

Term mkAppAnn(Term f, Term a, const Scheme& argScheme) {
  Term n = tmApp(std::move(f), std::move(a));
  if (argScheme) n = withAnnA(n, argScheme);
  return n;
}

// ---------------------------------------------------------------------------
// Map dispatch.
//
// The index is analyzed fully applied: P = normalize((index HOLE) ts) with
// the hole at functor index 0. All right-hand sides are built at kind *
// (the map was saturated), which keeps every constructed subterm
// monomorphic.
// ---------------------------------------------------------------------------

struct MapRedex {
  Term mapNode; // the Map term (carries index, morphism, annotations)
  std::vector<Type> tyArgs;
  Term scrutinee;
  Scheme scrutineeScheme; // annA of the outer application, may be null
};

struct ValueApp {
  Term core;
  std::vector<Type> tyArgs;
  Term arg;            // value argument
  Scheme argScheme;    // annA of the App node
};

std::optional<ValueApp> asValueApp(const Term& t) {
  if (t->tag != TmTag::App) return std::nullopt;
  ValueApp v;
  v.core = peelTyApps(t->a, v.tyArgs);
  v.arg = t->b;
  v.argScheme = t->annA;
  return v;
}

std::optional<StepOut> contractMap(const MapRedex& r) {
  const Term& mapNode = r.mapNode;
  const Term& g = mapNode->a;
  Type src = mapNode->annSrc; // may be null
  Type dst = mapNode->annDst;
  Kind k1 = mapNode->annKind;

  Type idx = normalizeType(mapNode->type);
  if (!k1) k1 = inferKind({}, {}, idx)->dom;

  // fully applied body with the hole at functor index 0
  Type p = tyApp(shiftFunctor(idx, 1), tyFunctor(0, "#"));
  for (const Type& t : r.tyArgs) p = tyApp(p, t);
  p = normalizeType(p);

  auto holeTo = [&](const Type& t, const Type& by) {
    return normalizeType(substFunctor(t, 0, by));
  };
  auto noHole = [&](const Type& t) { return shiftFunctor(t, -1); };

  // morphism scheme, for annotating rebuilt type applications
  Scheme gScheme = (src && dst) ? expandArrow({src, k1, dst}) : nullptr;

  // (b) constant functor: identity
  if (!functorOccurs(p, 0)) {
    std::string tag = p->tag == TyTag::Unit ? "map_unit(15)" : "map_const";
    return StepOut{r.scrutinee, tag};
  }

  // hole-headed spine: the generalized identity-law case
  {
    std::vector<Type> args;
    Type head = spineHead(p, args);
    if (head->tag == TyTag::FunctorVar && head->index == 0) {
      bool argsHaveHole = false;
      for (const Type& a : args)
        if (functorOccurs(a, 0)) argsHaveHole = true;
      if (!argsHaveHole) {
        std::vector<Type> inst;
        for (const Type& a : args) inst.push_back(noHole(a));
        Term f = rebuildTyApps(g, inst, gScheme);
        return StepOut{mkAppAnn(f, r.scrutinee, r.scrutineeScheme), "map_id(10)"};
      }
      // nested occurrence, e.g. X (X a): compose through the inner layer
      if (args.size() != 1 || !src || !dst)
        stuck(r.scrutinee, "map over a nested functor application needs annotations");
      Type a = args[0];
      Kind ka = k1->dom; // |args| == arity(k1) == 1
      Type innerIdx = tyLam(k1, "X", a);
      Term innerMap = withMapAnn(tmMap(innerIdx, g), src, dst, k1);
      Type aSrc = holeTo(a, src), aDst = holeTo(a, dst);
      Term outerMap = withMapAnn(tmMap(src, innerMap), aSrc, aDst, ka);
      Term mapped = mkAppAnn(outerMap, r.scrutinee, r.scrutineeScheme);
      Term f = rebuildTyApps(g, {aDst}, gScheme);
      Term out = mkAppAnn(f, mapped, monoScheme(normalizeType(tyApp(src, aDst))));
      return StepOut{out, "map_id(10)"};
    }
  }

  switch (p->tag) {
    case TyTag::Prod: {
      auto w = asValueApp(r.scrutinee);
      if (!w || w->core->tag != TmTag::Fork)
        stuck(r.scrutinee, "map over a product expects a fork value");
      Type p1 = p->a, p2 = p->b;
      auto component = [&](const Term& wi, const Scheme& wiScheme, const Type& pi) {
        Term sub = withMapAnn(tmMap(tyLam(k1, "X", pi), g), src, dst, k1);
        Term applied = rebuildTyApps(wi, w->tyArgs, wiScheme);
        Scheme domAnn = w->argScheme;
        Term inner = mkAppAnn(applied, tmVar(0, "x"), domAnn);
        Scheme innerAnn = src ? monoScheme(holeTo(pi, src)) : nullptr;
        return tmLam("x", mkAppAnn(sub, inner, innerAnn));
      };
      Term n1 = component(w->core->a, w->core->annA, p1);
      Term n2 = component(w->core->b, w->core->annB, p2);
      Term fork = tmFork(n1, n2);
      if (w->argScheme && dst) {
        Scheme sA = monoScheme(tyFun(w->argScheme->body, holeTo(p1, dst)));
        Scheme sB = monoScheme(tyFun(w->argScheme->body, holeTo(p2, dst)));
        fork = withAnnB(withAnnA(fork, sA), sB);
      }
      return StepOut{mkAppAnn(fork, w->arg, w->argScheme), "map_prod(12)"};
    }
    case TyTag::Sum: {
      auto w = asValueApp(r.scrutinee);
      if (!w || (w->core->tag != TmTag::Inl && w->core->tag != TmTag::Inr))
        stuck(r.scrutinee, "map over a sum expects an injection value");
      bool left = w->core->tag == TmTag::Inl;
      Type pi = left ? p->a : p->b;
      Term sub = withMapAnn(tmMap(tyLam(k1, "X", pi), g), src, dst, k1);
      Term mapped = mkAppAnn(sub, w->arg, w->argScheme);
      Term inj = tmPrim(left ? TmTag::Inl : TmTag::Inr);
      Scheme mappedScheme = dst ? monoScheme(holeTo(pi, dst)) : nullptr;
      return StepOut{mkAppAnn(inj, mapped, mappedScheme),
                     left ? "map_inl(13)" : "map_inr(14)"};
    }
    case TyTag::Fun: {
      // strict positivity: the hole occurs only in the codomain
      Type cod = p->b;
      Term sub = withMapAnn(tmMap(tyLam(k1, "X", cod), g), src, dst, k1);
      Term call = mkAppAnn(shiftTerm(r.scrutinee, 1), tmVar(0, "x"),
                           monoScheme(noHole(p->a)));
      Scheme callScheme = src ? monoScheme(holeTo(cod, src)) : nullptr;
      return StepOut{tmLam("x", mkAppAnn(sub, call, callScheme)), "map_fun"};
    }
    default:
      break;
  }

  // recursive type: push the map under `in`, unfolding the index one level
  {
    std::vector<Type> margs;
    Type head = spineHead(p, margs);
    if (head->tag == TyTag::Mu) {
      auto w = asValueApp(r.scrutinee);
      if (!w || w->core->tag != TmTag::In || w->tyArgs.size() != margs.size())
        stuck(r.scrutinee, "map over a recursive type expects an in value");
      Type unfolded = applySpine(tyApp(head->a, head), margs);
      Type newIdx = normalizeType(tyLam(k1, "X", unfolded));
      Term sub = withMapAnn(tmMap(newIdx, g), src, dst, k1);
      Term mapped = mkAppAnn(sub, w->arg, w->argScheme);
      std::vector<Type> targetArgs;
      Scheme inScheme;
      if (dst) {
        for (const Type& ma : margs) targetArgs.push_back(holeTo(ma, dst));
        Type b = holeTo(head->a, dst);
        Kind kmu = inferKind({}, {}, tyMu(b));
        inScheme = expandArrow({normalizeType(tyApp(b, tyMu(b))), kmu, tyMu(b)});
      } else {
        for (const Type& ma : margs) {
          if (functorOccurs(ma, 0))
            stuck(r.scrutinee, "map over a recursive type needs annotations");
          targetArgs.push_back(noHole(ma));
        }
      }
      Term in = rebuildTyApps(tmPrim(TmTag::In), targetArgs, inScheme);
      Scheme mappedScheme =
          dst ? monoScheme(normalizeType(applySpine(tyApp(holeTo(head->a, dst),
                                                          tyMu(holeTo(head->a, dst))),
                                                    targetArgs)))
              : nullptr;
      return StepOut{mkAppAnn(in, mapped, mappedScheme), "map_mu(11)"};
    }
  }

  stuck(r.scrutinee, "map index has no functorial interpretation here");
}

// ---------------------------------------------------------------------------
// Redex contraction for a saturated application App(fspine, v).
// ---------------------------------------------------------------------------

std::optional<StepOut> contractApp(const Term& t) {
  const Term& f = t->a;
  const Term& v = t->b;

  if (f->tag == TmTag::Lam)
    return StepOut{substTermInTerm(f->a, 0, v), "app_beta(1)"};

  std::vector<Type> tyArgs;
  Term core = peelTyApps(f, tyArgs);

  switch (core->tag) {
    case TmTag::Unin: {
      auto inner = asValueApp(v);
      if (!inner || inner->core->tag != TmTag::In || inner->tyArgs.size() != tyArgs.size())
        stuck(t, "unin applied to a non-in value");
      return StepOut{inner->arg, "unin_in(4)"};
    }
    case TmTag::Fold: {
      auto inner = asValueApp(v);
      if (!inner || inner->core->tag != TmTag::In || inner->tyArgs.size() != tyArgs.size())
        stuck(t, "fold applied to a non-in value");
      const Term& alg = core->a;
      Type idx = normalizeType(core->type);
      Type carrier = core->annDst; // may be null
      Kind kf = core->annKind;
      Scheme algScheme, mapSpineScheme, algArgScheme;
      Type muIdx = tyMu(idx);
      // the mapped morphism is the fold itself
      Term mapNode = tmMap(core->type, core);
      if (carrier) {
        if (!kf) kf = inferKind({}, {}, carrier);
        mapNode = withMapAnn(mapNode, muIdx, carrier, kf);
        algScheme = expandArrow({normalizeType(tyApp(idx, carrier)), kf, carrier});
        mapSpineScheme = expandArrow(
            {normalizeType(tyApp(idx, muIdx)), kf, normalizeType(tyApp(idx, carrier))});
        algArgScheme = monoScheme(
            normalizeType(applySpine(tyApp(idx, carrier), tyArgs)));
      }
      Term mapSpine = rebuildTyApps(mapNode, tyArgs, mapSpineScheme);
      Term mapped = mkAppAnn(mapSpine, inner->arg, inner->argScheme);
      Term algSpine = rebuildTyApps(alg, tyArgs, algScheme);
      return StepOut{mkAppAnn(algSpine, mapped, algArgScheme), "fold_in(5)"};
    }
    case TmTag::Fst:
    case TmTag::Snd: {
      auto inner = asValueApp(v);
      if (!inner || inner->core->tag != TmTag::Fork)
        stuck(t, "projection applied to a non-fork value");
      bool isFst = core->tag == TmTag::Fst;
      Term comp = isFst ? inner->core->a : inner->core->b;
      Scheme compScheme = isFst ? inner->core->annA : inner->core->annB;
      Term spine = rebuildTyApps(comp, inner->tyArgs, compScheme);
      return StepOut{mkAppAnn(spine, inner->arg, inner->argScheme),
                     isFst ? "fst_fork(6)" : "snd_fork(7)"};
    }
    case TmTag::Join: {
      auto inner = asValueApp(v);
      if (!inner || (inner->core->tag != TmTag::Inl && inner->core->tag != TmTag::Inr))
        stuck(t, "join applied to a non-injection value");
      bool left = inner->core->tag == TmTag::Inl;
      Term comp = left ? core->a : core->b;
      Scheme compScheme = left ? core->annA : core->annB;
      Term spine = rebuildTyApps(comp, tyArgs, compScheme);
      return StepOut{mkAppAnn(spine, inner->arg, inner->argScheme),
                     left ? "join_inl(8)" : "join_inr(9)"};
    }
    case TmTag::Map: {
      MapRedex r{core, tyArgs, v, t->annA};
      return contractMap(r);
    }
    default:
      stuck(t, "no reduction rule applies");
  }
}

std::optional<StepOut> tryStep(const Term& t) {
  if (isValue(t)) return std::nullopt;
  auto rebuild = [&](Term child, const StepOut& s, Term TermNode::*field) {
    TermNode n = *t;
    n.*field = s.term;
    return StepOut{std::make_shared<TermNode>(std::move(n)), s.rule};
  };
  switch (t->tag) {
    case TmTag::App: {
      if (!isValue(t->a)) {
        auto s = tryStep(t->a);
        if (!s) stuck(t, "function position is neither a value nor reducible");
        return rebuild(t->a, *s, &TermNode::a);
      }
      if (!isValue(t->b)) {
        auto s = tryStep(t->b);
        if (!s) stuck(t, "argument position is neither a value nor reducible");
        return rebuild(t->b, *s, &TermNode::b);
      }
      return contractApp(t);
    }
    case TmTag::TyApp: {
      if (!isValue(t->a)) {
        auto s = tryStep(t->a);
        if (!s) stuck(t, "type application head");
        return rebuild(t->a, *s, &TermNode::a);
      }
      if (t->a->tag == TmTag::TyLam)
        return StepOut{substMixedInTerm(t->a->a, 0, t->type), "tyapp_beta(3)"};
      stuck(t, "type application of a non-polymorphic value");
    }
    case TmTag::Let: {
      if (!isValue(t->a)) {
        auto s = tryStep(t->a);
        if (!s) stuck(t, "let-bound term");
        return rebuild(t->a, *s, &TermNode::a);
      }
      return StepOut{substTermInTerm(t->b, 0, t->a), "let_subst(2)"};
    }
    case TmTag::Map:
    case TmTag::Fold: {
      auto s = tryStep(t->a);
      if (!s) stuck(t, "map/fold argument");
      return rebuild(t->a, *s, &TermNode::a);
    }
    case TmTag::Fork:
    case TmTag::Join: {
      if (!isValue(t->a)) {
        auto s = tryStep(t->a);
        if (!s) stuck(t, "first component");
        return rebuild(t->a, *s, &TermNode::a);
      }
      auto s = tryStep(t->b);
      if (!s) stuck(t, "second component");
      return rebuild(t->b, *s, &TermNode::b);
    }
    case TmTag::Var:
      stuck(t, "free variable");
    case TmTag::Ascribe:
      fail(ErrorCode::Internal, "ascription reached the evaluator; check the term first");
    default:
      stuck(t, "no rule for this term form");
  }
}

} // namespace

std::optional<StepOut> step(const Term& t) { return tryStep(t); }

EvalResult evaluateTraced(const Term& t, long fuel, StepTrace& out) {
  Term cur = t;
  for (long i = 0; i < fuel; i++) {
    std::optional<StepOut> s;
    try {
      s = tryStep(cur);
    } catch (const XdtError& e) {
      if (e.code == ErrorCode::StuckTerm)
        return {EvalStatus::Stuck, cur, i, e.what()};
      throw;
    }
    if (!s) return {EvalStatus::Value, cur, i, ""};
    out.push_back({s->rule, cur, s->term});
    cur = s->term;
  }
  return {EvalStatus::OutOfFuel, cur, fuel, "fuel exhausted"};
}

EvalResult evaluate(const Term& t, long fuel, const TraceFn& trace) {
  Term cur = t;
  for (long i = 0; i < fuel; i++) {
    std::optional<StepOut> s;
    try {
      s = tryStep(cur);
    } catch (const XdtError& e) {
      if (e.code == ErrorCode::StuckTerm)
        return {EvalStatus::Stuck, cur, i, e.what()};
      throw;
    }
    if (!s) return {EvalStatus::Value, cur, i, ""};
    cur = s->term;
    if (trace) trace(s->rule, cur);
  }
  return {EvalStatus::OutOfFuel, cur, fuel, "fuel exhausted"};
}

} // namespace xdt
