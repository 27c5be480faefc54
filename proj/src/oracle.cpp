#include "xdt/oracle.hpp"

#include "xdt/errors.hpp"
#include "xdt/normalize.hpp"
#include "xdt/reduction.hpp"
#include "xdt/surface.hpp"

#include <cassert>
#include <cstring>
#include <sstream>

namespace xdt {

// ---------------------------------------------------------------------------
// Observation trees
// ---------------------------------------------------------------------------

namespace {
Obs mkObs(ObsNode::Tag tag, Obs a = nullptr, Obs b = nullptr) {
  auto n = std::make_shared<ObsNode>();
  n->tag = tag;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}
} // namespace

Obs obsUnit() {
  static const Obs u = mkObs(ObsNode::Tag::Unit);
  return u;
}
Obs obsPair(Obs l, Obs r) { return mkObs(ObsNode::Tag::Pair, std::move(l), std::move(r)); }
Obs obsL(Obs v) { return mkObs(ObsNode::Tag::TagL, std::move(v)); }
Obs obsR(Obs v) { return mkObs(ObsNode::Tag::TagR, std::move(v)); }
Obs obsWrap(Obs v) { return mkObs(ObsNode::Tag::Wrap, std::move(v)); }

bool obsEq(const Obs& a, const Obs& b) {
  if (a == b) return true;
  if (a->tag != b->tag) return false;
  if (a->a && !obsEq(a->a, b->a)) return false;
  if (a->b && !obsEq(a->b, b->b)) return false;
  return true;
}

std::string showObs(const Obs& o) {
  switch (o->tag) {
    case ObsNode::Tag::Unit: return "unit";
    case ObsNode::Tag::Pair: return "pair(" + showObs(o->a) + ", " + showObs(o->b) + ")";
    case ObsNode::Tag::TagL: return "inl(" + showObs(o->a) + ")";
    case ObsNode::Tag::TagR: return "inr(" + showObs(o->a) + ")";
    case ObsNode::Tag::Wrap: return "mu(" + showObs(o->a) + ")";
  }
  return "?";
}

namespace {
Obs parseObsAt(const std::string& s, size_t& i) {
  auto expect = [&](char c) {
    if (i >= s.size() || s[i] != c)
      fail(ErrorCode::ParseError, "bad observation text at offset " + std::to_string(i));
    i++;
  };
  while (i < s.size() && isspace((unsigned char)s[i])) i++;
  auto word = [&](const char* w) {
    size_t n = strlen(w);
    if (s.compare(i, n, w) == 0) {
      i += n;
      return true;
    }
    return false;
  };
  if (word("unit")) return obsUnit();
  if (word("pair")) {
    expect('(');
    Obs l = parseObsAt(s, i);
    while (i < s.size() && isspace((unsigned char)s[i])) i++;
    expect(',');
    Obs r = parseObsAt(s, i);
    while (i < s.size() && isspace((unsigned char)s[i])) i++;
    expect(')');
    return obsPair(l, r);
  }
  if (word("inl")) {
    expect('(');
    Obs v = parseObsAt(s, i);
    while (i < s.size() && isspace((unsigned char)s[i])) i++;
    expect(')');
    return obsL(v);
  }
  if (word("inr")) {
    expect('(');
    Obs v = parseObsAt(s, i);
    while (i < s.size() && isspace((unsigned char)s[i])) i++;
    expect(')');
    return obsR(v);
  }
  if (word("mu")) {
    expect('(');
    Obs v = parseObsAt(s, i);
    while (i < s.size() && isspace((unsigned char)s[i])) i++;
    expect(')');
    return obsWrap(v);
  }
  fail(ErrorCode::ParseError, "bad observation text at offset " + std::to_string(i));
}
} // namespace

Obs parseObs(const std::string& text) {
  size_t i = 0;
  Obs o = parseObsAt(text, i);
  while (i < text.size() && isspace((unsigned char)text[i])) i++;
  if (i != text.size()) fail(ErrorCode::ParseError, "trailing junk in observation text");
  return o;
}

namespace {
bool observableAt(const Type& t, int depth) {
  switch (t->tag) {
    case TyTag::Fun:
      return false;
    case TyTag::MixedVar:
      return false;
    case TyTag::FunctorVar:
      return t->index < depth; // bound within a mu body is fine
    case TyTag::Empty:
    case TyTag::Unit:
      return true;
    case TyTag::Lam:
      return observableAt(t->a, depth + 1);
    case TyTag::Mu:
      return observableAt(t->a, depth);
    case TyTag::App:
    case TyTag::Prod:
    case TyTag::Sum:
      return observableAt(t->a, depth) && observableAt(t->b, depth);
  }
  return false;
}
} // namespace

bool observableType(const Type& t) { return observableAt(t, 0); }

long obsToNat(const Obs& o) {
  long n = 0;
  Obs cur = o;
  for (;;) {
    if (cur->tag != ObsNode::Tag::Wrap) return -1;
    const Obs& inner = cur->a;
    if (inner->tag == ObsNode::Tag::TagL)
      return inner->a->tag == ObsNode::Tag::Unit ? n : -1;
    if (inner->tag != ObsNode::Tag::TagR) return -1;
    n++;
    cur = inner->a;
  }
}

Obs natToObs(long n) {
  Obs o = obsWrap(obsL(obsUnit()));
  for (long i = 0; i < n; i++) o = obsWrap(obsR(o));
  return o;
}

// ---------------------------------------------------------------------------
// The definitional interpreter
// ---------------------------------------------------------------------------

namespace {

Sem mkSem(SemValue v) { return std::make_shared<SemValue>(std::move(v)); }

Sem semUnitV() {
  static const Sem u = mkSem(SemValue{SemTag::Unit});
  return u;
}

struct Interp {
  long fuel;

  void burn() {
    if (--fuel < 0) fail(ErrorCode::OutOfFuel, "oracle interpreter ran out of fuel");
  }

  static Type closeType(const Type& t, const SemEnvPtr& env) {
    Type out = t;
    // substitute innermost first; entries are closed so indices stay stable
    for (int i = 0; i < (int)env->types.size(); i++) {
      if (!env->types[i]) continue;
      out = substMixed(out, 0, env->types[i]);
    }
    return out;
  }

  // Environment types vector holds closed types, innermost first; term
  // variables likewise. Extension copies (fine at corpus scale).
  static SemEnvPtr extendTerm(const SemEnvPtr& env, Sem v) {
    auto e = std::make_shared<SemEnv>(*env);
    e->terms.insert(e->terms.begin(), std::move(v));
    return e;
  }

  static SemEnvPtr extendType(const SemEnvPtr& env, Type t) {
    auto e = std::make_shared<SemEnv>(*env);
    e->types.insert(e->types.begin(), std::move(t));
    return e;
  }

  Sem eval(const Term& t, const SemEnvPtr& env) {
    burn();
    switch (t->tag) {
      case TmTag::Var:
        if (t->index < 0 || t->index >= (int)env->terms.size())
          fail(ErrorCode::IllShapedValue, "oracle: unbound variable " + t->hint);
        return env->terms[t->index];
      case TmTag::Lam: {
        SemValue v{SemTag::Closure};
        v.env = env;
        v.body = t;
        return mkSem(std::move(v));
      }
      case TmTag::TyLam: {
        SemValue v{SemTag::Poly};
        v.env = env;
        v.body = t;
        return mkSem(std::move(v));
      }
      case TmTag::App: {
        Sem f = eval(t->a, env);
        Sem a = eval(t->b, env);
        return apply(f, a);
      }
      case TmTag::TyApp: {
        Sem f = eval(t->a, env);
        return applyType(f, normalizeType(closeType(t->type, env)));
      }
      case TmTag::Let: {
        Sem bound = eval(t->a, env);
        return eval(t->b, extendTerm(env, bound));
      }
      case TmTag::Ascribe:
        return eval(t->a, env);
      case TmTag::Tt:
        return semUnitV();
      case TmTag::Map:
      case TmTag::Fold: {
        SemValue v{SemTag::Prim};
        v.prim = t->tag;
        v.index = normalizeType(closeType(t->type, env));
        v.comp1 = eval(t->a, env);
        if (t->annSrc) v.src = normalizeType(closeType(t->annSrc, env));
        if (t->annDst) v.dst = normalizeType(closeType(t->annDst, env));
        return mkSem(std::move(v));
      }
      case TmTag::Fork:
      case TmTag::Join: {
        SemValue v{SemTag::Prim};
        v.prim = t->tag;
        v.comp1 = eval(t->a, env);
        v.comp2 = eval(t->b, env);
        return mkSem(std::move(v));
      }
      default: {
        SemValue v{SemTag::Prim};
        v.prim = t->tag;
        return mkSem(std::move(v));
      }
    }
  }

  Sem applyTypes(const Sem& f, const std::vector<Type>& ts) {
    Sem cur = f;
    for (const Type& t : ts) cur = applyType(cur, t);
    return cur;
  }

  Sem applyType(const Sem& f, const Type& ty) {
    burn();
    switch (f->tag) {
      case SemTag::Poly:
        return eval(f->body->a, extendType(f->env, ty));
      case SemTag::Prim: {
        SemValue v = *f;
        v.tyArgs.push_back(ty);
        return mkSem(std::move(v));
      }
      case SemTag::Native:
        return f; // type-erased host functions absorb instantiation
      default:
        fail(ErrorCode::IllShapedValue, "oracle: type application of a non-polymorphic value");
    }
  }

  Sem apply(const Sem& f, const Sem& a) {
    burn();
    switch (f->tag) {
      case SemTag::Closure:
        return eval(f->body->a, extendTerm(f->env, a));
      case SemTag::Native:
        return f->fn(a);
      case SemTag::Prim:
        return applyPrim(f, a);
      default:
        fail(ErrorCode::IllShapedValue, "oracle: application of a non-function");
    }
  }

  Sem applyPrim(const Sem& f, const Sem& a) {
    switch (f->prim) {
      case TmTag::In: {
        SemValue v{SemTag::Wrap};
        v.a = a;
        return mkSem(std::move(v));
      }
      case TmTag::Unin:
        if (a->tag != SemTag::Wrap)
          fail(ErrorCode::IllShapedValue, "oracle: unin of a non-wrapped value");
        return a->a;
      case TmTag::Inl: {
        SemValue v{SemTag::TagL};
        v.a = a;
        return mkSem(std::move(v));
      }
      case TmTag::Inr: {
        SemValue v{SemTag::TagR};
        v.a = a;
        return mkSem(std::move(v));
      }
      case TmTag::Fst:
      case TmTag::Snd:
        if (a->tag != SemTag::Pair)
          fail(ErrorCode::IllShapedValue, "oracle: projection of a non-pair");
        return f->prim == TmTag::Fst ? a->a : a->b;
      case TmTag::Fork: {
        SemValue v{SemTag::Pair};
        v.a = apply(applyTypes(f->comp1, f->tyArgs), a);
        v.b = apply(applyTypes(f->comp2, f->tyArgs), a);
        return mkSem(std::move(v));
      }
      case TmTag::Join:
        if (a->tag == SemTag::TagL) return apply(applyTypes(f->comp1, f->tyArgs), a->a);
        if (a->tag == SemTag::TagR) return apply(applyTypes(f->comp2, f->tyArgs), a->a);
        fail(ErrorCode::IllShapedValue, "oracle: join of a non-injection");
      case TmTag::Absurd:
        fail(ErrorCode::IllShapedValue, "oracle: absurd applied to a value");
      case TmTag::Map:
        return semMap(f->index, f->tyArgs, f->comp1, f->src, f->dst, a);
      case TmTag::Fold: {
        if (a->tag != SemTag::Wrap)
          fail(ErrorCode::IllShapedValue, "oracle: fold of a non-wrapped value");
        // structural recursion on the wrap spine: the catamorphism
        Sem self = f;
        SemValue rec{SemTag::Native};
        Interp* me = this;
        rec.fn = [me, self](Sem v) { return me->apply(self, v); };
        Sem recFn = mkSem(std::move(rec));
        Type muIdx = normalizeType(tyMu(f->index));
        Sem layer = semMap(f->index, f->tyArgs, recFn, muIdx,
                           f->dst ? f->dst : Type(nullptr), a->a);
        return apply(applyTypes(f->comp1, f->tyArgs), layer);
      }
      default:
        fail(ErrorCode::IllShapedValue, "oracle: primitive cannot take a value argument");
    }
  }

  // The functorial action, dispatching on the index applied to a hole.
  Sem semMap(const Type& idx, const std::vector<Type>& tyArgs, const Sem& morph,
             const Type& src, const Type& dst, const Sem& w) {
    burn();
    Type p = tyApp(shiftFunctor(normalizeType(idx), 1), tyFunctor(0, "#"));
    for (const Type& t : tyArgs) p = tyApp(p, shiftFunctor(t, 1));
    p = normalizeType(p);
    return semMapBody(p, morph, src, dst, w);
  }

  Sem semMapBody(const Type& p, const Sem& morph, const Type& src, const Type& dst,
                 const Sem& w) {
    burn();
    if (!functorOccurs(p, 0)) return w;

    // hole-headed spine
    {
      std::vector<Type> args;
      Type head = spineHead(p, args);
      if (head->tag == TyTag::FunctorVar && head->index == 0) {
        bool nested = false;
        for (const Type& a : args)
          if (functorOccurs(a, 0)) nested = true;
        if (!nested) {
          std::vector<Type> inst;
          for (const Type& a : args) inst.push_back(shiftFunctor(a, -1));
          return apply(applyTypes(morph, inst), w);
        }
        if (args.size() != 1 || !src || !dst)
          fail(ErrorCode::IllShapedValue, "oracle: nested functor application needs annotations");
        Type a = args[0];
        Type aDst = normalizeType(substFunctor(a, 0, dst));
        Interp* me = this;
        Type aCopy = a;
        Sem morphCopy = morph;
        Type srcCopy = src, dstCopy = dst;
        SemValue innerV{SemTag::Native};
        innerV.fn = [me, aCopy, morphCopy, srcCopy, dstCopy](Sem v) {
          return me->semMapBody(aCopy, morphCopy, srcCopy, dstCopy, v);
        };
        Sem inner = mkSem(std::move(innerV));
        // map the inner transformation over the source functor, then apply
        // the morphism at the transformed argument
        Sem mid = semMap(src, {}, inner, src, dst, w);
        return apply(applyTypes(morph, {aDst}), mid);
      }
    }

    switch (p->tag) {
      case TyTag::Prod: {
        if (w->tag != SemTag::Pair)
          fail(ErrorCode::IllShapedValue, "oracle: map over product of a non-pair");
        SemValue v{SemTag::Pair};
        v.a = semMapBody(p->a, morph, src, dst, w->a);
        v.b = semMapBody(p->b, morph, src, dst, w->b);
        return mkSem(std::move(v));
      }
      case TyTag::Sum: {
        if (w->tag == SemTag::TagL) {
          SemValue v{SemTag::TagL};
          v.a = semMapBody(p->a, morph, src, dst, w->a);
          return mkSem(std::move(v));
        }
        if (w->tag == SemTag::TagR) {
          SemValue v{SemTag::TagR};
          v.a = semMapBody(p->b, morph, src, dst, w->a);
          return mkSem(std::move(v));
        }
        fail(ErrorCode::IllShapedValue, "oracle: map over sum of a non-injection");
      }
      case TyTag::Fun: {
        Interp* me = this;
        Type cod = p->b;
        Sem morphCopy = morph;
        Type srcCopy = src, dstCopy = dst;
        Sem wCopy = w;
        SemValue v{SemTag::Native};
        v.fn = [me, cod, morphCopy, srcCopy, dstCopy, wCopy](Sem x) {
          return me->semMapBody(cod, morphCopy, srcCopy, dstCopy, me->apply(wCopy, x));
        };
        return mkSem(std::move(v));
      }
      default:
        break;
    }

    std::vector<Type> margs;
    Type head = spineHead(p, margs);
    if (head->tag == TyTag::Mu) {
      if (w->tag != SemTag::Wrap)
        fail(ErrorCode::IllShapedValue, "oracle: map over recursive type of a non-wrap");
      Type unfolded = normalizeType(applySpine(tyApp(head->a, head), margs));
      SemValue v{SemTag::Wrap};
      v.a = semMapBody(unfolded, morph, src, dst, w->a);
      return mkSem(std::move(v));
    }

    fail(ErrorCode::IllShapedValue, "oracle: map over a non-functorial shape");
  }
};

} // namespace

Sem denote(const Term& t, long fuel) {
  Interp in{fuel};
  auto env = std::make_shared<SemEnv>();
  return in.eval(t, env);
}

// ---------------------------------------------------------------------------
// Observers
// ---------------------------------------------------------------------------

Obs observeSem(const Sem& v, const Type& ty) {
  Type t = normalizeType(ty);
  switch (t->tag) {
    case TyTag::Unit:
      if (v->tag != SemTag::Unit)
        fail(ErrorCode::IllShapedValue, "semantic value does not match 1");
      return obsUnit();
    case TyTag::Prod:
      if (v->tag != SemTag::Pair)
        fail(ErrorCode::IllShapedValue, "semantic value does not match a product");
      return obsPair(observeSem(v->a, t->a), observeSem(v->b, t->b));
    case TyTag::Sum:
      if (v->tag == SemTag::TagL) return obsL(observeSem(v->a, t->a));
      if (v->tag == SemTag::TagR) return obsR(observeSem(v->a, t->b));
      fail(ErrorCode::IllShapedValue, "semantic value does not match a sum");
    case TyTag::Empty:
      fail(ErrorCode::IllShapedValue, "no values of the empty type exist");
    default: {
      std::vector<Type> args;
      Type head = spineHead(t, args);
      if (head->tag == TyTag::Mu) {
        if (v->tag != SemTag::Wrap)
          fail(ErrorCode::IllShapedValue, "semantic value does not match a recursive type");
        Type unfolded = normalizeType(applySpine(tyApp(head->a, head), args));
        return obsWrap(observeSem(v->a, unfolded));
      }
      fail(ErrorCode::NotObservable, "type is not observable: " + printType(t));
    }
  }
}

namespace {

struct TermValueView {
  Term core;
  std::vector<Type> tyArgs;
  Term arg;
};

TermValueView viewValue(const Term& v) {
  TermValueView out;
  Term spine = v;
  if (v->tag == TmTag::App) {
    out.arg = v->b;
    spine = v->a;
  }
  while (spine->tag == TmTag::TyApp) {
    out.tyArgs.insert(out.tyArgs.begin(), spine->type);
    spine = spine->a;
  }
  out.core = spine;
  return out;
}

} // namespace

Obs observeTermValue(const Term& v, const Type& ty, long fuel) {
  Type t = normalizeType(ty);
  TermValueView view = viewValue(v);
  switch (t->tag) {
    case TyTag::Unit:
      if (view.core->tag != TmTag::Tt)
        fail(ErrorCode::IllShapedValue, "value does not match 1: " + printTerm(v));
      return obsUnit();
    case TyTag::Sum:
      if (view.core->tag == TmTag::Inl && view.arg)
        return obsL(observeTermValue(view.arg, t->a, fuel));
      if (view.core->tag == TmTag::Inr && view.arg)
        return obsR(observeTermValue(view.arg, t->b, fuel));
      fail(ErrorCode::IllShapedValue, "value does not match a sum: " + printTerm(v));
    case TyTag::Prod: {
      if (view.core->tag != TmTag::Fork || !view.arg)
        fail(ErrorCode::IllShapedValue, "value does not match a product: " + printTerm(v));
      auto run = [&](const Term& side, const Type& side_ty) {
        Term spine = side;
        for (const Type& a : view.tyArgs) spine = tmTyApp(spine, a);
        EvalResult r = evaluate(tmApp(spine, view.arg), fuel);
        if (r.status != EvalStatus::Value)
          fail(ErrorCode::IllShapedValue, "projection did not reduce to a value");
        return observeTermValue(r.term, side_ty, fuel);
      };
      return obsPair(run(view.core->a, t->a), run(view.core->b, t->b));
    }
    case TyTag::Empty:
      fail(ErrorCode::IllShapedValue, "no values of the empty type exist");
    default: {
      std::vector<Type> args;
      Type head = spineHead(t, args);
      if (head->tag == TyTag::Mu) {
        if (view.core->tag != TmTag::In || !view.arg)
          fail(ErrorCode::IllShapedValue,
               "value does not match a recursive type: " + printTerm(v));
        Type unfolded = normalizeType(applySpine(tyApp(head->a, head), args));
        return obsWrap(observeTermValue(view.arg, unfolded, fuel));
      }
      fail(ErrorCode::NotObservable, "type is not observable: " + printType(t));
    }
  }
}

} // namespace xdt
