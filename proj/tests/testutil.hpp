#pragma once

// Shared helpers for the test suites: a tiny deterministic PRNG, random
// syntax generators with constructor-coverage tracking, an independent
// strict-positivity scanner, and corpus loading.

#include "xdt/driver.hpp"
#include "xdt/errors.hpp"
#include "xdt/kinding.hpp"
#include "xdt/normalize.hpp"
#include "xdt/oracle.hpp"
#include "xdt/reduction.hpp"
#include "xdt/surface.hpp"
#include "xdt/syntax.hpp"
#include "xdt/typing.hpp"

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace xdt::test {

struct Rng {
  std::mt19937 gen;
  explicit Rng(unsigned seed = 0xdecafbad) : gen(seed) {}
  int range(int lo, int hi) { // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(gen);
  }
  bool coin() { return range(0, 1) == 1; }
};

// records which constructor forms a generator produced
struct Coverage {
  std::map<std::string, long> hits;
  void mark(const std::string& k) { hits[k]++; }
  double fraction(const std::vector<std::string>& all) const {
    int seen = 0;
    for (const auto& k : all)
      if (hits.count(k)) seen++;
    return all.empty() ? 1.0 : (double)seen / (double)all.size();
  }
};

// ---------------------------------------------------------------------------
// Random kinds and types (well-kinded by construction)
// ---------------------------------------------------------------------------

inline Kind genKind(Rng& r, int depth = 2) {
  if (depth <= 0 || r.range(0, 2) > 0) return kStar();
  return kArrow(genKind(r, depth - 1), genKind(r, depth - 1));
}

// Generates a type of the requested kind under the given contexts.
inline Type genType(Rng& r, const KindCtx& delta, const FunctorCtx& phi, const Kind& k,
                    int depth, Coverage* cov = nullptr) {
  auto mark = [&](const char* s) {
    if (cov) cov->mark(s);
  };
  // candidate variables of the right kind
  std::vector<Type> vars;
  for (int i = 0; i < (int)delta.size(); i++)
    if (kindEq(delta[i], k)) vars.push_back(tyMixed(i, "m" + std::to_string(i)));
  for (int i = 0; i < (int)phi.size(); i++)
    if (kindEq(phi[i], k)) vars.push_back(tyFunctor(i, "F" + std::to_string(i)));

  if (depth <= 0) {
    if (!vars.empty() && r.coin()) {
      mark("var");
      return vars[r.range(0, (int)vars.size() - 1)];
    }
    if (k->isStar()) {
      if (r.coin()) {
        mark("unit");
        return tyUnit();
      }
      mark("empty");
      return tyEmpty();
    }
    // eta-expand a constant at higher kind
    mark("lam");
    return tyLam(k->dom, "X", genType(r, delta, [&] {
                   FunctorCtx p2 = phi;
                   p2.insert(p2.begin(), k->dom);
                   return p2;
                 }(), k->cod, 0, cov));
  }

  int pick = r.range(0, 9);
  if (pick == 0 && !vars.empty()) {
    mark("var");
    return vars[r.range(0, (int)vars.size() - 1)];
  }
  if (!k->isStar()) {
    // at arrow kind: lambda, mu, or pointwise sum/product
    switch (r.range(0, 3)) {
      case 0: {
        mark("mu");
        return tyMu(genType(r, delta, phi, kArrow(k, k), depth - 1, cov));
      }
      case 1:
      case 2: {
        mark("lam");
        FunctorCtx p2 = phi;
        p2.insert(p2.begin(), k->dom);
        return tyLam(k->dom, "X", genType(r, delta, p2, k->cod, depth - 1, cov));
      }
      default: {
        bool prod = r.coin();
        mark(prod ? "prod" : "sum");
        Type a = genType(r, delta, phi, k, depth - 1, cov);
        Type b = genType(r, delta, phi, k, depth - 1, cov);
        return prod ? tyProd(a, b) : tySum(a, b);
      }
    }
  }
  switch (r.range(0, 6)) {
    case 0: {
      mark("fun");
      // K-Fun: domain under an empty functor context
      Type d = genType(r, delta, {}, kStar(), depth - 1, cov);
      Type c = genType(r, delta, phi, kStar(), depth - 1, cov);
      return tyFun(d, c);
    }
    case 1: {
      mark("app");
      Kind ka = genKind(r, 1);
      Type f = genType(r, delta, phi, kArrow(ka, k), depth - 1, cov);
      Type a = genType(r, delta, phi, ka, depth - 1, cov);
      return tyApp(f, a);
    }
    case 2: {
      mark("mu");
      return tyMu(genType(r, delta, phi, kArrow(kStar(), kStar()), depth - 1, cov));
    }
    case 3: {
      mark("prod");
      return tyProd(genType(r, delta, phi, k, depth - 1, cov),
                    genType(r, delta, phi, k, depth - 1, cov));
    }
    case 4: {
      mark("sum");
      return tySum(genType(r, delta, phi, k, depth - 1, cov),
                   genType(r, delta, phi, k, depth - 1, cov));
    }
    case 5:
      mark("unit");
      return tyUnit();
    default:
      if (!vars.empty()) {
        mark("var");
        return vars[r.range(0, (int)vars.size() - 1)];
      }
      mark("empty");
      return tyEmpty();
  }
}

// Independent strict-positivity scanner: a functorial variable bound
// outside a function domain must never occur inside one. `lamDepth` counts
// crossed type lambdas, `barrier` is the depth at the innermost enclosing
// function domain (-1 when not inside one).
inline bool strictlyPositive(const Type& t, int lamDepth = 0, int barrier = -1) {
  switch (t->tag) {
    case TyTag::FunctorVar:
      // a violation is a reference past the domain boundary
      return !(barrier >= 0 && t->index >= lamDepth - barrier);
    case TyTag::MixedVar:
    case TyTag::Unit:
    case TyTag::Empty:
      return true;
    case TyTag::Fun:
      return strictlyPositive(t->a, lamDepth, lamDepth) &&
             strictlyPositive(t->b, lamDepth, barrier);
    case TyTag::Lam:
      return strictlyPositive(t->a, lamDepth + 1, barrier);
    case TyTag::Mu:
      return strictlyPositive(t->a, lamDepth, barrier);
    default:
      return strictlyPositive(t->a, lamDepth, barrier) &&
             (!t->b || strictlyPositive(t->b, lamDepth, barrier));
  }
}

// ---------------------------------------------------------------------------
// Corpus access
// ---------------------------------------------------------------------------

inline std::string corpusPath(const std::string& name) {
  return std::string(XDT_CORPUS_DIR) + "/" + name;
}

inline CheckedProgram loadCorpus(const std::string& name) {
  return checkProgram(readFile(corpusPath(name)));
}

inline std::vector<std::string> corpusFiles() {
  return {"nat.xdt",  "expr.xdt",    "exprmul.xdt", "list.xdt",
          "exparrow.xdt", "steps.xdt",   "id_const.xdt", "free.xdt",
          "free_pure.xdt", "reorder.xdt", "catch.xdt",   "catch_throw.xdt",
          "pred.xdt", "ask.xdt"};
}

// nat encoding helpers on terms
inline Term natTerm(long n) {
  Term t = tmApp(tmPrim(TmTag::In), tmApp(tmPrim(TmTag::Inl), tmPrim(TmTag::Tt)));
  for (long i = 0; i < n; i++)
    t = tmApp(tmPrim(TmTag::In), tmApp(tmPrim(TmTag::Inr), t));
  return t;
}

} // namespace xdt::test
