#pragma once

#include "xdt/syntax.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace xdt {

// ---------------------------------------------------------------------------
// Observation trees: canonical finite encodings of first-order values, used
// to compare the two evaluators.
// ---------------------------------------------------------------------------

struct ObsNode;
using Obs = std::shared_ptr<const ObsNode>;

struct ObsNode {
  enum class Tag { Unit, Pair, TagL, TagR, Wrap };
  Tag tag;
  Obs a, b;
};

Obs obsUnit();
Obs obsPair(Obs l, Obs r);
Obs obsL(Obs v);
Obs obsR(Obs v);
Obs obsWrap(Obs v);
bool obsEq(const Obs& a, const Obs& b);
std::string showObs(const Obs& o);
Obs parseObs(const std::string& text);

// A type is observable when its normal form is built from 1, 0, products,
// sums and mu only (no functions, no quantifiers, no free variables).
bool observableType(const Type& normalTy);

// Decodes an observation of the naturals encoding mu(\X. 1 + X); -1 if the
// tree has a different shape.
long obsToNat(const Obs& o);
Obs natToObs(long n);

// ---------------------------------------------------------------------------
// Semantic values of the definitional interpreter.
// ---------------------------------------------------------------------------

struct SemValue;
using Sem = std::shared_ptr<const SemValue>;

struct SemEnv;
using SemEnvPtr = std::shared_ptr<const SemEnv>;

struct SemEnv {
  std::vector<Sem> terms;  // de Bruijn, index 0 innermost
  std::vector<Type> types; // closed types for TyLam-bound variables
};

enum class SemTag {
  Closure, // term lambda
  Poly,    // type abstraction, instantiated by need
  Unit,
  Pair,
  TagL,
  TagR,
  Wrap,
  Prim,   // partially applied primitive
  Native, // host-level function (functorial action over function types)
};

struct SemValue {
  SemTag tag;
  SemEnvPtr env; // Closure, Poly
  Term body;     // Closure: lambda body; Poly: the TyLam node
  Sem a, b;      // Pair, TagL/TagR/Wrap
  // Prim
  TmTag prim = TmTag::Tt;
  Type index;               // map/fold index, closed
  Type src, dst;            // map: morphism source/target functors, closed
  Sem comp1, comp2;         // fork/join components; map/fold morphism
  std::vector<Type> tyArgs; // collected type applications, closed
  std::function<Sem(Sem)> fn; // Native
};

// Big-step interpretation of a closed, checked term. Independent of the
// small-step machine; fuel counts interpreter calls.
Sem denote(const Term& t, long fuel = 10'000'000);

Obs observeSem(const Sem& v, const Type& normalTy);

// The small-step side of the comparison harness: observes a syntactic value
// by decomposing it, running projections where needed.
Obs observeTermValue(const Term& v, const Type& normalTy, long fuel = 1'000'000);

} // namespace xdt
