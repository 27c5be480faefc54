#pragma once

#include "xdt/kinding.hpp"
#include "xdt/syntax.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace xdt {

// A kind-indexed morphism type: dom ->k cod, with dom and cod functors of
// kind `kind` under an empty functor context.
struct ArrowSpec {
  Type dom;
  Kind kind;
  Type cod;
};

// Unfolds an arrow: at * a plain function type, at k1 -> k2 a forall-closed
// pointwise arrow.
Scheme expandArrow(const ArrowSpec& spec);

// Inverse of expandArrow at the maximal kind: strips all leading foralls and
// re-abstracts both sides of the final function type. Returns nullopt when a
// quantified variable occurs in a function domain (no functorial
// presentation exists) or the body is not a function type.
std::optional<ArrowSpec> matchArrow(const Scheme& s);

using TermCtx = std::vector<Scheme>; // de Bruijn; index 0 innermost

// Checks m against expected and returns the elaborated term: ascriptions
// stripped, implicit type abstractions made explicit, and checker
// annotations filled in so the result can be re-checked without synthesis
// (the derivation artifact used by the metatheory tests).
Term checkTerm(const TermCtx& gamma, const KindCtx& delta, const Term& m, const Scheme& expected);

std::pair<Term, Scheme> inferTerm(const TermCtx& gamma, const KindCtx& delta, const Term& m);

} // namespace xdt
