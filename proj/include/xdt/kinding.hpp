#pragma once

#include "xdt/syntax.hpp"

#include <vector>

namespace xdt {

// Contexts are de Bruijn indexed: element 0 is the innermost binder.
using KindCtx = std::vector<Kind>;    // Delta: mixed-variance variables
using FunctorCtx = std::vector<Kind>; // Phi: functorial variables

// Synthesizes the kind of t. Unit/Empty default to * in synthesis position;
// products and sums take the join of their components (a flexible constant
// side adapts to the other).
Kind inferKind(const KindCtx& delta, const FunctorCtx& phi, const Type& t);

// Checks t against an expected kind; Unit/Empty check at any kind.
void checkKind(const KindCtx& delta, const FunctorCtx& phi, const Type& t, const Kind& expected);

// Scheme well-formedness: each forall pushes its binder into Delta; the body
// must have kind * under an empty functor context.
void checkScheme(const KindCtx& delta, const Scheme& s);

} // namespace xdt
