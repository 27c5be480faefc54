#pragma once

#include "xdt/syntax.hpp"

namespace xdt {

// Rewrites a type to normal form: no beta redexes, no applied products /
// sums / units / empties, no eta redexes, closed under all constructors
// including binders. Terminating for simply-kinded input; the fuel bound is
// a safety net and tripping it is an internal error.
Type normalizeType(const Type& t);

// Normal-form alpha comparison of mono types.
bool typesEquivalentMono(const Type& a, const Type& b);

// Scheme equivalence: binder-by-binder (kinds equal), bodies compared in
// normal form.
bool typesEquivalent(const Scheme& a, const Scheme& b);

} // namespace xdt
