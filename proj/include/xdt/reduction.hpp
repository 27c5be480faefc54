#pragma once

#include "xdt/syntax.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace xdt {

// Value recognizer: lambdas, type abstractions, and primitives saturated
// with type arguments and (where the value grammar permits) one value
// argument.
bool isValue(const Term& t);

struct StepOut {
  Term term;
  std::string rule; // e.g. "app_beta(1)", "fold_in(5)", "map_inl(13)"
};

// One reduction step. Returns nullopt for values; throws StuckTerm when a
// closed non-value has no applicable rule. The input should be a checked
// (elaborated) term: reduction keeps the checker annotations alive, and the
// map rules over recursive indices consult them for target-type arguments.
std::optional<StepOut> step(const Term& t);

enum class EvalStatus { Value, OutOfFuel, Stuck };

struct EvalResult {
  EvalStatus status;
  Term term; // the value, or the last term reached
  long steps = 0;
  std::string message; // stuck diagnostics
};

using TraceFn = std::function<void(const std::string& rule, const Term& term)>;

EvalResult evaluate(const Term& t, long fuel, const TraceFn& trace = nullptr);

// A materialized trace; consecutive entries chain (after[i] is before[i+1]).
struct TraceEntry {
  std::string rule;
  Term before, after;
};
using StepTrace = std::vector<TraceEntry>;

EvalResult evaluateTraced(const Term& t, long fuel, StepTrace& out);

} // namespace xdt
