#include "xdt/xdt.h"

#include "xdt/driver.hpp"
#include "xdt/errors.hpp"
#include "xdt/normalize.hpp"
#include "xdt/surface.hpp"

#include <cstring>
#include <string>

using namespace xdt;

struct xdt_program {
  CheckedProgram prog;
  std::string text;
};

namespace {

thread_local xdt_status g_status = XDT_OK;
thread_local std::string g_code = "ok";
thread_local std::string g_message;
thread_local int g_line = 0, g_col = 0;

xdt_status statusOf(ErrorCode c) {
  switch (c) {
    case ErrorCode::LexError:
    case ErrorCode::ParseError:
    case ErrorCode::UnboundName:
      return XDT_ERR_PARSE;
    case ErrorCode::OutOfFuel:
      return XDT_ERR_FUEL;
    case ErrorCode::StuckTerm:
      return XDT_ERR_STUCK;
    case ErrorCode::Usage:
      return XDT_ERR_USAGE;
    case ErrorCode::Internal:
      return XDT_ERR_INTERNAL;
    default:
      return XDT_ERR_CHECK;
  }
}

void setError(const XdtError& e, const std::string* text) {
  g_status = statusOf(e.code);
  g_code = errorCodeName(e.code);
  g_message = e.what();
  g_line = g_col = 0;
  if (text && e.pos >= 0) offsetToLineCol(*text, e.pos, g_line, g_col);
}

void clearError() {
  g_status = XDT_OK;
  g_code = "ok";
  g_message.clear();
  g_line = g_col = 0;
}

char* dupString(const std::string& s) {
  char* out = (char*)malloc(s.size() + 1);
  memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
auto guarded(const std::string* text, F f) -> decltype(f()) {
  clearError();
  try {
    return f();
  } catch (const XdtError& e) {
    setError(e, text);
    return decltype(f())();
  } catch (const std::exception& e) {
    g_status = XDT_ERR_INTERNAL;
    g_code = "internal";
    g_message = e.what();
    return decltype(f())();
  }
}

} // namespace

extern "C" {

xdt_program* xdt_program_load(const char* source_text) {
  std::string text = source_text ? source_text : "";
  return guarded(&text, [&]() -> xdt_program* {
    auto* p = new xdt_program{checkProgram(text), text};
    return p;
  });
}

void xdt_program_free(xdt_program* p) { delete p; }

xdt_status xdt_last_status(void) { return g_status; }
const char* xdt_last_error_code(void) { return g_code.c_str(); }
const char* xdt_last_error_message(void) { return g_message.c_str(); }
int xdt_last_error_line(void) { return g_line; }
int xdt_last_error_col(void) { return g_col; }

int xdt_decl_count(const xdt_program* p) { return (int)p->prog.letNames.size(); }

const char* xdt_decl_name(const xdt_program* p, int i) {
  if (i < 0 || i >= (int)p->prog.letNames.size()) return nullptr;
  return p->prog.letNames[i].c_str();
}

char* xdt_decl_scheme(const xdt_program* p, int i) {
  if (i < 0 || i >= (int)p->prog.letSchemes.size()) return nullptr;
  return dupString(printScheme(p->prog.letSchemes[i]));
}

char* xdt_kind_of(const xdt_program* p, const char* type_name) {
  return guarded(&p->text, [&]() -> char* {
    return dupString(kindOfType(p->prog, type_name ? type_name : ""));
  });
}

char* xdt_norm_of(const xdt_program* p, const char* type_name) {
  return guarded(&p->text, [&]() -> char* {
    return dupString(normOfType(p->prog, type_name ? type_name : ""));
  });
}

xdt_eval_result* xdt_eval(const xdt_program* p, long fuel, xdt_trace_fn trace, void* user) {
  return guarded(&p->text, [&]() -> xdt_eval_result* {
    Term m = linkMain(p->prog);
    TraceFn tf;
    if (trace)
      tf = [&](const std::string& rule, const Term& t) {
        trace(rule.c_str(), printTerm(t).c_str(), user);
      };
    EvalResult r = evaluate(m, fuel, tf);
    auto* out = new xdt_eval_result{};
    out->steps = r.steps;
    out->value = dupString(printTerm(r.term));
    out->observation = nullptr;
    switch (r.status) {
      case EvalStatus::Value: {
        out->status = XDT_OK;
        Scheme s = mainScheme(p->prog);
        if (s->binders.empty()) {
          Type ty = normalizeType(s->body);
          if (observableType(ty))
            out->observation = dupString(showObs(observeTermValue(r.term, ty, fuel)));
        }
        break;
      }
      case EvalStatus::OutOfFuel:
        out->status = XDT_ERR_FUEL;
        break;
      case EvalStatus::Stuck:
        out->status = XDT_ERR_STUCK;
        g_status = XDT_ERR_STUCK;
        g_code = errorCodeName(ErrorCode::StuckTerm);
        g_message = r.message;
        break;
    }
    return out;
  });
}

void xdt_eval_result_free(xdt_eval_result* r) {
  if (!r) return;
  free(r->value);
  free(r->observation);
  delete r;
}

xdt_oracle_result* xdt_oracle(const xdt_program* p, long fuel) {
  return guarded(&p->text, [&]() -> xdt_oracle_result* {
    OracleReport rep = runOracle(p->prog, fuel);
    auto* out = new xdt_oracle_result{};
    out->agree = rep.agree ? 1 : 0;
    out->machine_observation = dupString(showObs(rep.machine));
    out->oracle_observation = dupString(showObs(rep.oracle));
    return out;
  });
}

void xdt_oracle_result_free(xdt_oracle_result* r) {
  if (!r) return;
  free(r->machine_observation);
  free(r->oracle_observation);
  delete r;
}

void xdt_string_free(char* s) { free(s); }

} // extern "C"
