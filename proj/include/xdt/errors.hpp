#pragma once

#include <stdexcept>
#include <string>

namespace xdt {

// Stable diagnostic codes, shared by the C API and the CLI's --json output.
enum class ErrorCode {
  None = 0,
  LexError,
  ParseError,
  UnboundName,
  UnboundTypeVar,
  KindMismatch,
  FunctorVarInDomain,
  MuBodyNotEndo,
  SchemeBodyNotStar,
  TypeMismatch,
  CannotSynthesize,
  EscapingTypeVar,
  NotAForall,
  ArrowShapeMismatch,
  StuckTerm,
  OutOfFuel,
  NotObservable,
  IllShapedValue,
  Usage,
  Internal,
};

const char* errorCodeName(ErrorCode c);

struct XdtError : std::runtime_error {
  ErrorCode code;
  int pos; // byte offset into the source, or -1

  XdtError(ErrorCode c, const std::string& msg, int at = -1)
      : std::runtime_error(msg), code(c), pos(at) {}
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& msg, int at = -1) {
  throw XdtError(c, msg, at);
}

} // namespace xdt
