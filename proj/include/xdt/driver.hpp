#pragma once

#include "xdt/oracle.hpp"
#include "xdt/reduction.hpp"
#include "xdt/surface.hpp"
#include "xdt/syntax.hpp"

#include <string>
#include <vector>

namespace xdt {

// A fully checked program: every declaration kind- and type-checked, let
// bodies elaborated.
struct CheckedProgram {
  SourceFile source;
  std::vector<std::string> letNames;
  std::vector<Scheme> letSchemes;
  std::vector<Term> letElaborated;
  int mainIndex = -1;
};

CheckedProgram checkProgram(const std::string& text);

// Chains the let declarations in front of main, yielding a closed elaborated
// term. Fails when the program has no main.
Term linkMain(const CheckedProgram& p);
Scheme mainScheme(const CheckedProgram& p);

// As linkMain, but for an arbitrary let declaration by name.
Term linkDecl(const CheckedProgram& p, const std::string& name);

struct OracleReport {
  Obs machine; // small-step observation
  Obs oracle;  // definitional-interpreter observation
  bool agree;
};

// Evaluates main on both semantics and observes the results at main's
// (observable) type.
OracleReport runOracle(const CheckedProgram& p, long fuel);

std::string kindOfType(const CheckedProgram& p, const std::string& typeName);
std::string normOfType(const CheckedProgram& p, const std::string& typeName);

std::string readFile(const std::string& path);

} // namespace xdt
