#pragma once

#include "xdt/syntax.hpp"

#include <string>
#include <variant>
#include <vector>

namespace xdt {

struct TypeDecl {
  std::string name;
  Type body; // closed; abbreviations already expanded
  int pos = -1;
};

struct LetDecl {
  std::string name;
  Scheme scheme;
  Term term; // references to earlier let decls are Var indices past the locals
  int pos = -1;
};

using Decl = std::variant<TypeDecl, LetDecl>;

// A parsed .xdt file. The main term, when present, is the let declaration
// named "main".
struct SourceFile {
  std::vector<Decl> decls;
  std::vector<const LetDecl*> lets() const;
  const LetDecl* findLet(const std::string& name) const;
  const TypeDecl* findType(const std::string& name) const;
};

SourceFile parse(const std::string& text);

// Standalone entry points for closed fragments (used by tests and tools).
Type parseTypeText(const std::string& text);
Scheme parseSchemeText(const std::string& text);
Term parseTermText(const std::string& text);

std::string printType(const Type& t);
std::string printScheme(const Scheme& s);
std::string printTerm(const Term& t);

void offsetToLineCol(const std::string& text, int pos, int& line, int& col);

} // namespace xdt
