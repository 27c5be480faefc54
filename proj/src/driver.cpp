#include "xdt/driver.hpp"

#include "xdt/errors.hpp"
#include "xdt/kinding.hpp"
#include "xdt/normalize.hpp"
#include "xdt/typing.hpp"

#include <fstream>
#include <sstream>

namespace xdt {

CheckedProgram checkProgram(const std::string& text) {
  CheckedProgram p;
  p.source = parse(text);
  TermCtx gamma;
  for (const Decl& d : p.source.decls) {
    if (auto* td = std::get_if<TypeDecl>(&d)) {
      inferKind({}, {}, td->body); // validates the declaration
      continue;
    }
    const LetDecl& ld = std::get<LetDecl>(d);
    try {
      checkScheme({}, ld.scheme);
      Term elab = checkTerm(gamma, {}, ld.term, ld.scheme);
      p.letNames.push_back(ld.name);
      p.letSchemes.push_back(ld.scheme);
      p.letElaborated.push_back(elab);
      gamma.insert(gamma.begin(), ld.scheme);
      if (ld.name == "main") p.mainIndex = (int)p.letNames.size() - 1;
    } catch (XdtError& e) {
      if (e.pos < 0) e.pos = ld.pos;
      throw XdtError(e.code, "in declaration '" + ld.name + "': " + e.what(), e.pos);
    }
  }
  return p;
}

static Term linkUpTo(const CheckedProgram& p, int index) {
  // let d0 = e0 in let d1 = e1 in ... e_index
  Term t = p.letElaborated[index];
  for (int i = index - 1; i >= 0; i--)
    t = tmLet(p.letNames[i], p.letSchemes[i], p.letElaborated[i], t);
  return t;
}

Term linkMain(const CheckedProgram& p) {
  if (p.mainIndex < 0) fail(ErrorCode::Usage, "program has no main declaration");
  return linkUpTo(p, p.mainIndex);
}

Scheme mainScheme(const CheckedProgram& p) {
  if (p.mainIndex < 0) fail(ErrorCode::Usage, "program has no main declaration");
  return p.letSchemes[p.mainIndex];
}

Term linkDecl(const CheckedProgram& p, const std::string& name) {
  for (int i = 0; i < (int)p.letNames.size(); i++)
    if (p.letNames[i] == name) return linkUpTo(p, i);
  fail(ErrorCode::Usage, "no let declaration named '" + name + "'");
}

OracleReport runOracle(const CheckedProgram& p, long fuel) {
  Term m = linkMain(p);
  Scheme s = mainScheme(p);
  if (!s->binders.empty())
    fail(ErrorCode::NotObservable, "main must have a monomorphic observable type");
  Type ty = normalizeType(s->body);
  if (!observableType(ty))
    fail(ErrorCode::NotObservable, "main's type is not observable: " + printType(ty));

  EvalResult r = evaluate(m, fuel);
  if (r.status == EvalStatus::OutOfFuel)
    fail(ErrorCode::OutOfFuel, "evaluation ran out of fuel");
  if (r.status == EvalStatus::Stuck) fail(ErrorCode::StuckTerm, r.message);
  Obs machine = observeTermValue(r.term, ty, fuel);

  Sem sem = denote(m, fuel * 16);
  Obs oracle = observeSem(sem, ty);

  return {machine, oracle, obsEq(machine, oracle)};
}

std::string kindOfType(const CheckedProgram& p, const std::string& typeName) {
  const TypeDecl* td = p.source.findType(typeName);
  if (!td) fail(ErrorCode::Usage, "no type declaration named '" + typeName + "'");
  return showKind(inferKind({}, {}, td->body));
}

std::string normOfType(const CheckedProgram& p, const std::string& typeName) {
  const TypeDecl* td = p.source.findType(typeName);
  if (!td) fail(ErrorCode::Usage, "no type declaration named '" + typeName + "'");
  return printType(normalizeType(td->body));
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Usage, "cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace xdt
