#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace xdt {

// ---------------------------------------------------------------------------
// Kinds: * | k -> k
// ---------------------------------------------------------------------------

struct KindNode;
using Kind = std::shared_ptr<const KindNode>;

struct KindNode {
  Kind dom, cod; // both null for *
  bool isStar() const { return !dom; }
};

Kind kStar();
Kind kArrow(Kind dom, Kind cod);
bool kindEq(const Kind& a, const Kind& b);

// Number of leading arrow domains.
int kindArity(const Kind& k);
// The leading arrow domains, outermost first.
std::vector<Kind> kindDomains(const Kind& k);
std::string showKind(const Kind& k);

// ---------------------------------------------------------------------------
// Types.
//
// Binding is nameless: variables carry de Bruijn indices plus a printing
// hint. The two variable classes live in separate index spaces — functor
// variables (X-class) are bound by type-level lambda, mixed variables
// (a-class) by scheme/term-level quantifiers, which never occur inside a
// Type. So within a Type all mixed indices point outward.
// ---------------------------------------------------------------------------

enum class TyTag {
  MixedVar,
  FunctorVar,
  App,
  Lam,
  Mu,
  Fun,
  Empty,
  Unit,
  Prod,
  Sum,
};

struct TypeNode;
using Type = std::shared_ptr<const TypeNode>;

struct TypeNode {
  TyTag tag;
  int index = -1;   // MixedVar, FunctorVar
  std::string hint; // variable / binder name for printing
  Kind binderKind;  // Lam
  Type a, b;        // App: fun/arg; Lam,Mu: body in a; Fun,Prod,Sum: a/b
};

Type tyMixed(int index, std::string hint = "a");
Type tyFunctor(int index, std::string hint = "X");
Type tyApp(Type fun, Type arg);
Type tyLam(Kind k, std::string hint, Type body);
Type tyMu(Type body);
Type tyFun(Type dom, Type cod);
Type tyEmpty();
Type tyUnit();
Type tyProd(Type l, Type r);
Type tySum(Type l, Type r);

// Structural equality on the nameless skeleton; hints are ignored, so this
// is alpha-equivalence.
bool typeEq(const Type& a, const Type& b);

// Shifts: bump indices >= cutoff by d (d may be negative; caller guarantees
// no index ends up negative).
Type shiftFunctor(const Type& t, int d, int cutoff = 0);
Type shiftMixed(const Type& t, int d, int cutoff = 0);

// Capture-avoiding substitution for the two classes; free variables of
// `by` are shifted over any binders crossed.
Type substFunctor(const Type& t, int index, const Type& by);
Type substMixed(const Type& t, int index, const Type& by);

std::set<int> freeMixed(const Type& t);
std::set<int> freeFunctor(const Type& t);
bool mixedOccurs(const Type& t, int index);
bool functorOccurs(const Type& t, int index);

// Application spine: returns head and pushes arguments (outermost last call
// order: args[0] is applied first).
Type spineHead(const Type& t, std::vector<Type>& args);
Type applySpine(Type head, const std::vector<Type>& args);

// ---------------------------------------------------------------------------
// Schemes: prenex foralls over a mono type. binders.front() is outermost;
// de Bruijn: the innermost binder is mixed index 0 in the body.
// ---------------------------------------------------------------------------

struct SchemeNode;
using Scheme = std::shared_ptr<const SchemeNode>;

struct Binder {
  std::string hint;
  Kind kind;
};

struct SchemeNode {
  std::vector<Binder> binders;
  Type body;
};

Scheme mkScheme(std::vector<Binder> binders, Type body);
Scheme monoScheme(Type t);
bool schemeEq(const Scheme& a, const Scheme& b);
Scheme shiftMixedScheme(const Scheme& s, int d, int cutoff = 0);
// Strip the outermost binder, substituting `by` for its variable.
Scheme instantiateScheme(const Scheme& s, const Type& by);
std::set<int> freeMixedScheme(const Scheme& s);

// ---------------------------------------------------------------------------
// Terms. Var indices are term-level de Bruijn (Lam and Let bind); TyLam
// binds a mixed type variable scoping over embedded types.
//
// ann* fields are checker output: they carry the typing metadata that makes
// every node re-checkable without synthesis (App: argument type; TyApp:
// scheme of the function part; Map: source/target of the mapped morphism;
// Fold: carrier; Fork/Join: component arrow schemes). They are ignored by
// termEq and by printing.
// ---------------------------------------------------------------------------

enum class TmTag {
  Var,
  App,
  Lam,
  Let,
  TyLam,
  TyApp,
  In,
  Unin,
  Map,
  Fold,
  Fst,
  Snd,
  Fork,
  Inl,
  Inr,
  Join,
  Tt,
  Absurd,
  Ascribe,
};

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  TmTag tag;
  int index = -1;   // Var
  std::string hint; // Var / binder name
  Kind binderKind;  // TyLam
  Term a, b;        // children
  Type type;        // TyApp argument; Map/Fold index
  Scheme scheme;    // Let / Ascribe annotation
  int pos = -1;     // byte offset for diagnostics

  // checker annotations (see above)
  Scheme annA, annB;
  Type annSrc, annDst;
  Kind annKind;
};

Term tmVar(int index, std::string hint = "x");
Term tmApp(Term f, Term a);
Term tmLam(std::string hint, Term body);
Term tmLet(std::string hint, Scheme s, Term bound, Term body);
Term tmTyLam(std::string hint, Kind k, Term body);
Term tmTyApp(Term f, Type t);
Term tmPrim(TmTag tag); // In, Unin, Fst, Snd, Inl, Inr, Tt, Absurd
Term tmMap(Type index, Term m);
Term tmFold(Type index, Term m);
Term tmFork(Term l, Term r);
Term tmJoin(Term l, Term r);
Term tmAscribe(Term m, Scheme s);

Term withPos(Term t, int pos);
Term withAnnA(Term t, Scheme s);
Term withAnnB(Term t, Scheme s);
Term withMapAnn(Term t, Type src, Type dst, Kind k);

bool isPrimTag(TmTag t);

// Alpha-equivalence on the term skeleton (annotations, hints, positions
// ignored; Let/Ascribe schemes and Map/Fold/TyApp types compared).
bool termEq(const Term& a, const Term& b);

Term shiftTerm(const Term& t, int d, int cutoff = 0);
// Shift mixed type indices inside all embedded types of a term.
Term shiftMixedInTerm(const Term& t, int d, int cutoff = 0);
Term substTermInTerm(const Term& t, int index, const Term& by);
Term substMixedInTerm(const Term& t, int index, const Type& by);

std::set<int> freeTermVars(const Term& t);
std::set<int> freeMixedInTerm(const Term& t);

} // namespace xdt
