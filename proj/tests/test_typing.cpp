#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"

using namespace xdt;
using namespace xdt::test;

namespace {
const std::string natPrelude =
    "type NatF = \\X:*. 1 + X;\n"
    "type Nat  = mu(NatF);\n"
    "let zero : Nat = in (inl tt);\n"
    "let succ : Nat => Nat = \\n. in (inr n);\n"
    "let add  : Nat => Nat => Nat = \\m. \\n. fold[NatF](join(\\u. n, \\r. in (inr r))) m;\n";

Type natTy() { return parseTypeText("mu(\\X:*. 1 + X)"); }
} // namespace

TEST_CASE("expandArrow at base and higher kinds") {
  // at * an arrow is a plain function type
  Scheme s0 = expandArrow({tyUnit(), kStar(), tyUnit()});
  CHECK(typesEquivalent(s0, parseSchemeText("1 => 1")));

  // at * -> * it closes over one argument: forall a. Tree a => List a
  KindCtx delta{kArrow(kStar(), kStar()), kArrow(kStar(), kStar())};
  Type tree = tyMixed(0, "Tree"), list = tyMixed(1, "List");
  Scheme s1 = expandArrow({tree, kArrow(kStar(), kStar()), list});
  CHECK(s1->binders.size() == 1);
  CHECK(typeEq(normalizeType(s1->body),
               tyFun(tyApp(shiftMixed(tree, 1), tyMixed(0, "a")),
                     tyApp(shiftMixed(list, 1), tyMixed(0, "a")))));

  // at a higher-order kind the binder is a functor variable
  KindCtx d2{kArrow(kArrow(kStar(), kStar()), kStar()),
             kArrow(kArrow(kStar(), kStar()), kStar())};
  Scheme s2 = expandArrow({tyMixed(0, "F"), kArrow(kArrow(kStar(), kStar()), kStar()),
                           tyMixed(1, "G")});
  CHECK(s2->binders.size() == 1);
  CHECK(kindEq(s2->binders[0].kind, kArrow(kStar(), kStar())));
}

TEST_CASE("matchArrow inverts expandArrow") {
  KindCtx delta{kArrow(kStar(), kStar()), kArrow(kStar(), kStar())};
  Scheme s = parseSchemeText("forall a:*. 1 => 1");
  // simple mono arrow
  auto m0 = matchArrow(parseSchemeText("1 => 1"));
  REQUIRE(m0.has_value());
  CHECK(kindArity(m0->kind) == 0);
  CHECK(typeEq(normalizeType(m0->dom), tyUnit()));

  // round trip through a natural-transformation type
  Scheme nt = mkScheme({{"a", kStar()}},
                       tyFun(tyApp(tyMixed(1, "Tree"), tyMixed(0, "a")),
                             tyApp(tyMixed(2, "List"), tyMixed(0, "a"))));
  auto m1 = matchArrow(nt);
  REQUIRE(m1.has_value());
  CHECK(kindArity(m1->kind) == 1);
  CHECK(typeEq(m1->dom, tyMixed(0, "Tree")));
  CHECK(typeEq(m1->cod, tyMixed(1, "List")));
  CHECK(typesEquivalent(expandArrow(*m1), nt));

  // identity needs eta-abstraction: forall a. a => a ~ (\X. X, * -> *, \X. X)
  auto m2 = matchArrow(parseSchemeText("forall a:*. a => a"));
  REQUIRE(m2.has_value());
  CHECK(typeEq(m2->dom, parseTypeText("\\X:*. X")));
  CHECK(typeEq(m2->cod, parseTypeText("\\X:*. X")));
  CHECK(typesEquivalent(expandArrow(*m2), parseSchemeText("forall a:*. a => a")));

  // a quantified variable in a function domain has no functorial split
  CHECK(!matchArrow(parseSchemeText("forall a:*. (a => a) => a")).has_value());
  // non-arrow bodies do not decompose
  CHECK(!matchArrow(parseSchemeText("forall a:*. a")).has_value());
}

TEST_CASE("checkTerm accepts the eval fold against its arrow type") {
  CheckedProgram p = checkProgram(
      natPrelude +
      "type Expr = \\X:*. Nat + (X * X);\n"
      "let expr : Expr Nat => Nat = join(\\x. x, \\x. add (fst x) (snd x));\n"
      "let eval : mu(Expr) => Nat = fold[Expr](expr);\n");
  CHECK(p.letNames.back() == "eval");
}

TEST_CASE("primitives synthesize only through ascription") {
  auto r = inferTerm({}, {}, parseTermText("(inl : forall a:*. forall b:*. a => a + b)"));
  CHECK(typesEquivalent(r.second, parseSchemeText("forall a:*. forall b:*. a => a + b")));

  CHECK_THROWS_AS(inferTerm({}, {}, tmPrim(TmTag::Inl)), XdtError);
  try {
    inferTerm({}, {}, tmPrim(TmTag::Inl));
  } catch (const XdtError& e) {
    CHECK(e.code == ErrorCode::CannotSynthesize);
  }
}

TEST_CASE("reorder checks against its declared type without explicit binders") {
  // map over Free with the swapped injections, checked directly against the
  // triply quantified scheme
  CheckedProgram p = checkProgram(
      "type FreeF = \\f:*->*. \\a:*. \\X:*. a + f X;\n"
      "type Free  = \\f:*->*. \\a:*. mu(FreeF f a);\n"
      "let reorder : forall f:*->*. forall g:*->*. forall a:*. "
      "Free (f + g) a => Free (g + f) a = map[Free](join(inr, inl));\n");
  // the elaborated term is Church-complete: implicit quantifiers became
  // explicit type abstractions
  CHECK(p.letElaborated[0]->tag == TmTag::TyLam);
  CHECK(p.letElaborated[0]->a->tag == TmTag::TyLam);
}

TEST_CASE("type abstraction binder kinds must match the scheme") {
  CHECK_THROWS_AS(
      checkTerm({}, {}, parseTermText("/\\a:*->*. \\x. x"),
                parseSchemeText("forall a:*. a => a")),
      XdtError);
}

TEST_CASE("type application requires a quantifier") {
  TermCtx gamma{parseSchemeText("1 => 1")};
  try {
    inferTerm(gamma, {}, tmTyApp(tmVar(0, "f"), tyUnit()));
    FAIL("expected NotAForall");
  } catch (const XdtError& e) {
    CHECK(e.code == ErrorCode::NotAForall);
  }
}

TEST_CASE("arrow-shape mismatches are reported") {
  try {
    checkTerm({}, {}, tmPrim(TmTag::In), parseSchemeText("1 => 1"));
    FAIL("expected ArrowShapeMismatch");
  } catch (const XdtError& e) {
    CHECK(e.code == ErrorCode::ArrowShapeMismatch);
  }
}

TEST_CASE("plain type mismatches are reported") {
  try {
    checkTerm({}, {}, parseTermText("tt"), parseSchemeText("1 => 1"));
    FAIL("expected TypeMismatch");
  } catch (const XdtError& e) {
    CHECK(e.code == ErrorCode::TypeMismatch);
  }
}

TEST_CASE("checking is stable under type conversion") {
  // wrap a scheme body in a beta redex; acceptance must not change
  CheckedProgram p = loadCorpus("nat.xdt");
  TermCtx gamma;
  for (size_t i = 0; i < p.letSchemes.size(); i++) {
    const LetDecl* ld = p.source.findLet(p.letNames[i]);
    REQUIRE(ld);
    Scheme s = p.letSchemes[i];
    Type wrapped = tyApp(tyLam(kStar(), "Z", shiftFunctor(s->body, 1)), tyUnit());
    Scheme s2 = mkScheme(s->binders, wrapped);
    REQUIRE(typesEquivalent(s, s2));
    CHECK_NOTHROW(checkTerm(gamma, {}, ld->term, s2));
    gamma.insert(gamma.begin(), s);
  }
}

TEST_CASE("substitution lemma at desk scale") {
  // if v : Nat and x : Nat |- M : Nat then M[v/x] : Nat
  std::vector<std::string> bodies = {
      "x", "in (inr x)", "add x 2", "add (add x x) 1",
      "fold[NatF](join(\\u. x, \\r. in (inr r))) x"};
  CheckedProgram p = checkProgram(natPrelude);
  TermCtx gamma;
  for (auto it = p.letSchemes.begin(); it != p.letSchemes.end(); ++it)
    gamma.insert(gamma.begin(), *it);
  Scheme natS = monoScheme(natTy());
  for (const std::string& b : bodies) {
    // check \x. body against Nat => Nat in the prelude context
    SourceFile sf = parse(natPrelude + "let f : Nat => Nat = \\x. " + b + ";\n");
    const LetDecl* ld = sf.findLet("f");
    Term lam = checkTerm(gamma, {}, ld->term, parseSchemeText(
        "mu(\\X:*. 1 + X) => mu(\\X:*. 1 + X)"));
    for (long n : {0L, 1L, 5L}) {
      Term v = checkTerm({}, {}, natTerm(n), natS);
      Term substituted = substTermInTerm(lam->a, 0, shiftTerm(v, 1));
      // the substituted body lives under no lambda anymore
      Term closed = substTermInTerm(lam->a, 0, v);
      CHECK_NOTHROW(checkTerm(gamma, {}, closed, natS));
      (void)substituted;
    }
  }
}

TEST_CASE("elaboration is idempotent (the derivation artifact re-checks)") {
  for (const std::string& name : corpusFiles()) {
    CAPTURE(name);
    CheckedProgram p = loadCorpus(name);
    TermCtx gamma;
    for (size_t i = 0; i < p.letElaborated.size(); i++) {
      Term again = checkTerm(gamma, {}, p.letElaborated[i], p.letSchemes[i]);
      CHECK(termEq(again, p.letElaborated[i]));
      gamma.insert(gamma.begin(), p.letSchemes[i]);
    }
  }
}
