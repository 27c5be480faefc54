// Acceptance suite: one pass/fail line per criterion, exit 0 when all hold.
#include "testutil.hpp"

#include <cstdio>
#include <functional>
#include <iostream>

using namespace xdt;
using namespace xdt::test;

namespace {

int failures = 0;

void report(int n, const std::string& what, bool ok, const std::string& detail) {
  std::printf("%s  criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", n, what.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) failures++;
}

// ---- 1. corpus soundness --------------------------------------------------

void criterion1() {
  bool ok = true;
  std::string detail;
  try {
    for (const std::string& name : corpusFiles()) loadCorpus(name);
    CheckedProgram expr = loadCorpus("expr.xdt");
    CheckedProgram free = loadCorpus("free.xdt");
    CheckedProgram prog = loadCorpus("catch.xdt");
    ok = kindOfType(expr, "Expr") == "* -> *" &&
         kindOfType(free, "Free") == "(* -> *) -> * -> *" &&
         kindOfType(prog, "Prog") == "((* -> *) -> * -> *) -> * -> *" &&
         kindOfType(prog, "Catch") == "(* -> *) -> * -> *";
    detail = std::to_string(corpusFiles().size()) + " files check; declared kinds exact";
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(1, "corpus soundness", ok, detail);
}

// ---- 2. expression problem ------------------------------------------------

void criterion2() {
  bool ok = true;
  std::string detail;
  try {
    CheckedProgram expr = loadCorpus("expr.xdt");
    OracleReport r1 = runOracle(expr, 1'000'000);
    ok = ok && r1.agree && obsToNat(r1.oracle) == 3 && obsEq(r1.machine, r1.oracle);
    CheckedProgram mul = loadCorpus("exprmul.xdt");
    OracleReport r2 = runOracle(mul, 1'000'000);
    ok = ok && r2.agree && obsToNat(r2.oracle) == 9 && obsEq(r2.machine, r2.oracle);
    detail = "eval [[1+2]] = 3, evalMul [[(1+2)*3]] = 9, oracle and machine bit-exact";
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(2, "expression-problem reproduction", ok, detail);
}

// ---- 3. effects -----------------------------------------------------------

void criterion3() {
  bool ok = true;
  std::string detail;
  try {
    // hAbort shapes
    CheckedProgram aborting = loadCorpus("free.xdt");
    OracleReport ra = runOracle(aborting, 1'000'000);
    // Nothing: mu(inl(inl(unit)))
    ok = ok && ra.agree && ra.machine->a->a->tag == ObsNode::Tag::TagL;
    CheckedProgram pure = loadCorpus("free_pure.xdt");
    OracleReport rp = runOracle(pure, 1'000'000);
    ok = ok && rp.agree && rp.machine->a->a->tag == ObsNode::Tag::TagR;

    // reorder involution on generated trees
    const std::string prelude = readFile(corpusPath("nat.xdt")) +
        "type FreeF = \\f:*->*. \\a:*. \\X:*. a + f X;\n"
        "type Free  = \\f:*->*. \\a:*. mu(FreeF f a);\n"
        "type Tick  = \\X:*. X;\n"
        "type Abort = \\X:*. 1;\n"
        "let reorder : forall f:*->*. forall g:*->*. forall a:*. "
        "Free (f + g) a => Free (g + f) a = map[Free](join(inr, inl));\n";
    Rng r(101);
    int cases = 0;
    Type ty = normalizeType(parseTypeText(
        "(\\f:*->*. \\a:*. mu(\\X:*. a + f X)) ((\\X:*. X) + (\\X:*. 1)) mu(\\X:*. 1 + X)"));
    while (cases < 100) {
      std::function<std::string(int)> gen = [&](int depth) -> std::string {
        if (depth <= 0 || r.range(0, 3) == 0)
          return r.coin() ? "in (inl " + std::to_string(r.range(0, 5)) + ")"
                          : "in (inr (inr tt))";
        return "in (inr (inl (" + gen(depth - 1) + ")))";
      };
      std::string v = gen(r.range(1, 4));
      CheckedProgram p1 = checkProgram(
          prelude + "let probe : Free (Tick + Abort) Nat = " + v + ";\n");
      CheckedProgram p2 = checkProgram(
          prelude + "let probe : Free (Tick + Abort) Nat = "
                    "reorder @[Abort] @[Tick] @[Nat] (reorder @[Tick] @[Abort] @[Nat] (" +
          v + "));\n");
      EvalResult e1 = evaluate(linkDecl(p1, "probe"), 1'000'000);
      EvalResult e2 = evaluate(linkDecl(p2, "probe"), 1'000'000);
      if (e1.status != EvalStatus::Value || e2.status != EvalStatus::Value) {
        ok = false;
        break;
      }
      if (!obsEq(observeTermValue(e1.term, ty, 1'000'000),
                 observeTermValue(e2.term, ty, 1'000'000))) {
        ok = false;
        break;
      }
      cases++;
    }
    ok = ok && cases >= 100;
    detail = "hAbort Just/Nothing shapes; reorder involution on " +
             std::to_string(cases) + " generated trees";
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(3, "effects reproduction", ok, detail);
}

// ---- 4. higher-order elaboration -------------------------------------------

struct SimV {
  bool nothing = false;
  long v = 0;
  std::shared_ptr<SimV> inner;
};

struct CatchProg {
  int kind; // 0 pure, 1 throw, 2 catch
  long v = 0;
  std::shared_ptr<CatchProg> payload, m1, m2;
};
using PP = std::shared_ptr<CatchProg>;

PP genCatch(Rng& r, int level, int depth) {
  auto p = std::make_shared<CatchProg>();
  int pick = depth <= 0 ? r.range(0, 1) : r.range(0, 3);
  if (pick >= 2) {
    p->kind = 2;
    p->m1 = genCatch(r, level + 1, depth - 1);
    p->m2 = genCatch(r, level + 1, depth - 1);
  } else if (pick == 1) {
    p->kind = 1;
  } else {
    p->kind = 0;
    if (level == 0) p->v = r.range(0, 9);
    else p->payload = genCatch(r, level - 1, depth - 1);
  }
  return p;
}

SimV simulate(const PP& p, int level) {
  if (p->kind == 1) return SimV{true};
  if (p->kind == 0) {
    SimV out;
    if (level == 0) out.v = p->v;
    else out.inner = std::make_shared<SimV>(simulate(p->payload, level - 1));
    return out;
  }
  SimV r1 = simulate(p->m1, level + 1);
  if (!r1.nothing) return *r1.inner;
  SimV r2 = simulate(p->m2, level + 1);
  if (!r2.nothing) return *r2.inner;
  return SimV{true};
}

std::string progTypeText(int level) {
  std::string t = "Nat";
  for (int i = 0; i < level; i++) t = "Prog Catch (" + t + ")";
  return t;
}

std::string progText(const PP& p, int level) {
  std::string a = progTypeText(level);
  switch (p->kind) {
    case 0:
      if (level == 0) return "pureP @[" + a + "] " + std::to_string(p->v);
      return "pureP @[" + a + "] (" + progText(p->payload, level - 1) + ")";
    case 1:
      return "throwP @[" + a + "]";
    default:
      return "catchP @[" + a + "] (" + progText(p->m1, level + 1) + ") (" +
             progText(p->m2, level + 1) + ")";
  }
}

void criterion4() {
  bool ok = true;
  std::string detail;
  try {
    const std::string prelude = readFile(corpusPath("catch.xdt"));
    Rng r(55);
    int cases = 0, just = 0, nothing = 0;
    Type maybeNat = parseTypeText("1 + mu(\\X:*. 1 + X)");
    while (cases < 24) {
      PP p = genCatch(r, 0, 3);
      SimV expect = simulate(p, 0);
      CheckedProgram cp = checkProgram(
          prelude + "let probe : Maybe Nat = runAbort @[Nat] (eCatch @[Nat] (" +
          progText(p, 0) + "));\n");
      Term m = linkDecl(cp, "probe");
      EvalResult res = evaluate(m, 4'000'000);
      if (res.status != EvalStatus::Value) { ok = false; break; }
      Obs machine = observeTermValue(res.term, maybeNat, 4'000'000);
      Obs oracle = observeSem(denote(m, 64'000'000), maybeNat);
      if (!obsEq(machine, oracle)) { ok = false; break; }
      if (expect.nothing) {
        if (machine->tag != ObsNode::Tag::TagL) { ok = false; break; }
        nothing++;
      } else {
        if (machine->tag != ObsNode::Tag::TagR || obsToNat(machine->a) != expect.v) {
          ok = false;
          break;
        }
        just++;
      }
      cases++;
    }
    ok = ok && cases >= 20 && just > 0 && nothing > 0;
    detail = std::to_string(cases) + " generated Catch programs (" + std::to_string(just) +
             " caught, " + std::to_string(nothing) + " uncaught)";
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(4, "higher-order elaboration", ok, detail);
}

// ---- 5. step-wise semantic preservation -------------------------------------

void criterion5() {
  bool ok = true;
  long steps = 0;
  std::string detail;
  try {
    for (const std::string& name : corpusFiles()) {
      CheckedProgram p = loadCorpus(name);
      Type ty = normalizeType(mainScheme(p)->body);
      if (!observableType(ty)) continue;
      Term cur = linkMain(p);
      Obs want = observeSem(denote(cur, 64'000'000), ty);
      while (auto st = step(cur)) {
        cur = st->term;
        if (!obsEq(observeSem(denote(cur, 64'000'000), ty), want)) {
          ok = false;
          detail = "disagreement in " + name;
          break;
        }
        steps++;
      }
      if (!ok) break;
    }
    if (ok) detail = std::to_string(steps) + " steps, zero disagreements";
    ok = ok && steps >= 500;
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(5, "oracle cross-check on every reduction step", ok, detail);
}

// ---- 6. metatheory property suite -------------------------------------------

int redexPositions(const Term& t) {
  if (isValue(t)) return 0;
  int here = 0;
  switch (t->tag) {
    case TmTag::App: here = isValue(t->a) && isValue(t->b) ? 1 : 0; break;
    case TmTag::TyApp: here = isValue(t->a) ? 1 : 0; break;
    case TmTag::Let: here = isValue(t->a) ? 1 : 0; break;
    default: break;
  }
  int inner = 0;
  switch (t->tag) {
    case TmTag::App:
      inner += redexPositions(t->a);
      if (isValue(t->a)) inner += redexPositions(t->b);
      break;
    case TmTag::TyApp:
    case TmTag::Let:
    case TmTag::Map:
    case TmTag::Fold:
      inner += redexPositions(t->a);
      break;
    case TmTag::Fork:
    case TmTag::Join:
      inner += redexPositions(t->a);
      if (isValue(t->a)) inner += redexPositions(t->b);
      break;
    default:
      break;
  }
  return here + inner;
}

void criterion6() {
  bool ok = true;
  std::string detail;
  try {
    long traced = 0;
    // subject reduction + determinism + progress along every corpus trace
    for (const std::string& name : corpusFiles()) {
      CheckedProgram p = loadCorpus(name);
      Term cur = linkMain(p);
      Scheme sigma = mainScheme(p);
      for (;;) {
        int positions = redexPositions(cur);
        if (isValue(cur)) {
          if (positions != 0) { ok = false; detail = "decomposition of a value"; }
          break;
        }
        if (positions != 1) {
          ok = false;
          detail = "non-unique decomposition in " + name;
          break;
        }
        auto s = step(cur); // progress: a checked non-value must step
        if (!s) { ok = false; detail = "stuck term in " + name; break; }
        cur = s->term;
        traced++;
        try {
          checkTerm({}, {}, cur, sigma);
        } catch (const std::exception& e) {
          ok = false;
          detail = "subject reduction failed in " + name + ": " + e.what();
          break;
        }
      }
      if (!ok) break;
    }

    // normalizer idempotence, confluence and kind preservation on generated
    // types, with constructor-coverage accounting
    Coverage cov;
    Rng r(131);
    int generated = 0;
    for (int i = 0; i < 1100 && ok; i++) {
      KindCtx delta{kStar(), kArrow(kStar(), kStar())};
      Kind k = genKind(r, 2);
      Type t = genType(r, delta, {}, k, 4, &cov);
      generated++;
      Type n1 = normalizeType(t);
      if (!typeEq(normalizeType(n1), n1)) { ok = false; detail = "idempotence"; }
      checkKind(delta, {}, t, k);
      checkKind(delta, {}, n1, k); // kind preservation
      // random-order contraction must land on the same normal form: the
      // normalizer is re-applied to randomly pre-reduced variants
      Type shuffled = t;
      for (int s = 0; s < 5; s++) {
        // cheap shuffle: normalize a random subtree first
        if (shuffled->a && r.coin()) {
          TypeNode m = *shuffled;
          m.a = normalizeType(m.a);
          shuffled = std::make_shared<TypeNode>(std::move(m));
        } else if (shuffled->b && r.coin()) {
          TypeNode m = *shuffled;
          m.b = normalizeType(m.b);
          shuffled = std::make_shared<TypeNode>(std::move(m));
        }
      }
      if (!typeEq(normalizeType(shuffled), n1)) { ok = false; detail = "confluence"; }
    }
    std::vector<std::string> forms{"var", "lam", "mu", "fun", "app",
                                   "prod", "sum", "unit", "empty"};
    double coverage = cov.fraction(forms);
    ok = ok && coverage >= 0.99 && generated >= 1000 && traced >= 500;
    if (detail.empty())
      detail = std::to_string(traced) + " traced steps, " + std::to_string(generated) +
               " generated types, constructor coverage " +
               std::to_string((int)(coverage * 100)) + "%";
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(6, "metatheory property suite", ok, detail);
}

// ---- 7. functor laws ---------------------------------------------------------

void criterion7() {
  bool ok = true;
  std::string detail;
  try {
    const std::string prelude = readFile(corpusPath("nat.xdt")) +
        "type Expr = \\X:*. Nat + (X * X);\n"
        "type List = \\a:*. mu(\\X:*. 1 + (a * X));\n"
        "type FreeF = \\f:*->*. \\a:*. \\X:*. a + f X;\n"
        "type Free  = \\f:*->*. \\a:*. mu(FreeF f a);\n"
        "type Tick = \\X:*. X;\n"
        "let idN : Nat => Nat = \\x. x;\n"
        "let f : Nat => Nat = \\x. succ x;\n"
        "let g : Nat => Nat = \\x. add x 2;\n"
        "let fg : Nat => Nat = \\x. f (g x);\n"
        "let nilN : List Nat = in (inl tt);\n"
        "let consN : Nat => List Nat => List Nat = "
        "\\x. \\t. in (inr (fork(\\u. x, \\u. t) tt));\n";
    Rng r(41);
    auto run = [&](const std::string& ty, const std::string& e) {
      CheckedProgram p = checkProgram(prelude + "let probe : " + ty + " = " + e + ";\n");
      Term m = linkDecl(p, "probe");
      EvalResult res = evaluate(m, 1'000'000);
      if (res.status != EvalStatus::Value) throw XdtError(ErrorCode::Internal, "no value");
      return observeTermValue(res.term, normalizeType(parseTypeText(
          ty == "Expr Nat"
              ? "mu(\\X:*. 1 + X) + (mu(\\X:*. 1 + X) * mu(\\X:*. 1 + X))"
              : ty == "List Nat" ? "mu(\\X:*. 1 + (mu(\\Y:*. 1 + Y) * X))"
                                 : "mu(\\X:*. mu(\\Y:*. 1 + Y) + X)")), 1'000'000);
    };
    int cases = 0;
    for (int i = 0; i < 105 && ok; i++) {
      long a = r.range(0, 9), b = r.range(0, 9);
      std::string exprV = r.coin()
          ? "inl " + std::to_string(a)
          : "inr (fork(\\u. " + std::to_string(a) + ", \\u. " + std::to_string(b) + ") tt)";
      std::string listV = "nilN";
      for (int j = 0, len = r.range(0, 3); j < len; j++)
        listV = "consN " + std::to_string(r.range(0, 5)) + " (" + listV + ")";
      std::string freeV = "in (inl " + std::to_string(r.range(0, 4)) + ")";
      for (int j = 0, d = r.range(0, 3); j < d; j++) freeV = "in (inr (" + freeV + "))";

      ok = ok &&
           obsEq(run("Expr Nat", "map[Expr](idN) (" + exprV + ")"), run("Expr Nat", exprV)) &&
           obsEq(run("List Nat", "map[List](idN) (" + listV + ")"), run("List Nat", listV)) &&
           obsEq(run("Free Tick Nat", "map[Free Tick](idN) (" + freeV + ")"),
                 run("Free Tick Nat", freeV)) &&
           obsEq(run("Expr Nat", "map[Expr](fg) (" + exprV + ")"),
                 run("Expr Nat", "map[Expr](f) (map[Expr](g) (" + exprV + "))")) &&
           obsEq(run("List Nat", "map[List](fg) (" + listV + ")"),
                 run("List Nat", "map[List](f) (map[List](g) (" + listV + "))")) &&
           obsEq(run("Free Tick Nat", "map[Free Tick](fg) (" + freeV + ")"),
                 run("Free Tick Nat",
                     "map[Free Tick](f) (map[Free Tick](g) (" + freeV + "))"));
      if (ok) cases++;
    }
    ok = ok && cases >= 100;
    detail = "identity and composition for Expr, List, Free on " +
             std::to_string(cases) + " generated values each";
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(7, "functor laws", ok, detail);
}

// ---- 8. round-trip -----------------------------------------------------------

void criterion8() {
  bool ok = true;
  std::string detail;
  try {
    for (const std::string& name : corpusFiles()) {
      CheckedProgram p = checkProgram(readFile(corpusPath(name)));
      for (const Decl& d : p.source.decls) {
        if (auto* td = std::get_if<TypeDecl>(&d)) {
          if (!typeEq(parseTypeText(printType(td->body)), td->body)) ok = false;
        } else {
          const LetDecl& ld = std::get<LetDecl>(d);
          if (!schemeEq(parseSchemeText(printScheme(ld.scheme)), ld.scheme)) ok = false;
        }
      }
      // terms reference earlier declarations; the closed let-linked form
      // round-trips through the printer
      for (const std::string& declName : p.letNames) {
        Term t = linkDecl(p, declName);
        if (!termEq(parseTermText(printTerm(t)), t)) ok = false;
      }
    }
    Rng r(151);
    int n = 0;
    for (int i = 0; i < 1100 && ok; i++) {
      Type t = genType(r, {}, {}, genKind(r, 2), 4);
      if (!typeEq(parseTypeText(printType(t)), t)) ok = false;
      n++;
    }
    ok = ok && n >= 1000;
    detail = "all corpus declarations and " + std::to_string(n) + " generated trees";
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(8, "parse/print round-trip", ok, detail);
}

} // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  if (failures == 0) std::printf("acceptance: all criteria hold\n");
  else std::printf("acceptance: %d criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
