#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"

using namespace xdt;
using namespace xdt::test;

namespace {
Term checkedClosed(const std::string& term, const std::string& scheme) {
  return checkTerm({}, {}, parseTermText(term), parseSchemeText(scheme));
}
} // namespace

TEST_CASE("denote computes big-step values") {
  // (\x. x) tt |-> unit
  Sem v = denote(checkedClosed("(\\x. x) tt", "1"));
  CHECK(v->tag == SemTag::Unit);

  // a type abstraction denotes a polymorphic value; each instantiation
  // computes the identity
  Sem poly = denote(checkedClosed("/\\a:*. \\x. x", "forall a:*. a => a"));
  CHECK(poly->tag == SemTag::Poly);

  // nats denote wrap spines
  Sem three = denote(checkedClosed("3", "mu(\\X:*. 1 + X)"));
  CHECK(three->tag == SemTag::Wrap);
  Obs o = observeSem(three, parseTypeText("mu(\\X:*. 1 + X)"));
  CHECK(obsToNat(o) == 3);
}

TEST_CASE("observation requires first-order types") {
  CHECK(observableType(normalizeType(parseTypeText("mu(\\X:*. 1 + X)"))));
  CHECK(observableType(normalizeType(parseTypeText("1 + (0 * 1)"))));
  CHECK(!observableType(normalizeType(parseTypeText("1 => 1"))));
  CHECK(!observableType(normalizeType(parseTypeText("1 * (1 => 1)"))));

  Sem u = denote(checkedClosed("tt", "1"));
  CHECK(obsEq(observeSem(u, tyUnit()), obsUnit()));
  CHECK_THROWS_AS(observeSem(u, parseTypeText("1 => 1")), XdtError);
}

TEST_CASE("observation text round-trips") {
  Obs o = obsPair(obsWrap(obsL(obsUnit())), obsR(obsUnit()));
  CHECK(obsEq(parseObs(showObs(o)), o));
  CHECK(showObs(natToObs(2)) == "mu(inr(mu(inr(mu(inl(unit))))))");
  CHECK(obsToNat(natToObs(7)) == 7);
}

TEST_CASE("oracle agreement on every corpus main") {
  for (const std::string& name : corpusFiles()) {
    CAPTURE(name);
    CheckedProgram p = loadCorpus(name);
    OracleReport r = runOracle(p, 1'000'000);
    CHECK(r.agree);
    Obs want = parseObs(readFile(corpusPath(name.substr(0, name.size() - 4) + ".expect")));
    CHECK(obsEq(r.oracle, want));
  }
}

TEST_CASE("reduction preserves the oracle's meaning, step by step") {
  // Eq-style cross-check: every traced term has the same denotation
  long checked = 0;
  for (const std::string& name : corpusFiles()) {
    CAPTURE(name);
    CheckedProgram p = loadCorpus(name);
    Scheme s = mainScheme(p);
    Type ty = normalizeType(s->body);
    if (!observableType(ty)) continue;
    Term cur = linkMain(p);
    Obs want = observeSem(denote(cur), ty);
    while (auto st = step(cur)) {
      cur = st->term;
      Obs now = observeSem(denote(cur), ty);
      CHECK(obsEq(now, want));
      checked++;
    }
    // and the final value observes the same syntactically
    CHECK(obsEq(observeTermValue(cur, ty, 1'000'000), want));
  }
  CHECK(checked >= 500);
}

namespace {

// Generated arithmetic programs carry their own expected value, computed by
// the generator: a third, trivially-correct evaluator triangulating the
// machine and the interpreter.
struct GenProgram {
  std::string text;
  long value;
};

GenProgram genArith(Rng& r, int depth, std::vector<std::pair<std::string, long>>& env) {
  auto clamp = [](long v) { return v < 0 ? 0 : v; };
  if (depth <= 0 || r.range(0, 5) == 0) {
    if (!env.empty() && r.coin()) {
      auto& [n, v] = env[r.range(0, (int)env.size() - 1)];
      return {n, v};
    }
    long n = r.range(0, 6);
    return {std::to_string(n), n};
  }
  switch (r.range(0, 7)) {
    case 0: {
      GenProgram a = genArith(r, depth - 1, env), b = genArith(r, depth - 1, env);
      return {"add (" + a.text + ") (" + b.text + ")", a.value + b.value};
    }
    case 1: {
      GenProgram a = genArith(r, depth - 1, env), b = genArith(r, depth - 1, env);
      return {"mul (" + a.text + ") (" + b.text + ")", a.value * b.value};
    }
    case 2: {
      GenProgram a = genArith(r, depth - 1, env);
      return {"succ (" + a.text + ")", a.value + 1};
    }
    case 3: {
      GenProgram a = genArith(r, depth - 1, env);
      return {"predN (" + a.text + ")", clamp(a.value - 1)};
    }
    case 4: { // let binding
      GenProgram bound = genArith(r, depth - 1, env);
      std::string name = "v" + std::to_string(env.size());
      env.push_back({name, bound.value});
      GenProgram body = genArith(r, depth - 1, env);
      env.pop_back();
      return {"let " + name + " : Nat = " + bound.text + " in " + body.text, body.value};
    }
    case 5: { // beta redex with an ascribed argument
      GenProgram arg = genArith(r, depth - 1, env);
      std::string name = "w" + std::to_string(env.size());
      env.push_back({name, arg.value});
      GenProgram body = genArith(r, depth - 1, env);
      env.pop_back();
      return {"(\\" + name + ". " + body.text + ") ((" + arg.text + ") : Nat)",
              body.value};
    }
    case 6: { // pair projection
      GenProgram a = genArith(r, depth - 1, env), b = genArith(r, depth - 1, env);
      bool left = r.coin();
      // the projected pair is ascribed: the discarded component's type is
      // not determined by the expectation alone
      return {std::string(left ? "fst" : "snd") + " ((fork(\\u. " + a.text +
                  ", \\u. " + b.text + ") tt) : Nat * Nat)",
              left ? a.value : b.value};
    }
    default: { // sum elimination
      GenProgram a = genArith(r, depth - 1, env), b = genArith(r, depth - 1, env);
      bool left = r.coin();
      std::string scrut = left ? "inl tt" : "inr (" + b.text + ")";
      return {"join(\\u. " + a.text + ", \\x. succ x) ((" + scrut +
                  ") : 1 + Nat)",
              left ? a.value : b.value + 1};
    }
  }
}

} // namespace

TEST_CASE("generated programs agree across machine, oracle and generator") {
  const std::string prelude = readFile(corpusPath("nat.xdt")) +
      "let predN : Nat => Nat = \\n. join(\\u. zero, \\m. m) (unin n);\n";
  Rng r(2024);
  Type nat = parseTypeText("mu(\\X:*. 1 + X)");
  int cases = 0;
  for (int i = 0; i < 60; i++) {
    std::vector<std::pair<std::string, long>> env;
    GenProgram g = genArith(r, 3, env);
    CAPTURE(g.text);
    CheckedProgram p =
        checkProgram(prelude + "let probe : Nat = " + g.text + ";\n");
    Term m = linkDecl(p, "probe");
    // machine
    StepTrace trace;
    EvalResult res = evaluateTraced(m, 2'000'000, trace);
    REQUIRE(res.status == EvalStatus::Value);
    Obs machine = observeTermValue(res.term, nat, 2'000'000);
    CHECK(obsToNat(machine) == g.value);
    // oracle
    CHECK(obsToNat(observeSem(denote(m, 64'000'000), nat)) == g.value);
    // light subject-reduction sampling along the trace
    Scheme sigma = monoScheme(nat);
    for (size_t s = 0; s < trace.size(); s += 7)
      CHECK_NOTHROW(checkTerm({}, {}, trace[s].after, sigma));
    cases++;
  }
  CHECK(cases == 60);
}

TEST_CASE("the oracle is total on the corpus within its budget") {
  for (const std::string& name : corpusFiles()) {
    CAPTURE(name);
    CheckedProgram p = loadCorpus(name);
    CHECK_NOTHROW(denote(linkMain(p)));
  }
}

TEST_CASE("handler results agree between the two interpreters") {
  // hAbort over random abort-or-pure programs
  const std::string prelude = readFile(corpusPath("free.xdt"));
  Rng r(3);
  for (int i = 0; i < 40; i++) {
    // random program over Abort + VoidF
    bool aborts = r.coin();
    long val = r.range(0, 9);
    std::string v = aborts ? "abortA" : "pureA " + std::to_string(val);
    std::string text = prelude + "let main2 : Free VoidF (Maybe Nat) = hAbort @[VoidF] @[Nat] (" + v + ");\n";
    // rename main so main2 is the program of interest
    CheckedProgram p = checkProgram(text);
    Term m = linkDecl(p, "main2");
    Type ty = normalizeType(parseTypeText("mu(\\X:*. (1 + mu(\\Y:*. 1 + Y)) + 0)"));
    EvalResult res = evaluate(m, 200'000);
    REQUIRE(res.status == EvalStatus::Value);
    Obs machine = observeTermValue(res.term, ty, 200'000);
    Obs oracle = observeSem(denote(m), ty);
    CHECK(obsEq(machine, oracle));
    // Just / Nothing shape decided independently by the generator;
    // the tree is mu(inl(<maybe>)) for the pure result of the handler
    REQUIRE(machine->tag == ObsNode::Tag::Wrap);
    REQUIRE(machine->a->tag == ObsNode::Tag::TagL);
    bool isJust = machine->a->a->tag == ObsNode::Tag::TagR;
    CHECK(isJust == !aborts);
  }
}

TEST_CASE("bind on Free agrees with handler homomorphism spot checks") {
  // handle h i (bindFree m k) ~ the handled continuation, observationally
  const std::string prelude = readFile(corpusPath("free.xdt"));
  Rng r(29);
  for (int i = 0; i < 25; i++) {
    long a = r.range(0, 5);
    bool aborts = r.coin();
    std::string m = aborts ? "abortA" : "pureA " + std::to_string(a);
    // k continues with succ
    std::string text = prelude +
        "let k : Nat => Free (Abort + VoidF) Nat = \\x. in (inl (succ x));\n"
        "let lhs : Free VoidF (Maybe Nat) = hAbort @[VoidF] @[Nat] "
        "(bindFree @[Abort + VoidF] @[Nat] @[Nat] (" + m + ") k);\n";
    CheckedProgram p = checkProgram(text);
    Term t = linkDecl(p, "lhs");
    Type ty = normalizeType(parseTypeText("mu(\\X:*. (1 + mu(\\Y:*. 1 + Y)) + 0)"));
    EvalResult res = evaluate(t, 200'000);
    REQUIRE(res.status == EvalStatus::Value);
    Obs machine = observeTermValue(res.term, ty, 200'000);
    Obs oracle = observeSem(denote(t), ty);
    CHECK(obsEq(machine, oracle));
    REQUIRE(machine->tag == ObsNode::Tag::Wrap);
    REQUIRE(machine->a->tag == ObsNode::Tag::TagL);
    if (aborts) {
      CHECK(machine->a->a->tag == ObsNode::Tag::TagL); // Nothing
    } else {
      REQUIRE(machine->a->a->tag == ObsNode::Tag::TagR); // Just (succ a)
      CHECK(obsToNat(machine->a->a->a) == a + 1);
    }
  }
}
