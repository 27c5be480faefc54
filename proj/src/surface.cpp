#include "xdt/surface.hpp"

#include "xdt/errors.hpp"

#include <cassert>
#include <map>
#include <sstream>

namespace xdt {

void offsetToLineCol(const std::string& text, int pos, int& line, int& col) {
  line = 1;
  col = 1;
  for (int i = 0; i < pos && i < (int)text.size(); i++) {
    if (text[i] == '\n') {
      line++;
      col = 1;
    } else {
      col++;
    }
  }
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
  Ident,
  Int,
  KwType,
  KwLet,
  KwIn,
  KwUnin,
  KwMu,
  KwForall,
  KwFold,
  KwMap,
  KwFork,
  KwJoin,
  KwFst,
  KwSnd,
  KwInl,
  KwInr,
  KwTt,
  KwAbsurd,
  Lambda,    // backslash
  TyLambda, // slash-backslash
  Dot,
  Semi,
  Colon,
  Equals,
  FatArrow, // =>
  KArrow,   // ->
  Star,
  Plus,
  At,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int pos;
};

const std::map<std::string, Tok> kKeywords = {
    {"type", Tok::KwType}, {"let", Tok::KwLet},     {"in", Tok::KwIn},
    {"unin", Tok::KwUnin}, {"mu", Tok::KwMu},       {"forall", Tok::KwForall},
    {"fold", Tok::KwFold}, {"map", Tok::KwMap},     {"fork", Tok::KwFork},
    {"join", Tok::KwJoin}, {"fst", Tok::KwFst},     {"snd", Tok::KwSnd},
    {"inl", Tok::KwInl},   {"inr", Tok::KwInr},     {"tt", Tok::KwTt},
    {"absurd", Tok::KwAbsurd},
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int i = 0, n = (int)src.size();
  auto peek = [&](int k) { return i + k < n ? src[i + k] : '\0'; };
  while (i < n) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      i++;
      continue;
    }
    if (c == '-' && peek(1) == '-') {
      while (i < n && src[i] != '\n') i++;
      continue;
    }
    int at = i;
    if (isalpha((unsigned char)c) || c == '_') {
      int j = i;
      while (j < n && (isalnum((unsigned char)src[j]) || src[j] == '_' || src[j] == '\'')) j++;
      std::string word = src.substr(i, j - i);
      auto kw = kKeywords.find(word);
      out.push_back({kw == kKeywords.end() ? Tok::Ident : kw->second, word, at});
      i = j;
      continue;
    }
    if (isdigit((unsigned char)c)) {
      int j = i;
      while (j < n && isdigit((unsigned char)src[j])) j++;
      out.push_back({Tok::Int, src.substr(i, j - i), at});
      i = j;
      continue;
    }
    switch (c) {
      case '\\': out.push_back({Tok::Lambda, "\\", at}); i++; break;
      case '/':
        if (peek(1) != '\\') fail(ErrorCode::LexError, "stray '/'", at);
        out.push_back({Tok::TyLambda, "/\\", at});
        i += 2;
        break;
      case '.': out.push_back({Tok::Dot, ".", at}); i++; break;
      case ';': out.push_back({Tok::Semi, ";", at}); i++; break;
      case ':': out.push_back({Tok::Colon, ":", at}); i++; break;
      case '=':
        if (peek(1) == '>') {
          out.push_back({Tok::FatArrow, "=>", at});
          i += 2;
        } else {
          out.push_back({Tok::Equals, "=", at});
          i++;
        }
        break;
      case '-':
        if (peek(1) != '>') fail(ErrorCode::LexError, "stray '-'", at);
        out.push_back({Tok::KArrow, "->", at});
        i += 2;
        break;
      case '*': out.push_back({Tok::Star, "*", at}); i++; break;
      case '+': out.push_back({Tok::Plus, "+", at}); i++; break;
      case '@': out.push_back({Tok::At, "@", at}); i++; break;
      case '(': out.push_back({Tok::LParen, "(", at}); i++; break;
      case ')': out.push_back({Tok::RParen, ")", at}); i++; break;
      case '[': out.push_back({Tok::LBracket, "[", at}); i++; break;
      case ']': out.push_back({Tok::RBracket, "]", at}); i++; break;
      case ',': out.push_back({Tok::Comma, ",", at}); i++; break;
      default:
        fail(ErrorCode::LexError, std::string("unexpected character '") + c + "'", at);
    }
  }
  out.push_back({Tok::End, "", n});
  return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

enum class VarClass { Mixed, Functor, TermVar };

struct ScopeEntry {
  std::string name;
  VarClass cls;
};

struct Parser {
  std::vector<Token> toks;
  int p = 0;
  std::vector<ScopeEntry> scope; // innermost last
  std::map<std::string, Type> typeDecls;
  std::vector<std::string> letNames;

  const Token& cur() const { return toks[p]; }
  const Token& ahead(int k) const { return toks[std::min(p + k, (int)toks.size() - 1)]; }
  Token eat() { return toks[p++]; }

  Token expect(Tok k, const std::string& what) {
    if (cur().kind != k)
      fail(ErrorCode::ParseError, "expected " + what + ", got '" + cur().text + "'", cur().pos);
    return eat();
  }

  bool accept(Tok k) {
    if (cur().kind == k) {
      eat();
      return true;
    }
    return false;
  }

  // ---- scope helpers ----

  struct Found {
    VarClass cls;
    int index;
  };

  std::optional<Found> lookup(const std::string& name, VarClass want1, VarClass want2) const {
    int cm = 0, cf = 0, ct = 0;
    for (int i = (int)scope.size() - 1; i >= 0; i--) {
      const ScopeEntry& e = scope[i];
      if (e.name == name && (e.cls == want1 || e.cls == want2)) {
        int idx = e.cls == VarClass::Mixed ? cm : e.cls == VarClass::Functor ? cf : ct;
        return Found{e.cls, idx};
      }
      if (e.cls == VarClass::Mixed) cm++;
      else if (e.cls == VarClass::Functor) cf++;
      else ct++;
    }
    return std::nullopt;
  }

  // ---- kinds ----

  Kind parseKind() {
    Kind left = parseKindAtom();
    if (accept(Tok::KArrow)) return kArrow(left, parseKind());
    return left;
  }

  Kind parseKindAtom() {
    if (accept(Tok::Star)) return kStar();
    if (accept(Tok::LParen)) {
      Kind k = parseKind();
      expect(Tok::RParen, "')'");
      return k;
    }
    fail(ErrorCode::ParseError, "expected a kind, got '" + cur().text + "'", cur().pos);
  }

  // ---- types ----

  Type parseType() { // '=>' level, right assoc
    Type left = parseTypeSum();
    if (accept(Tok::FatArrow)) return tyFun(left, parseType());
    return left;
  }

  Type parseTypeSum() {
    Type left = parseTypeProd();
    if (accept(Tok::Plus)) return tySum(left, parseTypeSum());
    return left;
  }

  Type parseTypeProd() {
    Type left = parseTypeApp();
    if (accept(Tok::Star)) return tyProd(left, parseTypeProd());
    return left;
  }

  bool startsTypeAtom() const {
    switch (cur().kind) {
      case Tok::Ident:
      case Tok::Int:
      case Tok::KwMu:
      case Tok::Lambda:
      case Tok::LParen:
        return true;
      default:
        return false;
    }
  }

  Type parseTypeApp() {
    Type t = parseTypeAtom();
    while (startsTypeAtom()) t = tyApp(t, parseTypeAtom());
    return t;
  }

  Type parseTypeAtom() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Int: {
        eat();
        if (t.text == "0") return tyEmpty();
        if (t.text == "1") return tyUnit();
        fail(ErrorCode::ParseError, "only 0 and 1 are type literals", t.pos);
      }
      case Tok::KwMu: {
        eat();
        expect(Tok::LParen, "'(' after mu");
        Type body = parseType();
        expect(Tok::RParen, "')'");
        return tyMu(body);
      }
      case Tok::Lambda: {
        eat();
        Token name = expect(Tok::Ident, "binder name");
        Kind k = kStar();
        if (accept(Tok::Colon)) k = parseKind();
        expect(Tok::Dot, "'.' after binder");
        scope.push_back({name.text, VarClass::Functor});
        Type body = parseType();
        scope.pop_back();
        return tyLam(k, name.text, body);
      }
      case Tok::LParen: {
        eat();
        Type inner = parseType();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident: {
        eat();
        if (auto f = lookup(t.text, VarClass::Mixed, VarClass::Functor)) {
          return f->cls == VarClass::Mixed ? tyMixed(f->index, t.text)
                                           : tyFunctor(f->index, t.text);
        }
        auto d = typeDecls.find(t.text);
        if (d != typeDecls.end()) return d->second; // closed; splice directly
        fail(ErrorCode::UnboundName, "unbound type name '" + t.text + "'", t.pos);
      }
      default:
        fail(ErrorCode::ParseError, "expected a type, got '" + t.text + "'", t.pos);
    }
  }

  // ---- schemes ----

  Scheme parseScheme() {
    std::vector<Binder> binders;
    int pushed = 0;
    while (cur().kind == Tok::KwForall) {
      eat();
      Token name = expect(Tok::Ident, "forall binder");
      Kind k = kStar();
      if (accept(Tok::Colon)) k = parseKind();
      expect(Tok::Dot, "'.' after forall binder");
      binders.push_back({name.text, k});
      scope.push_back({name.text, VarClass::Mixed});
      pushed++;
    }
    Type body = parseType();
    for (int i = 0; i < pushed; i++) scope.pop_back();
    return mkScheme(std::move(binders), body);
  }

  // ---- terms ----

  Term natLiteral(long v, int pos) {
    Term t = withPos(tmApp(tmPrim(TmTag::In), tmApp(tmPrim(TmTag::Inl), tmPrim(TmTag::Tt))), pos);
    for (long i = 0; i < v; i++)
      t = withPos(tmApp(tmPrim(TmTag::In), tmApp(tmPrim(TmTag::Inr), t)), pos);
    return t;
  }

  // stopAtIn: a bare `in` token at the top level of this term ends it (the
  // enclosing let's body follows). A leading `in` is still the primitive.
  Term parseTerm(bool stopAtIn) {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Lambda: {
        eat();
        Token name = expect(Tok::Ident, "binder name");
        expect(Tok::Dot, "'.' after binder");
        scope.push_back({name.text, VarClass::TermVar});
        Term body = parseTerm(stopAtIn);
        scope.pop_back();
        return withPos(tmLam(name.text, body), t.pos);
      }
      case Tok::TyLambda: {
        eat();
        Token name = expect(Tok::Ident, "binder name");
        Kind k = kStar();
        if (accept(Tok::Colon)) k = parseKind();
        expect(Tok::Dot, "'.' after binder");
        scope.push_back({name.text, VarClass::Mixed});
        Term body = parseTerm(stopAtIn);
        scope.pop_back();
        return withPos(tmTyLam(name.text, k, body), t.pos);
      }
      case Tok::KwLet: {
        eat();
        Token name = expect(Tok::Ident, "let binder");
        expect(Tok::Colon, "':' after let binder");
        Scheme s = parseScheme();
        expect(Tok::Equals, "'='");
        Term bound = parseTerm(true);
        expect(Tok::KwIn, "'in'");
        scope.push_back({name.text, VarClass::TermVar});
        Term body = parseTerm(stopAtIn);
        scope.pop_back();
        return withPos(tmLet(name.text, s, bound, body), t.pos);
      }
      default:
        return parseAppChain(stopAtIn);
    }
  }

  bool startsTermAtom() const {
    switch (cur().kind) {
      case Tok::Ident:
      case Tok::Int:
      case Tok::KwIn:
      case Tok::KwUnin:
      case Tok::KwFst:
      case Tok::KwSnd:
      case Tok::KwInl:
      case Tok::KwInr:
      case Tok::KwTt:
      case Tok::KwAbsurd:
      case Tok::KwFork:
      case Tok::KwJoin:
      case Tok::KwMap:
      case Tok::KwFold:
      case Tok::LParen:
        return true;
      default:
        return false;
    }
  }

  Term parseAppChain(bool stopAtIn) {
    Term t = parseFactor(stopAtIn);
    while (startsTermAtom()) {
      if (stopAtIn && cur().kind == Tok::KwIn) break;
      t = tmApp(t, parseFactor(stopAtIn));
    }
    return t;
  }

  Term parseFactor(bool stopAtIn) {
    Term t = parseTermAtom(stopAtIn);
    while (cur().kind == Tok::At) {
      eat();
      expect(Tok::LBracket, "'[' after '@'");
      Type ty = parseType();
      expect(Tok::RBracket, "']'");
      t = tmTyApp(t, ty);
    }
    return t;
  }

  Term parseTermAtom(bool /*stopAtIn*/) {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Int: {
        eat();
        return natLiteral(std::stol(t.text), t.pos);
      }
      case Tok::KwIn: eat(); return withPos(tmPrim(TmTag::In), t.pos);
      case Tok::KwUnin: eat(); return withPos(tmPrim(TmTag::Unin), t.pos);
      case Tok::KwFst: eat(); return withPos(tmPrim(TmTag::Fst), t.pos);
      case Tok::KwSnd: eat(); return withPos(tmPrim(TmTag::Snd), t.pos);
      case Tok::KwInl: eat(); return withPos(tmPrim(TmTag::Inl), t.pos);
      case Tok::KwInr: eat(); return withPos(tmPrim(TmTag::Inr), t.pos);
      case Tok::KwTt: eat(); return withPos(tmPrim(TmTag::Tt), t.pos);
      case Tok::KwAbsurd: eat(); return withPos(tmPrim(TmTag::Absurd), t.pos);
      case Tok::KwFork:
      case Tok::KwJoin: {
        eat();
        expect(Tok::LParen, "'('");
        Term l = parseTerm(false);
        expect(Tok::Comma, "','");
        Term r = parseTerm(false);
        expect(Tok::RParen, "')'");
        return withPos(t.kind == Tok::KwFork ? tmFork(l, r) : tmJoin(l, r), t.pos);
      }
      case Tok::KwMap:
      case Tok::KwFold: {
        eat();
        expect(Tok::LBracket, "'['");
        Type idx = parseType();
        expect(Tok::RBracket, "']'");
        expect(Tok::LParen, "'('");
        Term m = parseTerm(false);
        expect(Tok::RParen, "')'");
        return withPos(t.kind == Tok::KwMap ? tmMap(idx, m) : tmFold(idx, m), t.pos);
      }
      case Tok::LParen: {
        eat();
        Term inner = parseTerm(false);
        if (accept(Tok::Colon)) {
          Scheme s = parseScheme();
          inner = tmAscribe(inner, s);
        }
        expect(Tok::RParen, "')'");
        return withPos(inner, t.pos);
      }
      case Tok::Ident: {
        eat();
        if (auto f = lookup(t.text, VarClass::TermVar, VarClass::TermVar))
          return withPos(tmVar(f->index, t.text), t.pos);
        for (int i = (int)letNames.size() - 1; i >= 0; i--) {
          if (letNames[i] == t.text) {
            int locals = 0;
            for (const ScopeEntry& e : scope)
              if (e.cls == VarClass::TermVar) locals++;
            int idx = locals + ((int)letNames.size() - 1 - i);
            return withPos(tmVar(idx, t.text), t.pos);
          }
        }
        fail(ErrorCode::UnboundName, "unbound name '" + t.text + "'", t.pos);
      }
      default:
        fail(ErrorCode::ParseError, "expected a term, got '" + t.text + "'", t.pos);
    }
  }

  // ---- declarations ----

  SourceFile parseFile() {
    SourceFile sf;
    while (cur().kind != Tok::End) {
      if (cur().kind == Tok::KwType) {
        Token kw = eat();
        Token name = expect(Tok::Ident, "type name");
        if (typeDecls.count(name.text))
          fail(ErrorCode::ParseError, "duplicate type name '" + name.text + "'", name.pos);
        expect(Tok::Equals, "'='");
        Type body = parseType();
        expect(Tok::Semi, "';'");
        if (!freeMixed(body).empty() || !freeFunctor(body).empty())
          fail(ErrorCode::ParseError, "type declaration body must be closed", name.pos);
        typeDecls[name.text] = body;
        sf.decls.push_back(TypeDecl{name.text, body, kw.pos});
      } else if (cur().kind == Tok::KwLet) {
        Token kw = eat();
        Token name = expect(Tok::Ident, "let name");
        for (const std::string& n : letNames)
          if (n == name.text)
            fail(ErrorCode::ParseError, "duplicate declaration '" + name.text + "'", name.pos);
        expect(Tok::Colon, "':' after name");
        Scheme s = parseScheme();
        expect(Tok::Equals, "'='");
        Term body = parseTerm(false);
        expect(Tok::Semi, "';'");
        letNames.push_back(name.text);
        sf.decls.push_back(LetDecl{name.text, s, body, kw.pos});
      } else {
        fail(ErrorCode::ParseError, "expected a declaration, got '" + cur().text + "'",
             cur().pos);
      }
    }
    return sf;
  }
};

} // namespace

std::vector<const LetDecl*> SourceFile::lets() const {
  std::vector<const LetDecl*> out;
  for (const Decl& d : decls)
    if (auto* l = std::get_if<LetDecl>(&d)) out.push_back(l);
  return out;
}

const LetDecl* SourceFile::findLet(const std::string& name) const {
  for (const Decl& d : decls)
    if (auto* l = std::get_if<LetDecl>(&d))
      if (l->name == name) return l;
  return nullptr;
}

const TypeDecl* SourceFile::findType(const std::string& name) const {
  for (const Decl& d : decls)
    if (auto* t = std::get_if<TypeDecl>(&d))
      if (t->name == name) return t;
  return nullptr;
}

SourceFile parse(const std::string& text) {
  Parser p;
  p.toks = lex(text);
  return p.parseFile();
}

Type parseTypeText(const std::string& text) {
  Parser p;
  p.toks = lex(text);
  Type t = p.parseType();
  p.expect(Tok::End, "end of input");
  return t;
}

Scheme parseSchemeText(const std::string& text) {
  Parser p;
  p.toks = lex(text);
  Scheme s = p.parseScheme();
  p.expect(Tok::End, "end of input");
  return s;
}

Term parseTermText(const std::string& text) {
  Parser p;
  p.toks = lex(text);
  Term t = p.parseTerm(false);
  p.expect(Tok::End, "end of input");
  return t;
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

struct NameEnv {
  std::vector<std::string> mixed, functor, term; // innermost front

  static std::string pick(const std::string& hint, const std::set<std::string>& avoid) {
    std::string base = hint.empty() ? "x" : hint;
    if (!avoid.count(base)) return base;
    for (int i = 1;; i++) {
      std::string cand = base + std::to_string(i);
      if (!avoid.count(cand)) return cand;
    }
  }

  // Names a fresh binder must not collide with: everything visible plus the
  // hints of variables that resolve past the current environment.
  std::set<std::string> inScope() const {
    std::set<std::string> s(mixed.begin(), mixed.end());
    s.insert(functor.begin(), functor.end());
    s.insert(term.begin(), term.end());
    return s;
  }
};

void freeVarHints(const Type& t, int mcut, int fcut, std::set<std::string>& out) {
  switch (t->tag) {
    case TyTag::MixedVar:
      if (t->index >= mcut) out.insert(t->hint);
      return;
    case TyTag::FunctorVar:
      if (t->index >= fcut) out.insert(t->hint);
      return;
    case TyTag::Lam:
      freeVarHints(t->a, mcut, fcut + 1, out);
      return;
    case TyTag::Mu:
      freeVarHints(t->a, mcut, fcut, out);
      return;
    case TyTag::App:
    case TyTag::Fun:
    case TyTag::Prod:
    case TyTag::Sum:
      freeVarHints(t->a, mcut, fcut, out);
      freeVarHints(t->b, mcut, fcut, out);
      return;
    default:
      return;
  }
}

// levels: 0 fun (=>), 1 sum, 2 prod, 3 app, 4 atom
void printTy(std::ostream& os, const Type& t, NameEnv& env, int level);

void printTyBinder(std::ostream& os, const Type& t, NameEnv& env) {
  std::set<std::string> avoid = env.inScope();
  freeVarHints(t->a, 0, 1, avoid);
  std::string name = NameEnv::pick(t->hint, avoid);
  os << "\\" << name << ":" << showKind(t->binderKind) << ". ";
  env.functor.insert(env.functor.begin(), name);
  printTy(os, t->a, env, 0);
  env.functor.erase(env.functor.begin());
}

void printTy(std::ostream& os, const Type& t, NameEnv& env, int level) {
  auto paren = [&](int mine, auto body) {
    if (mine < level) {
      os << "(";
      body();
      os << ")";
    } else {
      body();
    }
  };
  switch (t->tag) {
    case TyTag::MixedVar:
      os << (t->index < (int)env.mixed.size() ? env.mixed[t->index] : t->hint);
      return;
    case TyTag::FunctorVar:
      os << (t->index < (int)env.functor.size() ? env.functor[t->index] : t->hint);
      return;
    case TyTag::Empty:
      os << "0";
      return;
    case TyTag::Unit:
      os << "1";
      return;
    case TyTag::Mu:
      os << "mu(";
      printTy(os, t->a, env, 0);
      os << ")";
      return;
    case TyTag::Lam:
      paren(0, [&] { printTyBinder(os, t, env); });
      return;
    case TyTag::Fun:
      paren(0, [&] {
        printTy(os, t->a, env, 1);
        os << " => ";
        printTy(os, t->b, env, 0);
      });
      return;
    case TyTag::Sum:
      paren(1, [&] {
        printTy(os, t->a, env, 2);
        os << " + ";
        printTy(os, t->b, env, 1);
      });
      return;
    case TyTag::Prod:
      paren(2, [&] {
        printTy(os, t->a, env, 3);
        os << " * ";
        printTy(os, t->b, env, 2);
      });
      return;
    case TyTag::App:
      paren(3, [&] {
        printTy(os, t->a, env, 3);
        os << " ";
        printTy(os, t->b, env, 4);
      });
      return;
  }
}

void printSchemeInner(std::ostream& os, const Scheme& s, NameEnv& env) {
  std::set<std::string> avoid = env.inScope();
  freeVarHints(s->body, (int)s->binders.size(), 0, avoid);
  int pushed = 0;
  std::set<std::string> used;
  for (const Binder& b : s->binders) {
    std::set<std::string> avoidHere = avoid;
    for (const std::string& u : used) avoidHere.insert(u);
    std::string name = NameEnv::pick(b.hint.empty() ? "a" : b.hint, avoidHere);
    used.insert(name);
    os << "forall " << name << ":" << showKind(b.kind) << ". ";
    env.mixed.insert(env.mixed.begin(), name);
    pushed++;
  }
  printTy(os, s->body, env, 0);
  for (int i = 0; i < pushed; i++) env.mixed.erase(env.mixed.begin());
}

void freeTermHints(const Term& t, int tcut, int mcut, std::set<std::string>& out) {
  if (!t) return;
  auto ty = [&](const Type& x) {
    if (x) freeVarHints(x, mcut, 0, out);
  };
  switch (t->tag) {
    case TmTag::Var:
      if (t->index >= tcut) out.insert(t->hint);
      return;
    case TmTag::Lam:
      freeTermHints(t->a, tcut + 1, mcut, out);
      return;
    case TmTag::Let:
      if (t->scheme) freeVarHints(t->scheme->body, mcut + (int)t->scheme->binders.size(), 0, out);
      freeTermHints(t->a, tcut, mcut, out);
      freeTermHints(t->b, tcut + 1, mcut, out);
      return;
    case TmTag::TyLam:
      freeTermHints(t->a, tcut, mcut + 1, out);
      return;
    default:
      freeTermHints(t->a, tcut, mcut, out);
      freeTermHints(t->b, tcut, mcut, out);
      ty(t->type);
      if (t->scheme) freeVarHints(t->scheme->body, mcut + (int)t->scheme->binders.size(), 0, out);
      return;
  }
}

// levels: 0 lambda/let, 1 application, 2 atom
void printTm(std::ostream& os, const Term& t, NameEnv& env, int level) {
  auto paren = [&](int mine, auto body) {
    if (mine < level) {
      os << "(";
      body();
      os << ")";
    } else {
      body();
    }
  };
  switch (t->tag) {
    case TmTag::Var:
      os << (t->index < (int)env.term.size() ? env.term[t->index] : t->hint);
      return;
    case TmTag::Lam:
      paren(0, [&] {
        std::set<std::string> avoid = env.inScope();
        freeTermHints(t->a, 1, 0, avoid);
        std::string name = NameEnv::pick(t->hint, avoid);
        os << "\\" << name << ". ";
        env.term.insert(env.term.begin(), name);
        printTm(os, t->a, env, 0);
        env.term.erase(env.term.begin());
      });
      return;
    case TmTag::TyLam:
      paren(0, [&] {
        std::set<std::string> avoid = env.inScope();
        freeTermHints(t->a, 0, 1, avoid);
        std::string name = NameEnv::pick(t->hint.empty() ? "a" : t->hint, avoid);
        os << "/\\" << name << ":" << showKind(t->binderKind) << ". ";
        env.mixed.insert(env.mixed.begin(), name);
        printTm(os, t->a, env, 0);
        env.mixed.erase(env.mixed.begin());
      });
      return;
    case TmTag::Let:
      paren(0, [&] {
        std::set<std::string> avoid = env.inScope();
        freeTermHints(t->b, 1, 0, avoid);
        std::string name = NameEnv::pick(t->hint, avoid);
        os << "let " << name << " : ";
        printSchemeInner(os, t->scheme, env);
        os << " = ";
        printTm(os, t->a, env, 1);
        os << " in ";
        env.term.insert(env.term.begin(), name);
        printTm(os, t->b, env, 0);
        env.term.erase(env.term.begin());
      });
      return;
    case TmTag::App:
      paren(1, [&] {
        printTm(os, t->a, env, 1);
        os << " ";
        printTm(os, t->b, env, 2);
      });
      return;
    case TmTag::TyApp:
      paren(1, [&] {
        printTm(os, t->a, env, 2);
        os << " @[";
        printTy(os, t->type, env, 0);
        os << "]";
      });
      return;
    case TmTag::Map:
    case TmTag::Fold:
      os << (t->tag == TmTag::Map ? "map[" : "fold[");
      printTy(os, t->type, env, 0);
      os << "](";
      printTm(os, t->a, env, 0);
      os << ")";
      return;
    case TmTag::Fork:
    case TmTag::Join:
      os << (t->tag == TmTag::Fork ? "fork(" : "join(");
      printTm(os, t->a, env, 0);
      os << ", ";
      printTm(os, t->b, env, 0);
      os << ")";
      return;
    case TmTag::Ascribe:
      os << "(";
      printTm(os, t->a, env, 0);
      os << " : ";
      printSchemeInner(os, t->scheme, env);
      os << ")";
      return;
    case TmTag::In: os << "in"; return;
    case TmTag::Unin: os << "unin"; return;
    case TmTag::Fst: os << "fst"; return;
    case TmTag::Snd: os << "snd"; return;
    case TmTag::Inl: os << "inl"; return;
    case TmTag::Inr: os << "inr"; return;
    case TmTag::Tt: os << "tt"; return;
    case TmTag::Absurd: os << "absurd"; return;
  }
}

} // namespace

std::string printType(const Type& t) {
  std::ostringstream os;
  NameEnv env;
  printTy(os, t, env, 0);
  return os.str();
}

std::string printScheme(const Scheme& s) {
  std::ostringstream os;
  NameEnv env;
  printSchemeInner(os, s, env);
  return os.str();
}

std::string printTerm(const Term& t) {
  std::ostringstream os;
  NameEnv env;
  printTm(os, t, env, 0);
  return os.str();
}

} // namespace xdt
