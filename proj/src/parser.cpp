#include "fleng/parser.hpp"

#include <array>
#include <cstring>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>

namespace fleng {
namespace {

struct Tok {
  enum class K { LId, UId, Int, Op, LPar, RPar, LBrk, RBrk, Comma, End };
  K k = K::End;
  std::string s;
  long long num = 0;
  SourcePos pos;
};

bool isIdentStart(char c) { return isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool isIdentChar(char c) {
  return isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

const std::array<const char*, 11> kOps = {"=:<=", "=:=", "::", "==", "++",
                                          "->",   "?",   "&",  ":",  "=", "|"};

std::vector<Tok> tokenize(const std::string& text, int baseLine) {
  std::vector<Tok> out;
  int line = baseLine, col = 1;
  size_t i = 0;
  auto pos = [&] { return SourcePos{line, col}; };
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      advance(1);
      continue;
    }
    SourcePos p = pos();
    if (isIdentStart(c)) {
      size_t j = i;
      while (j < text.size() && isIdentChar(text[j])) ++j;
      std::string name = text.substr(i, j - i);
      advance(j - i);
      out.push_back({isupper(static_cast<unsigned char>(c)) ? Tok::K::UId : Tok::K::LId,
                     name, 0, p});
      continue;
    }
    if (isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && isdigit(static_cast<unsigned char>(text[j]))) ++j;
      Tok t{Tok::K::Int, text.substr(i, j - i), 0, p};
      t.num = std::stoll(t.s);
      advance(j - i);
      out.push_back(t);
      continue;
    }
    switch (c) {
      case '(':
        out.push_back({Tok::K::LPar, "(", 0, p});
        advance(1);
        continue;
      case ')':
        out.push_back({Tok::K::RPar, ")", 0, p});
        advance(1);
        continue;
      case '[':
        out.push_back({Tok::K::LBrk, "[", 0, p});
        advance(1);
        continue;
      case ']':
        out.push_back({Tok::K::RBrk, "]", 0, p});
        advance(1);
        continue;
      case ',':
        out.push_back({Tok::K::Comma, ",", 0, p});
        advance(1);
        continue;
      default:
        break;
    }
    bool matched = false;
    for (const char* op : kOps) {
      size_t n = strlen(op);
      if (text.compare(i, n, op) == 0) {
        out.push_back({Tok::K::Op, op, 0, p});
        advance(n);
        matched = true;
        break;
      }
    }
    if (!matched) throw LangError(std::string("unexpected character '") + c + "'", p);
  }
  out.push_back({Tok::K::End, "", 0, pos()});
  return out;
}

bool isKeyword(const std::string& s) { return s == "data" || s == "where" || s == "free"; }

struct OpInfo {
  int prec;
  bool rightAssoc;
  bool nonAssoc;
};

const std::map<std::string, OpInfo>& opTable() {
  static const std::map<std::string, OpInfo> t = {
      {"?", {1, true, false}},    {"&", {2, true, false}},
      {"=:=", {3, false, true}},  {"=:<=", {3, false, true}},
      {"==", {3, false, true}},   {"++", {5, true, false}},
      {":", {5, true, false}},
  };
  return t;
}

class Parser {
 public:
  Parser(std::vector<Tok> toks, int& wildcards) : toks_(std::move(toks)), wild_(wildcards) {}

  const Tok& peek(size_t ahead = 0) const {
    size_t j = idx_ + ahead;
    return j < toks_.size() ? toks_[j] : toks_.back();
  }
  const Tok& next() {
    const Tok& t = peek();
    if (t.k != Tok::K::End) ++idx_;
    return t;
  }
  bool atOp(const std::string& s) const { return peek().k == Tok::K::Op && peek().s == s; }
  bool atKw(const std::string& s) const { return peek().k == Tok::K::LId && peek().s == s; }
  void expectOp(const std::string& s) {
    if (!atOp(s)) throw LangError("expected '" + s + "'", peek().pos);
    next();
  }
  void expectEnd() {
    if (peek().k != Tok::K::End)
      throw LangError("unexpected trailing input '" + peek().s + "'", peek().pos);
  }

  // --- expressions ---------------------------------------------------------

  bool atAtomStart() const {
    const Tok& t = peek();
    switch (t.k) {
      case Tok::K::LId:
        return !isKeyword(t.s);
      case Tok::K::UId:
      case Tok::K::Int:
      case Tok::K::LPar:
      case Tok::K::LBrk:
        return true;
      default:
        return false;
    }
  }

  SExpr parseExpr(int minPrec = 0) {
    SExpr lhs = parseApp();
    for (;;) {
      const Tok& t = peek();
      if (t.k != Tok::K::Op) break;
      auto it = opTable().find(t.s);
      if (it == opTable().end() || it->second.prec < minPrec) break;
      OpInfo info = it->second;
      std::string op = t.s;
      SourcePos p = t.pos;
      next();
      SExpr rhs = parseExpr(info.rightAssoc ? info.prec : info.prec + 1);
      if (info.nonAssoc && peek().k == Tok::K::Op) {
        auto jt = opTable().find(peek().s);
        if (jt != opTable().end() && jt->second.prec == info.prec)
          throw LangError("operator '" + op + "' is non-associative", peek().pos);
      }
      SExpr combined;
      combined.head = op;
      combined.pos = p;
      combined.args = {std::move(lhs), std::move(rhs)};
      lhs = std::move(combined);
    }
    return lhs;
  }

  SExpr parseApp() {
    SExpr e = parseAtom();
    while (atAtomStart()) {
      SExpr arg = parseAtom();
      e.args.push_back(std::move(arg));
    }
    return e;
  }

  SExpr parseAtom() {
    const Tok& t = peek();
    switch (t.k) {
      case Tok::K::LId:
      case Tok::K::UId: {
        if (isKeyword(t.s)) throw LangError("unexpected keyword '" + t.s + "'", t.pos);
        SExpr e;
        e.head = t.s;
        e.pos = t.pos;
        next();
        return e;
      }
      case Tok::K::Int: {
        SourcePos p = t.pos;
        long long n = t.num;
        next();
        return peano(n, p);
      }
      case Tok::K::LPar: {
        next();
        if (peek().k == Tok::K::Op) {
          // operator section name: (++), (?), (=:=), (:)
          SExpr e;
          e.head = peek().s;
          e.pos = peek().pos;
          next();
          if (peek().k != Tok::K::RPar)
            throw LangError("expected ')' after operator name", peek().pos);
          next();
          return e;
        }
        SExpr e = parseExpr();
        if (peek().k != Tok::K::RPar) throw LangError("expected ')'", peek().pos);
        next();
        return e;
      }
      case Tok::K::LBrk: {
        SourcePos p = t.pos;
        next();
        std::vector<SExpr> items;
        if (peek().k != Tok::K::RBrk) {
          items.push_back(parseExpr());
          while (peek().k == Tok::K::Comma) {
            next();
            items.push_back(parseExpr());
          }
        }
        if (peek().k != Tok::K::RBrk) throw LangError("expected ']'", peek().pos);
        next();
        SExpr list;
        list.head = "[]";
        list.pos = p;
        for (auto it = items.rbegin(); it != items.rend(); ++it) {
          SExpr cons;
          cons.head = ":";
          cons.pos = it->pos;
          cons.args = {std::move(*it), std::move(list)};
          list = std::move(cons);
        }
        return list;
      }
      default:
        throw LangError("expected an expression, found '" + t.s + "'", t.pos);
    }
  }

  static SExpr peano(long long n, SourcePos p) {
    SExpr e;
    e.head = "Z";
    e.pos = p;
    while (n-- > 0) {
      SExpr s;
      s.head = "S";
      s.pos = p;
      s.args = {std::move(e)};
      e = std::move(s);
    }
    return e;
  }

  // --- patterns --------------------------------------------------------------

  Pattern exprToPattern(const SExpr& e) {
    Pattern p;
    p.pos = e.pos;
    p.args.reserve(e.args.size());
    for (auto& a : e.args) p.args.push_back(exprToPattern(a));
    if (e.head == ":" || e.head == "[]" ||
        isupper(static_cast<unsigned char>(e.head[0]))) {
      p.kind = Pattern::Kind::Ctor;
      p.name = e.head;
      return p;
    }
    if (e.head == "_" && e.args.empty()) {
      p.kind = Pattern::Kind::Var;
      p.name = "%w" + std::to_string(++wild_);
      return p;
    }
    if (isIdentStart(e.head[0]) && e.args.empty()) {
      p.kind = Pattern::Kind::Var;
      p.name = e.head;
      return p;
    }
    // Anything else that is applied is a defined-operation (functional)
    // pattern; compilation checks the operation actually exists.
    if (e.args.empty())
      throw LangError("invalid pattern '" + e.head + "'", e.pos);
    p.kind = Pattern::Kind::OpApp;
    p.name = e.head;
    return p;
  }

  // --- types -----------------------------------------------------------------

  Type parseTypeAtom() {
    const Tok& t = peek();
    switch (t.k) {
      case Tok::K::UId: {
        Type ty;
        ty.head = t.s;
        next();
        return ty;
      }
      case Tok::K::LId: {
        if (isKeyword(t.s)) throw LangError("unexpected keyword in type", t.pos);
        Type ty;
        ty.head = t.s;
        ty.var = true;
        next();
        return ty;
      }
      case Tok::K::LBrk: {
        next();
        Type el = parseTypeArrow();
        if (peek().k != Tok::K::RBrk) throw LangError("expected ']' in type", peek().pos);
        next();
        Type ty;
        ty.head = "[]";
        ty.args = {std::move(el)};
        return ty;
      }
      case Tok::K::LPar: {
        next();
        Type inner = parseTypeArrow();
        if (peek().k != Tok::K::RPar) throw LangError("expected ')' in type", peek().pos);
        next();
        return inner;
      }
      default:
        throw LangError("expected a type", t.pos);
    }
  }

  bool atTypeAtomStart() const {
    const Tok& t = peek();
    return (t.k == Tok::K::UId) || (t.k == Tok::K::LId && !isKeyword(t.s)) ||
           t.k == Tok::K::LBrk || t.k == Tok::K::LPar;
  }

  Type parseTypeApp() {
    Type t = parseTypeAtom();
    if (!t.var && t.head != "[]") {
      while (atTypeAtomStart()) t.args.push_back(parseTypeAtom());
    }
    return t;
  }

  Type parseTypeArrow() {
    Type t = parseTypeApp();
    if (atOp("->")) {
      next();
      Type rest = parseTypeArrow();
      Type f;
      f.head = "->";
      f.args = {std::move(t), std::move(rest)};
      return f;
    }
    return t;
  }

  // --- declarations ------------------------------------------------------------

  std::vector<FreeDecl> parseFreeClause() {
    // callers consumed "where"
    std::vector<FreeDecl> frees;
    for (;;) {
      const Tok& t = peek();
      if (t.k != Tok::K::LId || isKeyword(t.s))
        throw LangError("expected a variable name in free declaration", t.pos);
      FreeDecl fd;
      fd.name = t.s;
      fd.pos = t.pos;
      next();
      expectOp("::");
      fd.type = parseTypeApp();
      frees.push_back(std::move(fd));
      if (peek().k == Tok::K::Comma) {
        next();
        continue;
      }
      break;
    }
    if (!atKw("free")) throw LangError("expected 'free' after variable declarations", peek().pos);
    next();
    return frees;
  }

  DataDecl parseData() {
    DataDecl d;
    d.pos = peek().pos;
    next();  // data
    if (peek().k != Tok::K::UId) throw LangError("expected type name after 'data'", peek().pos);
    d.name = peek().s;
    next();
    while (peek().k == Tok::K::LId && !isKeyword(peek().s)) {
      d.params.push_back(peek().s);
      next();
    }
    expectOp("=");
    for (;;) {
      if (peek().k != Tok::K::UId)
        throw LangError("expected constructor name", peek().pos);
      CtorDecl c;
      c.name = peek().s;
      c.pos = peek().pos;
      next();
      while (atTypeAtomStart()) c.argTypes.push_back(parseTypeAtom());
      d.ctors.push_back(std::move(c));
      if (atOp("|")) {
        next();
        continue;
      }
      break;
    }
    expectEnd();
    return d;
  }

  Sig parseSig() {
    Sig s;
    s.pos = peek().pos;
    if (peek().k == Tok::K::LPar) {
      next();
      if (peek().k != Tok::K::Op) throw LangError("expected operator name", peek().pos);
      s.name = peek().s;
      next();
      if (peek().k != Tok::K::RPar) throw LangError("expected ')'", peek().pos);
      next();
    } else if (peek().k == Tok::K::LId) {
      s.name = peek().s;
      next();
    } else {
      throw LangError("expected a name in type signature", peek().pos);
    }
    expectOp("::");
    Type full = parseTypeArrow();
    // flatten top-level arrows into argument types plus result
    Type* cur = &full;
    std::vector<Type> parts;
    while (!cur->var && cur->head == "->") {
      parts.push_back(cur->args[0]);
      cur = &cur->args[1];
    }
    s.result = *cur;
    s.argTypes = std::move(parts);
    expectEnd();
    return s;
  }

  Rule parseRule() {
    Rule r;
    r.pos = peek().pos;
    SExpr lhs = parseExpr();
    if (lhs.head.empty()) throw LangError("empty rule head", r.pos);
    bool opHead = !isIdentStart(lhs.head[0]);
    if (opHead && lhs.args.size() != 2)
      throw LangError("operator definition needs two arguments", lhs.pos);
    if (!opHead && isupper(static_cast<unsigned char>(lhs.head[0])))
      throw LangError("rule must define a function, not a constructor", lhs.pos);
    r.funcName = lhs.head;
    for (auto& a : lhs.args) r.params.push_back(exprToPattern(a));
    if (atOp("|")) {
      next();
      r.guards.push_back(parseExpr());
    }
    expectOp("=");
    r.rhs = parseExpr();
    if (atKw("where")) {
      next();
      r.frees = parseFreeClause();
    }
    expectEnd();
    return r;
  }

  Query parseQueryBody() {
    Query q;
    q.expr = parseExpr();
    if (atKw("where")) {
      next();
      q.frees = parseFreeClause();
    }
    expectEnd();
    return q;
  }

 private:
  std::vector<Tok> toks_;
  size_t idx_ = 0;
  int& wild_;
};

// Splits the source into items: an item starts in column zero and owns the
// indented lines that follow it.
std::vector<std::pair<int, std::string>> splitItems(const std::string& source) {
  std::vector<std::pair<int, std::string>> items;
  std::istringstream in(source);
  std::string line;
  int lineNo = 0;
  int itemLine = 0;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) items.emplace_back(itemLine, cur);
    cur.clear();
  };
  while (std::getline(in, line)) {
    ++lineNo;
    size_t cut = line.find("--");
    if (cut != std::string::npos) line.erase(cut);
    bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
    if (blank) continue;
    bool indented = line[0] == ' ' || line[0] == '\t';
    if (indented && !cur.empty()) {
      cur += "\n" + line;
    } else if (indented) {
      throw LangError("unexpected indentation", SourcePos{lineNo, 1});
    } else {
      flush();
      itemLine = lineNo;
      cur = line;
    }
  }
  flush();
  return items;
}

}  // namespace

Module parseModule(const std::string& source) {
  Module m;
  int wild = 0;
  std::map<std::string, size_t> funcIndex;
  for (auto& [lineNo, text] : splitItems(source)) {
    Parser p(tokenize(text, lineNo), wild);
    const Tok& first = p.peek();
    if (first.k == Tok::K::LId && first.s == "data") {
      m.data.push_back(p.parseData());
      continue;
    }
    // A signature is "name :: ..." or "(op) :: ...".
    bool sig = (first.k == Tok::K::LId && p.peek(1).k == Tok::K::Op && p.peek(1).s == "::") ||
               (first.k == Tok::K::LPar && p.peek(1).k == Tok::K::Op &&
                p.peek(2).k == Tok::K::RPar && p.peek(3).k == Tok::K::Op &&
                p.peek(3).s == "::");
    if (sig) {
      m.sigs.push_back(p.parseSig());
      continue;
    }
    Rule r = p.parseRule();
    auto it = funcIndex.find(r.funcName);
    if (it == funcIndex.end()) {
      FuncDef def;
      def.name = r.funcName;
      def.arity = r.params.size();
      funcIndex[def.name] = m.funcs.size();
      m.funcs.push_back(std::move(def));
      it = funcIndex.find(r.funcName);
    }
    FuncDef& def = m.funcs[it->second];
    if (def.arity != r.params.size())
      throw LangError("rules for '" + r.funcName + "' differ in arity", r.pos);
    def.rules.push_back(std::move(r));
  }
  return m;
}

Query parseQuery(const std::string& text) {
  int wild = 0;
  Parser p(tokenize(text, 1), wild);
  return p.parseQueryBody();
}

FreeDecl parseFreeDecl(const std::string& text) {
  int wild = 0;
  Parser p(tokenize(text, 1), wild);
  const std::string err = "expected 'name::Type'";
  FreeDecl fd;
  if (p.peek().k != Tok::K::LId) throw LangError(err, p.peek().pos);
  fd.name = p.peek().s;
  fd.pos = p.peek().pos;
  p.next();
  p.expectOp("::");
  fd.type = p.parseTypeApp();
  p.expectEnd();
  return fd;
}

}  // namespace fleng
