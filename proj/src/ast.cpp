#include "fleng/ast.hpp"

#include <sstream>

namespace fleng {

std::string Type::str() const {
  if (var) return head;
  if (head == "[]") return "[" + (args.empty() ? "" : args[0].str()) + "]";
  std::string s = head;
  for (auto& a : args) {
    bool atom = a.var || a.args.empty() || a.head == "[]";
    s += " " + (atom ? a.str() : "(" + a.str() + ")");
  }
  return s;
}

std::string Type::key() const {
  std::string s = head;
  for (auto& a : args) s += "(" + a.key() + ")";
  return s;
}

std::string prettyType(const Type& t) { return t.str(); }

namespace {

bool isOpName(const std::string& s) {
  if (s == "[]") return false;  // the nil constructor reads as a plain name
  return !s.empty() && !(isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_');
}

void printExpr(std::ostringstream& out, const SExpr& e, bool atom);

void printArg(std::ostringstream& out, const SExpr& e) { printExpr(out, e, true); }

void printExpr(std::ostringstream& out, const SExpr& e, bool atom) {
  if (isOpName(e.head) && e.args.size() == 2) {
    if (atom) out << "(";
    printArg(out, e.args[0]);
    out << " " << e.head << " ";
    printArg(out, e.args[1]);
    if (atom) out << ")";
    return;
  }
  std::string head = isOpName(e.head) ? "(" + e.head + ")" : e.head;
  if (e.args.empty()) {
    out << head;
    return;
  }
  if (atom) out << "(";
  out << head;
  for (auto& a : e.args) {
    out << " ";
    printArg(out, a);
  }
  if (atom) out << ")";
}

}  // namespace

std::string prettyExpr(const SExpr& e) {
  std::ostringstream out;
  printExpr(out, e, false);
  return out.str();
}

namespace {
SExpr patternToExpr(const Pattern& q) {
  SExpr r;
  r.head = q.name;
  r.pos = q.pos;
  for (auto& a : q.args) r.args.push_back(patternToExpr(a));
  return r;
}
}  // namespace

std::string prettyPattern(const Pattern& p) { return prettyExpr(patternToExpr(p)); }

}  // namespace fleng
