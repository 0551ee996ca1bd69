#pragma once

#include "fleng/diag.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fleng {

// A type expression: either a variable ("a") or a constructor applied to
// arguments. The list type is spelled "[]" internally, so [Bool] is
// Type{"[]", {Bool}}.
struct Type {
  std::string head;
  bool var = false;
  std::vector<Type> args;

  bool isGround() const {
    if (var) return false;
    for (auto& a : args)
      if (!a.isGround()) return false;
    return true;
  }
  std::string str() const;
  // Stable key for ground types, used to memoize generator instances.
  std::string key() const;
};

// Surface expressions are kept in spine form: a head name applied to zero
// or more argument expressions. Heads are resolved to variables, functions
// or constructors during compilation. List and number literals are
// desugared by the parser, so ":" / "[]" / "S" / "Z" spines appear here.
struct SExpr {
  std::string head;
  std::vector<SExpr> args;
  SourcePos pos;
};

struct Pattern {
  enum class Kind {
    Var,   // lowercase name or wildcard (wildcards get fresh names)
    Ctor,  // constructor applied to sub-patterns
    OpApp  // defined operation applied to sub-patterns: a functional pattern
  };
  Kind kind = Kind::Var;
  std::string name;
  std::vector<Pattern> args;
  SourcePos pos;

  bool containsOpApp() const {
    if (kind == Kind::OpApp) return true;
    for (auto& a : args)
      if (a.containsOpApp()) return true;
    return false;
  }
};

struct CtorDecl {
  std::string name;
  std::vector<Type> argTypes;
  SourcePos pos;
};

struct DataDecl {
  std::string name;
  std::vector<std::string> params;
  std::vector<CtorDecl> ctors;
  SourcePos pos;
};

struct Sig {
  std::string name;
  std::vector<Type> argTypes;
  Type result;
  SourcePos pos;
};

struct FreeDecl {
  std::string name;
  Type type;
  SourcePos pos;
};

struct Rule {
  std::string funcName;
  std::vector<Pattern> params;
  // Guards are applied left to right; each wraps the right-hand side in a
  // further `cond`. Functional-pattern desugaring prepends unification
  // guards here.
  std::vector<SExpr> guards;
  SExpr rhs;
  std::vector<FreeDecl> frees;
  SourcePos pos;
};

struct FuncDef {
  std::string name;
  size_t arity = 0;
  std::vector<Rule> rules;
};

struct Module {
  std::vector<DataDecl> data;
  std::vector<Sig> sigs;
  std::vector<FuncDef> funcs;
};

// A query: an expression plus optional free-variable declarations
// ("e where x::T, y::T free").
struct Query {
  SExpr expr;
  std::vector<FreeDecl> frees;
};

std::string prettyType(const Type&);
std::string prettyExpr(const SExpr&);
std::string prettyPattern(const Pattern&);

}  // namespace fleng
