#pragma once

#include "fleng/ast.hpp"
#include "fleng/diag.hpp"

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fleng {

using VarId = int;

struct CaseBranch {
  int ctorId = -1;
  std::vector<VarId> binders;
};

// Core intermediate form. Pattern matching has been compiled to
// single-variable case trees, literals are constructor spines, overlapping
// rules are combined with Choice, and `where ... free` became Free.
struct CExpr {
  enum class K {
    Var,      // idx = variable
    Ctor,     // idx = ctor id, args = exactly arity arguments
    CtorRef,  // idx = ctor id, args = fewer than arity (partial application)
    App,      // idx = func id, args = at most arity arguments; full = call
    PApp,     // idx = func id; a function value holding args uncalled even
              // when saturated (applying it via ApplyTo triggers the call,
              // so each application site mints fresh identifiers)
    ApplyTo,  // args[0] = callee expression, args[1..] = arguments
    Case,     // idx = scrutinee variable; branches[i] matches args[i]
    Choice,   // args = {left, right}; freeChoice marks generator choices
    Free,     // args = {gen_1, .., gen_k, body}; freeVarIds has k entries
    Fail
  };
  K k = K::Fail;
  int idx = -1;
  bool freeChoice = false;
  std::vector<CExpr> args;
  std::vector<CaseBranch> branches;
  std::vector<VarId> freeVarIds;
  SourcePos pos;
};

struct CtorInfo {
  std::string name;
  int id = -1;
  int typeId = -1;
  int arity = 0;
  int indexInType = 0;
  std::vector<Type> argTypes;  // over the owning type's parameters
};

struct TypeInfo {
  std::string name;
  int id = -1;
  int numParams = 0;
  std::vector<int> ctorIds;  // declaration order
  int genFuncId = -1;        // generator: gen(g_1..g_k) for k type params
  int eqFuncId = -1;         // structural equality, two arguments
};

struct CoreFunc {
  std::string name;
  int arity = 0;
  CExpr body;
  int numVars = 0;  // params occupy 0..arity-1
  enum class Builtin { None, StrictUnify, LazyUnify, Eq, Cond } builtin = Builtin::None;
};

// Compiled program tables. Frozen while any evaluation is running:
// suspensions keep pointers into function bodies.
struct CoreProgram {
  std::vector<TypeInfo> types;
  std::vector<CtorInfo> ctors;
  std::vector<CoreFunc> funcs;
  std::unordered_map<std::string, int> typeByName;
  std::unordered_map<std::string, int> ctorByName;
  std::unordered_map<std::string, int> funcByName;
  std::unordered_map<std::string, Sig> sigs;

  int listTypeId = -1, nilCtorId = -1, consCtorId = -1;
  int boolTypeId = -1, trueCtorId = -1, falseCtorId = -1;
  int successCtorId = -1;
  int natTypeId = -1, zeroCtorId = -1, succCtorId = -1;

  const CtorInfo& ctor(int id) const { return ctors[size_t(id)]; }
  const TypeInfo& type(int id) const { return types[size_t(id)]; }
};

// Functions a query adds on top of a compiled program (the query body
// itself plus any new generator instances). Owned by the query; func ids
// beyond prog.funcs.size() index into `extra`. A synthetic constructor
// wraps each answer as (value, free_1 .. free_k) so the searched value and
// the bindings of the declared free variables travel together; core Ctor
// nodes reference it with idx == kAnswerCtor.
struct QueryUnit {
  std::vector<CoreFunc> extra;
  int rootFuncId = -1;
  CtorInfo answerCtor;
  std::vector<std::string> freeNames;
};

inline constexpr int kAnswerCtor = -2;

}  // namespace fleng
