#include "fleng/transform.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace fleng {
namespace {

bool isUpperName(const std::string& s) {
  return !s.empty() && isupper(static_cast<unsigned char>(s[0]));
}
bool isCtorName(const std::string& s) { return s == ":" || s == "[]" || isUpperName(s); }

SExpr patternToExpr(const Pattern& p) {
  SExpr e;
  e.head = p.name;
  e.pos = p.pos;
  for (auto& a : p.args) e.args.push_back(patternToExpr(a));
  return e;
}

// ---------------------------------------------------------------------------
// Typing-lite: unification over surface types, used only to assign ground
// types to the free variables synthesized from functional patterns.

using Subst = std::unordered_map<std::string, Type>;

Type resolveT(Type t, const Subst& s) {
  while (t.var) {
    auto it = s.find(t.head);
    if (it == s.end()) break;
    t = it->second;
  }
  return t;
}

Type applySubst(const Type& t, const Subst& s) {
  Type r = resolveT(t, s);
  if (r.var) return r;
  for (auto& a : r.args) a = applySubst(a, s);
  return r;
}

bool occursIn(const std::string& name, const Type& t, const Subst& s) {
  Type r = resolveT(t, s);
  if (r.var) return r.head == name;
  for (auto& a : r.args)
    if (occursIn(name, a, s)) return true;
  return false;
}

void unifyTypes(const Type& a0, const Type& b0, Subst& s, SourcePos pos) {
  Type a = resolveT(a0, s), b = resolveT(b0, s);
  if (a.var && b.var && a.head == b.head) return;
  if (a.var) {
    if (occursIn(a.head, b, s)) throw LangError("cannot construct infinite type", pos);
    s[a.head] = b;
    return;
  }
  if (b.var) {
    unifyTypes(b, a, s, pos);
    return;
  }
  if (a.head != b.head || a.args.size() != b.args.size())
    throw LangError("type mismatch: " + a.str() + " vs " + b.str(), pos);
  for (size_t i = 0; i < a.args.size(); ++i) unifyTypes(a.args[i], b.args[i], s, pos);
}

Type freshenType(const Type& t, int stamp) {
  Type r = t;
  if (r.var) {
    r.head += "%" + std::to_string(stamp);
    return r;
  }
  for (auto& a : r.args) a = freshenType(a, stamp);
  return r;
}

struct CtorSig {
  std::vector<Type> argTypes;
  Type result;
};

// Constructor and operation signatures visible to the pattern typer.
struct TypeTables {
  std::unordered_map<std::string, CtorSig> ctors;
  std::unordered_map<std::string, Sig> ops;

  static TypeTables build(const Module& m) {
    TypeTables t;
    // built-in lists
    Type a;
    a.head = "a";
    a.var = true;
    Type listA;
    listA.head = "[]";
    listA.args = {a};
    t.ctors["[]"] = {{}, listA};
    t.ctors[":"] = {{a, listA}, listA};
    for (auto& d : m.data) {
      Type res;
      res.head = d.name;
      for (auto& p : d.params) {
        Type v;
        v.head = p;
        v.var = true;
        res.args.push_back(v);
      }
      for (auto& c : d.ctors) t.ctors[c.name] = {c.argTypes, res};
    }
    for (auto& s : m.sigs) t.ops[s.name] = s;
    return t;
  }
};

class PatternTyper {
 public:
  explicit PatternTyper(const TypeTables& tables) : tables_(tables) {}

  // One shared instantiation for a whole signature, so parameters that
  // mention the same signature variable stay connected.
  std::vector<Type> instantiateSig(const std::vector<Type>& argTypes) {
    int stamp = ++counter_;
    std::vector<Type> out;
    for (auto& a : argTypes) out.push_back(freshenType(a, stamp));
    return out;
  }

  void walk(const Pattern& p, const Type& expected) {
    switch (p.kind) {
      case Pattern::Kind::Var: {
        auto it = varTypes_.find(p.name);
        if (it == varTypes_.end()) {
          varTypes_[p.name] = expected;
        } else {
          unifyTypes(it->second, expected, subst_, p.pos);
        }
        return;
      }
      case Pattern::Kind::Ctor: {
        auto it = tables_.ctors.find(p.name);
        if (it == tables_.ctors.end())
          throw LangError("unknown constructor '" + p.name + "' in pattern", p.pos);
        CtorSig cs = instantiate(it->second.argTypes, it->second.result);
        if (cs.argTypes.size() != p.args.size())
          throw LangError("constructor '" + p.name + "' expects " +
                              std::to_string(cs.argTypes.size()) + " arguments",
                          p.pos);
        unifyTypes(cs.result, expected, subst_, p.pos);
        for (size_t i = 0; i < p.args.size(); ++i) walk(p.args[i], cs.argTypes[i]);
        return;
      }
      case Pattern::Kind::OpApp: {
        auto it = tables_.ops.find(p.name);
        if (it == tables_.ops.end())
          throw LangError("functional pattern uses operation '" + p.name +
                              "' without a type signature; its variables cannot be typed",
                          p.pos);
        CtorSig cs = instantiate(it->second.argTypes, it->second.result);
        if (p.args.size() > cs.argTypes.size())
          throw LangError("operation '" + p.name + "' applied to too many arguments", p.pos);
        if (p.args.size() < cs.argTypes.size())
          throw LangError("functional pattern applies '" + p.name + "' only partially", p.pos);
        unifyTypes(cs.result, expected, subst_, p.pos);
        for (size_t i = 0; i < p.args.size(); ++i) walk(p.args[i], cs.argTypes[i]);
        return;
      }
    }
  }

  Type freshVar() {
    Type v;
    v.head = "%t" + std::to_string(++counter_);
    v.var = true;
    return v;
  }

  // Ground type of variable v, or throws using fname for the message.
  Type groundTypeOf(const std::string& v, const std::string& fname, SourcePos pos) {
    auto it = varTypes_.find(v);
    if (it == varTypes_.end())
      throw LangError("internal: untyped pattern variable " + v, pos);
    Type t = applySubst(it->second, subst_);
    if (!t.isGround())
      throw LangError("cannot infer a ground type for pattern variable '" + v +
                          "'; add a type signature for '" + fname + "'",
                      pos);
    return t;
  }

  bool hasVar(const std::string& v) const { return varTypes_.count(v) > 0; }

 private:
  CtorSig instantiate(const std::vector<Type>& args, const Type& res) {
    int stamp = ++counter_;
    CtorSig out;
    for (auto& a : args) out.argTypes.push_back(freshenType(a, stamp));
    out.result = freshenType(res, stamp);
    return out;
  }

  const TypeTables& tables_;
  Subst subst_;
  std::unordered_map<std::string, Type> varTypes_;
  int counter_ = 0;
};

void collectPatternVars(const Pattern& p, std::vector<std::string>& order,
                        std::set<std::string>& seen) {
  if (p.kind == Pattern::Kind::Var) {
    if (seen.insert(p.name).second) order.push_back(p.name);
    return;
  }
  for (auto& a : p.args) collectPatternVars(a, order, seen);
}

}  // namespace

void desugarFunctionalPatterns(Module& m) {
  TypeTables tables = TypeTables::build(m);
  int fresh = 0;
  for (auto& def : m.funcs) {
    for (auto& rule : def.rules) {
      bool any = false;
      for (auto& p : rule.params)
        if (p.containsOpApp()) any = true;
      if (!any) continue;

      auto sigIt = tables.ops.find(def.name);
      PatternTyper typer(tables);

      // Ordinary pattern variables of this rule bind occurrences inside the
      // functional patterns, so type the whole parameter list.
      std::vector<Type> expected;
      if (sigIt != tables.ops.end())
        expected = typer.instantiateSig(sigIt->second.argTypes);
      while (expected.size() < rule.params.size()) expected.push_back(typer.freshVar());
      for (size_t j = 0; j < rule.params.size(); ++j) typer.walk(rule.params[j], expected[j]);

      // Variables already bound by the remaining ordinary parameters.
      std::set<std::string> ordinary;
      for (auto& p : rule.params) {
        if (p.containsOpApp()) continue;
        std::vector<std::string> order;
        collectPatternVars(p, order, ordinary);
      }
      for (auto& fd : rule.frees) ordinary.insert(fd.name);

      std::vector<SExpr> unifyGuards;
      std::vector<FreeDecl> newFrees;
      std::set<std::string> declared;
      for (auto& p : rule.params) {
        if (!p.containsOpApp()) continue;
        std::string y = "%fp" + std::to_string(++fresh);
        SExpr lhs = patternToExpr(p);
        SExpr yvar;
        yvar.head = y;
        yvar.pos = p.pos;
        SExpr g;
        g.head = "=:<=";
        g.pos = p.pos;
        g.args = {std::move(lhs), std::move(yvar)};
        unifyGuards.push_back(std::move(g));

        std::vector<std::string> order;
        std::set<std::string> seen;
        collectPatternVars(p, order, seen);
        for (auto& v : order) {
          if (ordinary.count(v) || declared.count(v)) continue;
          declared.insert(v);
          FreeDecl fd;
          fd.name = v;
          fd.pos = p.pos;
          fd.type = typer.groundTypeOf(v, def.name, p.pos);
          newFrees.push_back(std::move(fd));
        }
        Pattern replacement;
        replacement.kind = Pattern::Kind::Var;
        replacement.name = y;
        replacement.pos = p.pos;
        p = std::move(replacement);
      }
      // Unification guards run before any user guard.
      for (auto it = rule.guards.begin(); it != rule.guards.end(); ++it)
        unifyGuards.push_back(std::move(*it));
      rule.guards = std::move(unifyGuards);
      for (auto& fd : newFrees) rule.frees.push_back(std::move(fd));
    }
  }
}

// ---------------------------------------------------------------------------
// Core compilation

namespace {

class Compiler {
 public:
  explicit Compiler(CoreProgram& prog) : prog_(prog) {}

  void registerBuiltins() {
    addBuiltin("=:=", 2, CoreFunc::Builtin::StrictUnify);
    addBuiltin("=:<=", 2, CoreFunc::Builtin::LazyUnify);
    addBuiltin("==", 2, CoreFunc::Builtin::Eq);
    addBuiltin("cond", 2, CoreFunc::Builtin::Cond);
    // `failed` is an ordinary function whose body is failure.
    CoreFunc failed;
    failed.name = "failed";
    failed.arity = 0;
    failed.body.k = CExpr::K::Fail;
    addFunc(std::move(failed));
    // `?` as a value (partial application); saturated uses compile to Choice.
    CoreFunc choice;
    choice.name = "?";
    choice.arity = 2;
    choice.numVars = 2;
    choice.body.k = CExpr::K::Choice;
    choice.body.args.resize(2);
    choice.body.args[0].k = CExpr::K::Var;
    choice.body.args[0].idx = 0;
    choice.body.args[1].k = CExpr::K::Var;
    choice.body.args[1].idx = 1;
    addFunc(std::move(choice));
  }

  void registerListType() {
    TypeInfo list;
    list.name = "[]";
    list.numParams = 1;
    int tid = addType(std::move(list));
    Type a;
    a.head = "a";
    a.var = true;
    Type listA;
    listA.head = "[]";
    listA.args = {a};
    prog_.nilCtorId = addCtor(tid, "[]", {});
    prog_.consCtorId = addCtor(tid, ":", {a, listA});
    prog_.listTypeId = tid;
  }

  void registerData(const Module& m) {
    for (auto& d : m.data) {
      if (prog_.typeByName.count(d.name))
        throw LangError("duplicate data declaration '" + d.name + "'", d.pos);
      std::set<std::string> params(d.params.begin(), d.params.end());
      if (params.size() != d.params.size())
        throw LangError("duplicate type parameter in '" + d.name + "'", d.pos);
      TypeInfo t;
      t.name = d.name;
      t.numParams = int(d.params.size());
      addType(std::move(t));
    }
    // Second pass: constructors (argument types may mention any data type).
    for (auto& d : m.data) {
      int tid = prog_.typeByName.at(d.name);
      for (auto& c : d.ctors) {
        if (prog_.ctorByName.count(c.name))
          throw LangError("duplicate constructor '" + c.name + "'", c.pos);
        for (auto& at : c.argTypes) checkTypeExpr(at, d.params, c.pos);
        addCtor(tid, c.name, c.argTypes);
      }
    }
    auto note = [&](const char* ty, const char* ct, int& tslot, int& cslot) {
      auto t = prog_.typeByName.find(ty);
      auto c = prog_.ctorByName.find(ct);
      if (t != prog_.typeByName.end()) tslot = t->second;
      if (c != prog_.ctorByName.end()) cslot = c->second;
    };
    int dummy = -1;
    note("Bool", "True", prog_.boolTypeId, prog_.trueCtorId);
    note("Bool", "False", dummy, prog_.falseCtorId);
    note("Nat", "Z", prog_.natTypeId, prog_.zeroCtorId);
    note("Nat", "S", dummy, prog_.succCtorId);
    auto sc = prog_.ctorByName.find("Success");
    if (sc != prog_.ctorByName.end()) prog_.successCtorId = sc->second;
  }

  void registerSigs(const Module& m) {
    for (auto& s : m.sigs) {
      if (prog_.sigs.count(s.name))
        throw LangError("duplicate type signature for '" + s.name + "'", s.pos);
      prog_.sigs[s.name] = s;
    }
  }

  void declareFuncs(const Module& m) {
    for (auto& d : m.funcs) {
      if (prog_.funcByName.count(d.name))
        throw LangError("duplicate definition of '" + d.name + "'",
                        d.rules.empty() ? SourcePos{} : d.rules[0].pos);
      if (prog_.ctorByName.count(d.name))
        throw LangError("'" + d.name + "' is already a constructor",
                        d.rules.empty() ? SourcePos{} : d.rules[0].pos);
      CoreFunc f;
      f.name = d.name;
      f.arity = int(d.arity);
      addFunc(std::move(f));
    }
    for (auto& s : m.sigs) {
      auto it = prog_.funcByName.find(s.name);
      if (it != prog_.funcByName.end() &&
          prog_.funcs[size_t(it->second)].arity > int(s.argTypes.size()))
        throw LangError("type signature for '" + s.name + "' has fewer arguments than its rules",
                        s.pos);
    }
  }

  void compileFuncs(const Module& m) {
    for (auto& d : m.funcs) {
      int id = prog_.funcByName.at(d.name);
      compileFunc(prog_.funcs[size_t(id)], d);
    }
  }

  // Synthesizes %and2 (strict in its first argument only) plus, for every
  // data type, a free-variable generator and structural equality.
  // Ids are reserved before function bodies compile (free variables need
  // their types' generators); the derived bodies are filled in afterwards.
  void reserveDerived() {
    if (prog_.trueCtorId >= 0) {
      CoreFunc a2;
      a2.name = "%and2";
      a2.arity = 2;
      a2.numVars = 2;
      a2.body = mkCase(0, {{prog_.trueCtorId, {}, mkVar(1)},
                           {prog_.falseCtorId, {}, mkCtorE(prog_.falseCtorId, {})}});
      and2Id_ = addFunc(std::move(a2));
    }
    // Reserve ids first so recursive types can reference their own
    // generator and equality.
    for (auto& t : prog_.types) {
      if (!genPossible(t)) continue;
      CoreFunc g;
      g.name = "%gen:" + t.name;
      g.arity = t.numParams;
      t.genFuncId = addFunc(std::move(g));
    }
    if (and2Id_ >= 0) {
      for (auto& t : prog_.types) {
        CoreFunc e;
        e.name = "%eq:" + t.name;
        e.arity = 2;
        t.eqFuncId = addFunc(std::move(e));
      }
    }
  }

  void fillDerived() {
    for (auto& t : prog_.types) {
      if (t.genFuncId >= 0) prog_.funcs[size_t(t.genFuncId)] = deriveGenerator(t);
      if (t.eqFuncId >= 0) prog_.funcs[size_t(t.eqFuncId)] = deriveEq(t);
    }
  }

  // --- queries ---------------------------------------------------------------

  QueryUnit buildQuery(const Query& q) {
    QueryUnit unit;
    unit.answerCtor.name = "%answer";
    unit.answerCtor.id = kAnswerCtor;
    unit.answerCtor.typeId = kAnswerCtor;
    unit.answerCtor.arity = int(1 + q.frees.size());

    Scope scope;
    int nextVar = 0;
    std::vector<VarId> freeIds;
    for (auto& fd : q.frees) {
      if (scope.count(fd.name)) throw LangError("duplicate free variable '" + fd.name + "'", fd.pos);
      VarId v = nextVar++;
      scope[fd.name] = v;
      freeIds.push_back(v);
      unit.freeNames.push_back(fd.name);
    }
    CExpr answer;
    answer.k = CExpr::K::Ctor;
    answer.idx = kAnswerCtor;
    answer.args.push_back(compileExpr(q.expr, scope, nextVar));
    for (VarId v : freeIds) answer.args.push_back(mkVar(v));

    CExpr body;
    if (q.frees.empty()) {
      body = std::move(answer);
    } else {
      body.k = CExpr::K::Free;
      body.freeVarIds = freeIds;
      for (auto& fd : q.frees) body.args.push_back(generatorCall(fd.type, fd.pos));
      body.args.push_back(std::move(answer));
    }
    CoreFunc root;
    root.name = "%query";
    root.arity = 0;
    root.numVars = nextVar;
    root.body = std::move(body);
    unit.extra.push_back(std::move(root));
    unit.rootFuncId = int(prog_.funcs.size());
    return unit;
  }

 private:
  using Scope = std::unordered_map<std::string, VarId>;

  // --- small core builders ---------------------------------------------------

  static CExpr mkVar(VarId v) {
    CExpr e;
    e.k = CExpr::K::Var;
    e.idx = v;
    return e;
  }
  static CExpr mkCtorE(int ctorId, std::vector<CExpr> args) {
    CExpr e;
    e.k = CExpr::K::Ctor;
    e.idx = ctorId;
    e.args = std::move(args);
    return e;
  }
  static CExpr mkApp(int funcId, std::vector<CExpr> args) {
    CExpr e;
    e.k = CExpr::K::App;
    e.idx = funcId;
    e.args = std::move(args);
    return e;
  }
  static CExpr mkChoiceE(CExpr l, CExpr r, bool free) {
    CExpr e;
    e.k = CExpr::K::Choice;
    e.freeChoice = free;
    e.args.push_back(std::move(l));
    e.args.push_back(std::move(r));
    return e;
  }
  struct BranchSpec {
    int ctorId;
    std::vector<VarId> binders;
    CExpr body;
  };
  static CExpr mkCase(VarId scrut, std::vector<BranchSpec> bs) {
    CExpr e;
    e.k = CExpr::K::Case;
    e.idx = scrut;
    for (auto& b : bs) {
      e.branches.push_back({b.ctorId, std::move(b.binders)});
      e.args.push_back(std::move(b.body));
    }
    return e;
  }

  // --- registration ------------------------------------------------------------

  int addType(TypeInfo t) {
    t.id = int(prog_.types.size());
    prog_.typeByName[t.name] = t.id;
    prog_.types.push_back(std::move(t));
    return prog_.types.back().id;
  }
  int addCtor(int typeId, const std::string& name, std::vector<Type> argTypes) {
    CtorInfo c;
    c.name = name;
    c.id = int(prog_.ctors.size());
    c.typeId = typeId;
    c.arity = int(argTypes.size());
    c.argTypes = std::move(argTypes);
    c.indexInType = int(prog_.types[size_t(typeId)].ctorIds.size());
    prog_.types[size_t(typeId)].ctorIds.push_back(c.id);
    prog_.ctorByName[name] = c.id;
    prog_.ctors.push_back(std::move(c));
    return prog_.ctors.back().id;
  }
  int addFunc(CoreFunc f) {
    int id = int(prog_.funcs.size());
    prog_.funcByName[f.name] = id;
    prog_.funcs.push_back(std::move(f));
    return id;
  }
  void addBuiltin(const std::string& name, int arity, CoreFunc::Builtin b) {
    CoreFunc f;
    f.name = name;
    f.arity = arity;
    f.builtin = b;
    addFunc(std::move(f));
  }

  void checkTypeExpr(const Type& t, const std::vector<std::string>& params, SourcePos pos) {
    if (t.var) {
      if (std::find(params.begin(), params.end(), t.head) == params.end())
        throw LangError("unknown type variable '" + t.head + "'", pos);
      return;
    }
    if (t.head == "->") {
      for (auto& a : t.args) checkTypeExpr(a, params, pos);
      return;
    }
    auto it = prog_.typeByName.find(t.head);
    if (it == prog_.typeByName.end())
      throw LangError("unknown type '" + t.head + "'", pos);
    if (prog_.types[size_t(it->second)].numParams != int(t.args.size()))
      throw LangError("type '" + t.head + "' applied to wrong number of arguments", pos);
    for (auto& a : t.args) checkTypeExpr(a, params, pos);
  }

  static bool typeUsesArrow(const Type& t) {
    if (!t.var && t.head == "->") return true;
    for (auto& a : t.args)
      if (typeUsesArrow(a)) return true;
    return false;
  }
  bool genPossible(const TypeInfo& t) const {
    for (int cid : t.ctorIds)
      for (auto& at : prog_.ctors[size_t(cid)].argTypes)
        if (typeUsesArrow(at)) return false;
    return true;
  }

  // --- expressions ---------------------------------------------------------

  CExpr compileExpr(const SExpr& e, const Scope& scope, int& nextVar) {
    // local variables shadow functions and constructors
    auto vit = scope.find(e.head);
    if (vit != scope.end()) {
      if (e.args.empty()) return mkVar(vit->second);
      CExpr app;
      app.k = CExpr::K::ApplyTo;
      app.pos = e.pos;
      app.args.push_back(mkVar(vit->second));
      for (auto& a : e.args) app.args.push_back(compileExpr(a, scope, nextVar));
      return app;
    }
    if (e.head == "?" && e.args.size() == 2) {
      CExpr c = mkChoiceE(compileExpr(e.args[0], scope, nextVar),
                          compileExpr(e.args[1], scope, nextVar), false);
      c.pos = e.pos;
      return c;
    }
    if (isCtorName(e.head)) {
      auto it = prog_.ctorByName.find(e.head);
      if (it == prog_.ctorByName.end())
        throw LangError("unknown constructor '" + e.head + "'", e.pos);
      const CtorInfo& info = prog_.ctors[size_t(it->second)];
      if (int(e.args.size()) > info.arity)
        throw LangError("constructor '" + e.head + "' applied to too many arguments", e.pos);
      CExpr c;
      c.k = int(e.args.size()) == info.arity ? CExpr::K::Ctor : CExpr::K::CtorRef;
      c.idx = info.id;
      c.pos = e.pos;
      for (auto& a : e.args) c.args.push_back(compileExpr(a, scope, nextVar));
      return c;
    }
    auto fit = prog_.funcByName.find(e.head);
    if (fit == prog_.funcByName.end())
      throw LangError("unknown name '" + e.head + "'", e.pos);
    const CoreFunc& fn = prog_.funcs[size_t(fit->second)];
    size_t arity = size_t(fn.arity);
    if (e.args.size() == arity) {
      CExpr app = mkApp(fit->second, {});
      app.pos = e.pos;
      for (auto& a : e.args) app.args.push_back(compileExpr(a, scope, nextVar));
      return app;
    }
    if (e.args.size() < arity) {
      CExpr p;
      p.k = CExpr::K::PApp;
      p.idx = fit->second;
      p.pos = e.pos;
      for (auto& a : e.args) p.args.push_back(compileExpr(a, scope, nextVar));
      return p;
    }
    CExpr call = mkApp(fit->second, {});
    call.pos = e.pos;
    for (size_t i = 0; i < arity; ++i) call.args.push_back(compileExpr(e.args[i], scope, nextVar));
    CExpr app;
    app.k = CExpr::K::ApplyTo;
    app.pos = e.pos;
    app.args.push_back(std::move(call));
    for (size_t i = arity; i < e.args.size(); ++i)
      app.args.push_back(compileExpr(e.args[i], scope, nextVar));
    return app;
  }

  // An expression denoting a nullary function value that mints a fresh free
  // variable of type t each time it is applied.
  CExpr generatorFn(const Type& t, const Scope& paramGens, SourcePos pos) {
    if (t.var) {
      auto it = paramGens.find(t.head);
      if (it == paramGens.end())
        throw LangError("internal: unbound type parameter '" + t.head + "'", pos);
      return mkVar(it->second);
    }
    if (t.head == "->")
      throw LangError("cannot create a free variable of a function type", pos);
    auto it = prog_.typeByName.find(t.head);
    if (it == prog_.typeByName.end()) throw LangError("unknown type '" + t.head + "'", pos);
    const TypeInfo& info = prog_.types[size_t(it->second)];
    if (info.genFuncId < 0)
      throw LangError("type '" + t.head + "' contains functions; cannot enumerate it", pos);
    if (info.numParams != int(t.args.size()))
      throw LangError("type '" + t.head + "' applied to wrong number of arguments", pos);
    CExpr p;
    p.k = CExpr::K::PApp;
    p.idx = info.genFuncId;
    p.pos = pos;
    for (auto& a : t.args) p.args.push_back(generatorFn(a, paramGens, pos));
    return p;
  }

  // A call minting a fresh free variable of ground type t at this site.
  CExpr generatorCall(const Type& t, SourcePos pos) {
    if (!t.isGround())
      throw LangError("free variable needs a ground type, got '" + t.str() + "'", pos);
    Scope empty;
    CExpr call;
    call.k = CExpr::K::ApplyTo;
    call.pos = pos;
    call.args.push_back(generatorFn(t, empty, pos));
    return call;
  }

  // --- derivations -----------------------------------------------------------

  CoreFunc deriveGenerator(const TypeInfo& t) {
    CoreFunc g;
    g.name = "%gen:" + t.name;
    g.arity = t.numParams;
    int nextVar = t.numParams;
    // Constructor argument types refer to declaration parameters by name;
    // parameter i of the generator is the generator function for that name.
    Scope paramGens;
    std::vector<std::string> declParams = declParamsFor(t);
    for (int i = 0; i < t.numParams; ++i)
      paramGens[i < int(declParams.size()) ? declParams[size_t(i)]
                                           : "%p" + std::to_string(i)] = VarId(i);

    std::vector<CExpr> alts;
    for (int cid : t.ctorIds) {
      const CtorInfo& c = prog_.ctors[size_t(cid)];
      CExpr ce;
      ce.k = CExpr::K::Ctor;
      ce.idx = cid;
      for (auto& at : c.argTypes) {
        CExpr call;
        call.k = CExpr::K::ApplyTo;
        call.args.push_back(generatorFn(at, paramGens, SourcePos{}));
        ce.args.push_back(std::move(call));
      }
      alts.push_back(std::move(ce));
    }
    CExpr body = std::move(alts.back());
    for (size_t i = alts.size() - 1; i-- > 0;)
      body = mkChoiceE(std::move(alts[i]), std::move(body), true);
    g.body = std::move(body);
    g.numVars = nextVar;
    return g;
  }

  std::vector<std::string> declParamsFor(const TypeInfo& t) const {
    // List is synthesized with parameter "a"; data declarations carry their
    // own names inside constructor argument types.
    if (t.id == prog_.listTypeId) return {"a"};
    auto it = declParams_.find(t.name);
    return it == declParams_.end() ? std::vector<std::string>{} : it->second;
  }

 public:
  void noteDeclParams(const Module& m) {
    for (auto& d : m.data) declParams_[d.name] = d.params;
  }

 private:
  CoreFunc deriveEq(const TypeInfo& t) {
    CoreFunc e;
    e.name = "%eq:" + t.name;
    e.arity = 2;
    int nextVar = 2;
    int eqBuiltin = prog_.funcByName.at("==");
    std::vector<BranchSpec> outer;
    for (int cidL : t.ctorIds) {
      const CtorInfo& cl = prog_.ctors[size_t(cidL)];
      std::vector<VarId> lBinders;
      for (int i = 0; i < cl.arity; ++i) lBinders.push_back(nextVar++);
      std::vector<BranchSpec> inner;
      for (int cidR : t.ctorIds) {
        const CtorInfo& cr = prog_.ctors[size_t(cidR)];
        std::vector<VarId> rBinders;
        for (int i = 0; i < cr.arity; ++i) rBinders.push_back(nextVar++);
        CExpr body;
        if (cidL != cidR) {
          body = mkCtorE(prog_.falseCtorId, {});
        } else {
          body = mkCtorE(prog_.trueCtorId, {});
          for (int i = cl.arity - 1; i >= 0; --i) {
            CExpr cmp = mkApp(eqBuiltin, {mkVar(lBinders[size_t(i)]), mkVar(rBinders[size_t(i)])});
            if (i == cl.arity - 1)
              body = std::move(cmp);
            else
              body = mkApp(and2Id_, {std::move(cmp), std::move(body)});
          }
        }
        inner.push_back({cidR, std::move(rBinders), std::move(body)});
      }
      outer.push_back({cidL, std::move(lBinders), mkCase(1, std::move(inner))});
    }
    e.body = mkCase(0, std::move(outer));
    e.numVars = nextVar;
    return e;
  }

  // --- rules → case trees -----------------------------------------------------

  struct Row {
    std::vector<Pattern> pats;
    const Rule* rule;
    Scope binds;
  };

  void compileFunc(CoreFunc& f, const FuncDef& def) {
    int nextVar = f.arity;
    std::vector<VarId> vars;
    for (int i = 0; i < f.arity; ++i) vars.push_back(i);
    std::vector<Row> rows;
    for (auto& r : def.rules) {
      checkLinear(r);
      rows.push_back({r.params, &r, {}});
    }
    f.body = compileMatrix(vars, rows, nextVar, def.name);
    f.numVars = nextVar;
  }

  void checkLinear(const Rule& r) const {
    std::set<std::string> seen;
    for (auto& p : r.params) {
      if (p.containsOpApp())
        throw LangError("internal: functional pattern not desugared", r.pos);
      std::vector<std::string> local;
      std::set<std::string> localSeen;
      collectPatternVars(p, local, localSeen);
      for (auto& v : local) {
        if (!seen.insert(v).second)
          throw LangError("variable '" + v +
                              "' occurs twice in the patterns of one rule; ordinary "
                              "patterns must be linear",
                          r.pos);
      }
    }
    for (auto& fd : r.frees)
      if (seen.count(fd.name))
        throw LangError("free variable '" + fd.name + "' collides with a pattern variable",
                        fd.pos);
  }

  CExpr compileMatrix(const std::vector<VarId>& vars, const std::vector<Row>& rows, int& nextVar,
                      const std::string& fname) {
    if (rows.empty()) {
      CExpr e;
      e.k = CExpr::K::Fail;
      return e;
    }
    const Row& first = rows[0];
    bool allVars = true;
    for (auto& p : first.pats)
      if (p.kind != Pattern::Kind::Var) allVars = false;
    if (allVars) {
      CExpr leafE = leaf(vars, first, nextVar);
      if (rows.size() == 1) return leafE;
      std::vector<Row> rest(rows.begin() + 1, rows.end());
      return mkChoiceE(std::move(leafE), compileMatrix(vars, rest, nextVar, fname), false);
    }
    size_t col = 0;
    while (first.pats[col].kind == Pattern::Kind::Var) ++col;

    // All constructor patterns in this column must come from one type.
    int typeId = -1;
    bool anyDefault = false;
    for (auto& row : rows) {
      const Pattern& p = row.pats[col];
      if (p.kind == Pattern::Kind::Var) {
        anyDefault = true;
        continue;
      }
      auto it = prog_.ctorByName.find(p.name);
      if (it == prog_.ctorByName.end())
        throw LangError("unknown constructor '" + p.name + "' in pattern", p.pos);
      const CtorInfo& info = prog_.ctors[size_t(it->second)];
      if (int(p.args.size()) != info.arity)
        throw LangError("constructor '" + p.name + "' expects " + std::to_string(info.arity) +
                            " arguments",
                        p.pos);
      if (typeId == -1) typeId = info.typeId;
      if (info.typeId != typeId)
        throw LangError("patterns of different types in one match position in '" + fname + "'",
                        p.pos);
    }

    const TypeInfo& type = prog_.types[size_t(typeId)];
    std::vector<BranchSpec> branches;
    for (int cid : type.ctorIds) {
      const CtorInfo& info = prog_.ctors[size_t(cid)];
      bool anyRow = anyDefault;
      for (auto& row : rows)
        if (row.pats[col].kind == Pattern::Kind::Ctor &&
            prog_.ctorByName.at(row.pats[col].name) == cid)
          anyRow = true;
      if (!anyRow) continue;

      std::vector<VarId> binders;
      for (int i = 0; i < info.arity; ++i) binders.push_back(nextVar++);
      std::vector<VarId> subVars;
      subVars.insert(subVars.end(), vars.begin(), vars.begin() + long(col));
      subVars.insert(subVars.end(), binders.begin(), binders.end());
      subVars.insert(subVars.end(), vars.begin() + long(col) + 1, vars.end());

      std::vector<Row> subRows;
      for (auto& row : rows) {
        const Pattern& p = row.pats[col];
        if (p.kind == Pattern::Kind::Ctor) {
          if (prog_.ctorByName.at(p.name) != cid) continue;
          Row nr = row;
          nr.pats.erase(nr.pats.begin() + long(col));
          nr.pats.insert(nr.pats.begin() + long(col), p.args.begin(), p.args.end());
          subRows.push_back(std::move(nr));
        } else {
          Row nr = row;
          nr.binds[p.name] = vars[col];
          nr.pats.erase(nr.pats.begin() + long(col));
          for (int i = 0; i < info.arity; ++i) {
            Pattern w;
            w.kind = Pattern::Kind::Var;
            w.name = "%m" + std::to_string(nextVar) + "_" + std::to_string(i);
            nr.pats.insert(nr.pats.begin() + long(col) + i, w);
          }
          subRows.push_back(std::move(nr));
        }
      }
      branches.push_back({cid, std::move(binders), compileMatrix(subVars, subRows, nextVar, fname)});
    }
    // mkCase consumes binder lists; bodies were compiled against subVars.
    CExpr c;
    c.k = CExpr::K::Case;
    c.idx = vars[col];
    for (auto& b : branches) {
      c.branches.push_back({b.ctorId, std::move(b.binders)});
      c.args.push_back(std::move(b.body));
    }
    return c;
  }

  CExpr leaf(const std::vector<VarId>& vars, const Row& row, int& nextVar) {
    const Rule& rule = *row.rule;
    Scope scope = row.binds;
    for (size_t i = 0; i < row.pats.size(); ++i) scope[row.pats[i].name] = vars[i];

    std::vector<VarId> freeIds;
    for (auto& fd : rule.frees) {
      VarId v = nextVar++;
      scope[fd.name] = v;
      freeIds.push_back(v);
    }
    CExpr body = compileExpr(rule.rhs, scope, nextVar);
    int condId = prog_.funcByName.at("cond");
    for (auto it = rule.guards.rbegin(); it != rule.guards.rend(); ++it)
      body = mkApp(condId, {compileExpr(*it, scope, nextVar), std::move(body)});
    if (!freeIds.empty()) {
      CExpr fr;
      fr.k = CExpr::K::Free;
      fr.freeVarIds = freeIds;
      for (auto& fd : rule.frees) fr.args.push_back(generatorCall(fd.type, fd.pos));
      fr.args.push_back(std::move(body));
      body = std::move(fr);
    }
    return body;
  }

  CoreProgram& prog_;
  int and2Id_ = -1;
  std::unordered_map<std::string, std::vector<std::string>> declParams_;
};

}  // namespace

CoreProgram compileModule(const Module& m) {
  CoreProgram prog;
  Compiler c(prog);
  c.noteDeclParams(m);
  c.registerBuiltins();
  c.registerListType();
  c.registerData(m);
  c.registerSigs(m);
  c.declareFuncs(m);
  c.reserveDerived();
  c.compileFuncs(m);
  c.fillDerived();
  return prog;
}

QueryUnit compileQuery(const CoreProgram& prog, const Query& q) {
  // buildQuery only reads the program; the new function lives in the unit.
  Compiler c(const_cast<CoreProgram&>(prog));
  return c.buildQuery(q);
}

}  // namespace fleng
