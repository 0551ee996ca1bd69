#pragma once

#include "fleng/core.hpp"
#include "fleng/supply.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace fleng {

enum class Flavor : uint8_t {
  Choice,  // ordinary non-deterministic choice
  Free     // an unbound logic variable's generator choice
};

struct ID {
  RawID raw;
  Flavor flavor = Flavor::Choice;
};

// Narrowing turns a logic variable that is demanded by pattern matching
// into an ordinary choice while keeping its identifier.
inline ID narrow(const ID& i) { return ID{i.raw, Flavor::Choice}; }

struct Value;
using ValueRef = std::shared_ptr<Value>;

enum class DecisionKind : uint8_t { None, Left, Right, Bind, Lazy };

struct LazyBindThunk;

struct Decision {
  DecisionKind kind = DecisionKind::None;
  // Bind: this variable took the other variable as its representative.
  RawID target;
  ValueRef selfNode;    // node of the variable being bound
  ValueRef targetNode;  // node of the variable bound to
  // Lazy: a pending functional-pattern binding.
  std::shared_ptr<LazyBindThunk> thunk;

  static Decision none() { return {}; }
  static Decision left() { return {DecisionKind::Left, {}, nullptr, nullptr, nullptr}; }
  static Decision right() { return {DecisionKind::Right, {}, nullptr, nullptr, nullptr}; }
  static Decision bind(RawID target, ValueRef self, ValueRef to) {
    return {DecisionKind::Bind, std::move(target), std::move(self), std::move(to), nullptr};
  }
  static Decision lazy(std::shared_ptr<LazyBindThunk> t) {
    return {DecisionKind::Lazy, {}, nullptr, nullptr, std::move(t)};
  }
};

struct Constraint {
  RawID id;
  Decision d;
};

// A suspended functional-pattern binding: when the bound variable is
// demanded, `expr` is head-normalized and translated into concrete
// decisions. Outcomes that consulted other ids' current decisions are not
// cached (they may differ on another search path).
struct LazyBindThunk {
  ValueRef freeNode;  // the free-flavored choice node being bound
  ValueRef expr;      // right-hand side, untouched until forced
  bool forced = false;
  bool inconsistent = false;
  std::vector<Constraint> cached;
};

struct EnvNode;
using EnvRef = std::shared_ptr<const EnvNode>;

struct EnvNode {
  EnvRef parent;
  std::vector<std::pair<VarId, ValueRef>> binds;
};

EnvRef extendEnv(EnvRef parent, std::vector<std::pair<VarId, ValueRef>> binds);
const ValueRef& lookupEnv(const EnvRef&, VarId);

// Runtime values form a graph; sharing is what gives call-time choice.
struct Value {
  enum class Kind : uint8_t {
    Ctor,     // constructor applied to exactly arity arguments
    Partial,  // function or constructor missing arguments
    Choice,   // identifier-labelled binary choice
    Fail,
    Guard,      // constraints guarding an inner value
    Susp,       // unevaluated core expression (memoized once forced)
    NativeSusp  // unevaluated native computation (memoized once forced)
  };
  Kind kind;

  // Ctor / Partial(ctor)
  const CtorInfo* ctor = nullptr;
  // Partial(func)
  int funcId = -1;
  std::vector<ValueRef> args;  // ctor args, or arguments supplied so far

  // Choice
  ID id;
  ValueRef left, right;

  // Guard
  std::vector<Constraint> constraints;
  ValueRef inner;

  // Susp
  const CExpr* expr = nullptr;
  EnvRef env;
  IDSupply supply;
  // NativeSusp
  std::function<ValueRef()> native;
  // shared by both suspension kinds
  ValueRef memo;
  bool forcing = false;

  explicit Value(Kind k) : kind(k), supply(RawID(0)) {}

  // Deep value spines (left-recursive programs reach 10^5 nodes) would
  // overflow the native stack under member-by-member destruction, so solely
  // owned children are dismantled iteratively.
  ~Value();
};

namespace detail {
inline void stripChildren(Value& v, std::vector<ValueRef>& work) {
  auto grab = [&work](ValueRef& p) {
    if (!p) return;
    if (p.use_count() == 1) work.push_back(std::move(p));
    p.reset();
  };
  for (auto& a : v.args) grab(a);
  v.args.clear();
  grab(v.left);
  grab(v.right);
  grab(v.inner);
  grab(v.memo);
  for (auto& c : v.constraints) {
    grab(c.d.selfNode);
    grab(c.d.targetNode);
    if (c.d.thunk && c.d.thunk.use_count() == 1) {
      grab(c.d.thunk->freeNode);
      grab(c.d.thunk->expr);
      for (auto& cc : c.d.thunk->cached) {
        grab(cc.d.selfNode);
        grab(cc.d.targetNode);
      }
    }
    c.d.thunk.reset();
  }
  v.constraints.clear();
}
}  // namespace detail

inline Value::~Value() {
  std::vector<ValueRef> work;
  detail::stripChildren(*this, work);
  while (!work.empty()) {
    ValueRef v = std::move(work.back());
    work.pop_back();
    detail::stripChildren(*v, work);
    // v dies here with no children left to cascade into
  }
}

inline ValueRef mkCtor(const CtorInfo* info, std::vector<ValueRef> args) {
  auto v = std::make_shared<Value>(Value::Kind::Ctor);
  v->ctor = info;
  v->args = std::move(args);
  return v;
}

inline ValueRef mkPartialFunc(int funcId, std::vector<ValueRef> args) {
  auto v = std::make_shared<Value>(Value::Kind::Partial);
  v->funcId = funcId;
  v->args = std::move(args);
  return v;
}

inline ValueRef mkPartialCtor(const CtorInfo* info, std::vector<ValueRef> args) {
  auto v = std::make_shared<Value>(Value::Kind::Partial);
  v->ctor = info;
  v->args = std::move(args);
  return v;
}

inline ValueRef mkChoice(ID id, ValueRef l, ValueRef r) {
  auto v = std::make_shared<Value>(Value::Kind::Choice);
  v->id = std::move(id);
  v->left = std::move(l);
  v->right = std::move(r);
  return v;
}

inline ValueRef mkFail() { return std::make_shared<Value>(Value::Kind::Fail); }

// Nested guards collapse so a conjunction of guarded results carries one
// combined constraint list.
inline ValueRef mkGuard(std::vector<Constraint> cs, ValueRef inner) {
  if (inner && inner->kind == Value::Kind::Guard) {
    for (auto& c : inner->constraints) cs.push_back(c);
    inner = inner->inner;
  }
  auto v = std::make_shared<Value>(Value::Kind::Guard);
  v->constraints = std::move(cs);
  v->inner = std::move(inner);
  return v;
}

inline ValueRef mkSusp(const CExpr* e, EnvRef env, IDSupply s) {
  auto v = std::make_shared<Value>(Value::Kind::Susp);
  v->expr = e;
  v->env = std::move(env);
  v->supply = std::move(s);
  return v;
}

inline ValueRef mkNativeSusp(std::function<ValueRef()> f) {
  auto v = std::make_shared<Value>(Value::Kind::NativeSusp);
  v->native = std::move(f);
  return v;
}

}  // namespace fleng
