#include "fleng/runtime.hpp"

#include <sstream>
#include <utility>

namespace fleng {

std::string Stats::line() const {
  std::ostringstream os;
  os << "choices=" << choices << " failures=" << failures << " guards=" << guards
     << " forces=" << forces;
  return os.str();
}

EnvRef extendEnv(EnvRef parent, std::vector<std::pair<VarId, ValueRef>> binds) {
  auto n = std::make_shared<EnvNode>();
  n->parent = std::move(parent);
  n->binds = std::move(binds);
  return n;
}

const ValueRef& lookupEnv(const EnvRef& env, VarId v) {
  for (const EnvNode* n = env.get(); n; n = n->parent.get())
    for (auto& [id, val] : n->binds)
      if (id == v) return val;
  throw std::logic_error("unbound core variable " + std::to_string(v));
}

bool needsSupply(const CExpr& e) {
  switch (e.k) {
    case CExpr::K::Var:
    case CExpr::K::Fail:
      return false;
    case CExpr::K::Ctor:
    case CExpr::K::CtorRef:
    case CExpr::K::PApp: {
      for (auto& a : e.args)
        if (needsSupply(a)) return true;
      return false;
    }
    default:
      return true;  // App, ApplyTo, Case, Choice, Free
  }
}

Runtime::Runtime(const CoreProgram& prog, const QueryUnit* unit, Options opts)
    : prog_(prog), unit_(unit), opts_(opts) {
  store_.setParanoid(opts_.paranoid);
}

const CtorInfo& Runtime::ctorInfo(int id) const {
  if (id == kAnswerCtor) return unit_->answerCtor;
  return prog_.ctors[size_t(id)];
}

const CoreFunc& Runtime::func(int id) const {
  if (size_t(id) < prog_.funcs.size()) return prog_.funcs[size_t(id)];
  return unit_->extra[size_t(id) - prog_.funcs.size()];
}

int Runtime::displayIndexFor(const RawID& raw) {
  auto it = displayIdx_.find(raw);
  if (it != displayIdx_.end()) return it->second;
  int n = nextDisplay_++;
  displayIdx_.emplace(raw, n);
  return n;
}

bool Runtime::hasDisplayIndex(const RawID& raw) const { return displayIdx_.count(raw) != 0; }

void Runtime::step(const CoreFunc& f) {
  ++steps_;
  if (opts_.stepBudget >= 0 && steps_ > opts_.stepBudget)
    throw StepLimitExceeded(static_cast<unsigned long long>(opts_.stepBudget));
  if (opts_.trace && opts_.traceOut) *opts_.traceOut << "[" << steps_ << "] call " << f.name << "\n";
}

// Splits s among needing children: child j of a call gets left(right^j(s))
// and the call itself right^n(s). A constructor has no call to feed, so a
// lone needing child takes s whole (nested wrappers then add no detours).
std::vector<ValueRef> Runtime::evalArgs(const std::vector<CExpr>& args, size_t first,
                                        const EnvRef& env, const IDSupply& s, bool hasCallee,
                                        IDSupply& rest) {
  int needing = 0;
  for (size_t i = first; i < args.size(); ++i)
    if (args[i].k != CExpr::K::Var && needsSupply(args[i])) ++needing;
  bool lone = !hasCallee && needing == 1;

  std::vector<ValueRef> vals;
  vals.reserve(args.size() - first);
  IDSupply cur = s;
  for (size_t i = first; i < args.size(); ++i) {
    const CExpr& a = args[i];
    if (a.k == CExpr::K::Var) {
      vals.push_back(lookupEnv(env, a.idx));
    } else if (!needsSupply(a) || lone) {
      vals.push_back(evalExpr(a, env, s));
    } else {
      vals.push_back(evalExpr(a, env, cur.left()));
      cur = cur.right();
    }
  }
  rest = cur;
  return vals;
}

ValueRef Runtime::evalExpr(const CExpr& e, const EnvRef& env, const IDSupply& s) {
  switch (e.k) {
    case CExpr::K::Var:
      return lookupEnv(env, e.idx);
    case CExpr::K::Ctor: {
      IDSupply rest = s;
      return mkCtor(&ctorInfo(e.idx), evalArgs(e.args, 0, env, s, false, rest));
    }
    case CExpr::K::CtorRef: {
      IDSupply rest = s;
      return mkPartialCtor(&ctorInfo(e.idx), evalArgs(e.args, 0, env, s, false, rest));
    }
    case CExpr::K::PApp: {
      IDSupply rest = s;
      return mkPartialFunc(e.idx, evalArgs(e.args, 0, env, s, false, rest));
    }
    case CExpr::K::App:
    case CExpr::K::ApplyTo:
    case CExpr::K::Case:
      return mkSusp(&e, env, s);
    case CExpr::K::Choice: {
      ID id{thisID(s), e.freeChoice ? Flavor::Free : Flavor::Choice};
      if (e.freeChoice) displayIndexFor(id.raw);
      auto leg = [&](const CExpr& a, IDSupply ls) {
        return a.k == CExpr::K::Var ? lookupEnv(env, a.idx) : evalExpr(a, env, ls);
      };
      ValueRef l = leg(e.args[0], s.left());
      ValueRef r = leg(e.args[1], s.right());
      return mkChoice(id, std::move(l), std::move(r));
    }
    case CExpr::K::Free: {
      size_t k = e.freeVarIds.size();
      std::vector<std::pair<VarId, ValueRef>> binds;
      binds.reserve(k);
      // A lone variable whose body consumes no identifiers takes the supply
      // whole, so an alias like `aBool = b where b free` labels its
      // generator with this call's own identifier.
      if (k == 1 && e.args[1].k == CExpr::K::Var) {
        binds.emplace_back(e.freeVarIds[0], evalExpr(e.args[0], env, s));
        return evalExpr(e.args[1], extendEnv(env, std::move(binds)), s);
      }
      IDSupply cur = s;
      for (size_t i = 0; i < k; ++i) {
        binds.emplace_back(e.freeVarIds[i], evalExpr(e.args[i], env, cur.left()));
        cur = cur.right();
      }
      return evalExpr(e.args[k], extendEnv(env, std::move(binds)), cur);
    }
    case CExpr::K::Fail:
      return mkFail();
  }
  throw std::logic_error("unhandled core expression");
}

ValueRef Runtime::force(const ValueRef& v) {
  ValueRef cur = v;
  for (;;) {
    if (cur->kind == Value::Kind::Susp || cur->kind == Value::Kind::NativeSusp) {
      if (cur->memo) {
        cur = cur->memo;
        continue;
      }
      if (cur->forcing) throw LangError("evaluation demands a value of itself (no finite result)");
      cur->forcing = true;
      ValueRef r = cur->kind == Value::Kind::Susp ? evalSuspended(*cur->expr, cur->env, cur->supply)
                                                  : cur->native();
      cur->forcing = false;
      if (opts_.memo) {
        cur->memo = r;
        cur->env.reset();
        cur->native = nullptr;
      }
      cur = std::move(r);
      continue;
    }
    return cur;
  }
}

ValueRef Runtime::evalSuspended(const CExpr& e, const EnvRef& env, const IDSupply& s) {
  switch (e.k) {
    case CExpr::K::App: {
      IDSupply rest = s;
      std::vector<ValueRef> vals = evalArgs(e.args, 0, env, s, true, rest);
      return callFunc(e.idx, std::move(vals), rest);
    }
    case CExpr::K::ApplyTo: {
      IDSupply rest = s;
      std::vector<ValueRef> vals = evalArgs(e.args, 0, env, s, true, rest);
      ValueRef callee = std::move(vals.front());
      vals.erase(vals.begin());
      return applyValue(callee, std::move(vals), rest);
    }
    case CExpr::K::Case:
      return dispatchCase(e, force(lookupEnv(env, e.idx)), env, s);
    default:
      return evalExpr(e, env, s);
  }
}

ValueRef Runtime::dispatchCase(const CExpr& e, const ValueRef& scrut, const EnvRef& env,
                               const IDSupply& s) {
  switch (scrut->kind) {
    case Value::Kind::Ctor: {
      int cid = scrut->ctor->id;
      for (size_t i = 0; i < e.branches.size(); ++i) {
        if (e.branches[i].ctorId != cid) continue;
        std::vector<std::pair<VarId, ValueRef>> binds;
        binds.reserve(e.branches[i].binders.size());
        for (size_t j = 0; j < e.branches[i].binders.size(); ++j)
          binds.emplace_back(e.branches[i].binders[j], scrut->args[j]);
        return evalExpr(e.args[i], extendEnv(env, std::move(binds)), s);
      }
      return mkFail();
    }
    case Value::Kind::Choice: {
      // Pull-tab: the match moves into both alternatives; a free variable
      // demanded by a match narrows to an ordinary choice.
      const CExpr* ep = &e;
      ValueRef l = scrut->left, r = scrut->right;
      EnvRef en = env;
      IDSupply ss = s;
      return mkChoice(
          narrow(scrut->id),
          mkNativeSusp([this, ep, l, en, ss] { return dispatchCase(*ep, force(l), en, ss); }),
          mkNativeSusp([this, ep, r, en, ss] { return dispatchCase(*ep, force(r), en, ss); }));
    }
    case Value::Kind::Guard:
      return mkGuard(scrut->constraints, dispatchCase(e, force(scrut->inner), env, s));
    case Value::Kind::Fail:
    case Value::Kind::Partial:
      return mkFail();
    default:
      throw std::logic_error("case on unevaluated value");
  }
}

ValueRef Runtime::callFunc(int funcId, std::vector<ValueRef> args, const IDSupply& s) {
  const CoreFunc& f = func(funcId);
  step(f);
  if (f.builtin != CoreFunc::Builtin::None) return evalBuiltin(f, args, s);
  std::vector<std::pair<VarId, ValueRef>> binds;
  binds.reserve(args.size());
  for (size_t i = 0; i < args.size(); ++i) binds.emplace_back(VarId(i), std::move(args[i]));
  return evalExpr(f.body, extendEnv(nullptr, std::move(binds)), s);
}

ValueRef Runtime::evalBuiltin(const CoreFunc& f, std::vector<ValueRef>& args, const IDSupply& s) {
  switch (f.builtin) {
    case CoreFunc::Builtin::StrictUnify:
      return strictUnify(args[0], args[1]);
    case CoreFunc::Builtin::LazyUnify:
      return lazyUnify(args[0], args[1]);
    case CoreFunc::Builtin::Eq:
      return eqValue(args[0], args[1], s);
    case CoreFunc::Builtin::Cond:
      return condValue(args[0], args[1]);
    case CoreFunc::Builtin::None:
      break;
  }
  throw std::logic_error("bad builtin dispatch");
}

ValueRef Runtime::applyValue(const ValueRef& fn, std::vector<ValueRef> extra, const IDSupply& s) {
  ValueRef fv = force(fn);
  switch (fv->kind) {
    case Value::Kind::Partial: {
      std::vector<ValueRef> all = fv->args;
      if (fv->ctor) {
        size_t arity = size_t(fv->ctor->arity);
        for (auto& x : extra) all.push_back(std::move(x));
        if (all.size() < arity) return mkPartialCtor(fv->ctor, std::move(all));
        if (all.size() == arity) return mkCtor(fv->ctor, std::move(all));
        throw LangError("constructor " + fv->ctor->name + " applied to too many arguments");
      }
      size_t arity = size_t(func(fv->funcId).arity);
      size_t need = arity - all.size();
      if (extra.size() <= need) {
        for (auto& x : extra) all.push_back(std::move(x));
        if (all.size() < arity) return mkPartialFunc(fv->funcId, std::move(all));
        return callFunc(fv->funcId, std::move(all), s);
      }
      for (size_t i = 0; i < need; ++i) all.push_back(std::move(extra[i]));
      ValueRef r = callFunc(fv->funcId, std::move(all), s.left());
      extra.erase(extra.begin(), extra.begin() + long(need));
      return applyValue(r, std::move(extra), s.right());
    }
    case Value::Kind::Ctor:
      if (extra.empty()) return fv;
      throw LangError("a data value cannot be applied to arguments");
    case Value::Kind::Fail:
      return mkFail();
    case Value::Kind::Choice: {
      // The application context is copied into both alternatives; arguments
      // stay shared, preserving call-time choice.
      ValueRef l = fv->left, r = fv->right;
      IDSupply ss = s;
      auto ex = std::make_shared<std::vector<ValueRef>>(std::move(extra));
      return mkChoice(fv->id,
                      mkNativeSusp([this, l, ex, ss] { return applyValue(l, *ex, ss); }),
                      mkNativeSusp([this, r, ex, ss] { return applyValue(r, *ex, ss); }));
    }
    case Value::Kind::Guard:
      return mkGuard(fv->constraints, applyValue(fv->inner, std::move(extra), s));
    default:
      throw std::logic_error("apply on unevaluated value");
  }
}

ValueRef Runtime::condValue(const ValueRef& g, const ValueRef& body) {
  ValueRef gv = force(g);
  switch (gv->kind) {
    case Value::Kind::Ctor: {
      int cid = gv->ctor->id;
      if (cid == prog_.successCtorId || cid == prog_.trueCtorId) return body;
      return mkFail();  // False, or a non-condition value
    }
    case Value::Kind::Choice: {
      ValueRef l = gv->left, r = gv->right, b = body;
      return mkChoice(narrow(gv->id),
                      mkNativeSusp([this, l, b] { return condValue(l, b); }),
                      mkNativeSusp([this, r, b] { return condValue(r, b); }));
    }
    case Value::Kind::Guard:
      return mkGuard(gv->constraints, condValue(gv->inner, body));
    default:
      return mkFail();
  }
}

ValueRef Runtime::eqValue(const ValueRef& a, const ValueRef& b, const IDSupply& s) {
  ValueRef av = force(a);
  switch (av->kind) {
    case Value::Kind::Fail:
      return mkFail();
    case Value::Kind::Partial:
      return mkFail();  // no equality on functions
    case Value::Kind::Guard:
      return mkGuard(av->constraints, eqValue(av->inner, b, s));
    case Value::Kind::Choice: {
      ValueRef l = av->left, r = av->right, bb = b;
      IDSupply ss = s;
      return mkChoice(narrow(av->id),
                      mkNativeSusp([this, l, bb, ss] { return eqValue(l, bb, ss); }),
                      mkNativeSusp([this, r, bb, ss] { return eqValue(r, bb, ss); }));
    }
    case Value::Kind::Ctor:
      break;
    default:
      throw std::logic_error("eq on unevaluated value");
  }
  ValueRef bv = force(b);
  switch (bv->kind) {
    case Value::Kind::Fail:
      return mkFail();
    case Value::Kind::Partial:
      return mkFail();
    case Value::Kind::Guard:
      return mkGuard(bv->constraints, eqValue(av, bv->inner, s));
    case Value::Kind::Choice: {
      ValueRef l = bv->left, r = bv->right, aa = av;
      IDSupply ss = s;
      return mkChoice(narrow(bv->id),
                      mkNativeSusp([this, aa, l, ss] { return eqValue(aa, l, ss); }),
                      mkNativeSusp([this, aa, r, ss] { return eqValue(aa, r, ss); }));
    }
    case Value::Kind::Ctor:
      break;
    default:
      throw std::logic_error("eq on unevaluated value");
  }
  int t = av->ctor->typeId;
  if (t < 0 || bv->ctor->typeId < 0) throw std::logic_error("eq on internal constructor");
  int eqId = prog_.types[size_t(t)].eqFuncId;
  if (eqId < 0) throw LangError("type " + prog_.types[size_t(t)].name + " has no equality");
  return callFunc(eqId, {av, bv}, s);
}

ValueRef Runtime::nf(const ValueRef& v) {
  ValueRef fv = force(v);
  if (fv->kind != Value::Kind::Ctor) return fv;
  std::vector<ValueRef> args = fv->args;
  const CtorInfo* info = fv->ctor;
  for (size_t i = 0; i < args.size(); ++i) {
    ValueRef na = nf(args[i]);
    if (na->kind == Value::Kind::Fail) return mkFail();
    if (na->kind == Value::Kind::Choice && na->id.flavor == Flavor::Choice) {
      auto leg = [this, info, &args, i](const ValueRef& x) {
        std::vector<ValueRef> a2 = args;
        a2[i] = x;
        return mkNativeSusp(
            [this, info, a2]() mutable { return nf(mkCtor(info, std::move(a2))); });
      };
      return mkChoice(na->id, leg(na->left), leg(na->right));
    }
    if (na->kind == Value::Kind::Guard) {
      std::vector<ValueRef> a2 = args;
      a2[i] = na->inner;
      auto rest =
          mkNativeSusp([this, info, a2]() mutable { return nf(mkCtor(info, std::move(a2))); });
      return mkGuard(na->constraints, std::move(rest));
    }
    args[i] = std::move(na);  // ctor, partial, or residual free choice
  }
  return mkCtor(info, std::move(args));
}

ValueRef Runtime::evalRoot() { return callFunc(unit_->rootFuncId, {}, initSupply()); }

ValueRef Runtime::forceValue(ValueRef v) { return force(v); }

}  // namespace fleng
