#include "fleng/runtime.hpp"

#include <utility>

// Equation solving. No identifiers are minted here: binding decisions reuse
// the ids of existing choice nodes, and the fresh sub-variables produced by
// instantiating a variable live in the generator legs, which already carry
// their own supplies.

namespace fleng {

ValueRef Runtime::successValue() {
  if (prog_.successCtorId < 0)
    throw LangError("an equational constraint needs the Success type in scope");
  return mkCtor(&prog_.ctors[size_t(prog_.successCtorId)], {});
}

ValueRef Runtime::conjValue(const ValueRef& u, const ValueRef& rest) {
  ValueRef uv = force(u);
  switch (uv->kind) {
    case Value::Kind::Fail:
      return mkFail();
    case Value::Kind::Guard:
      return mkGuard(uv->constraints, conjValue(uv->inner, rest));
    case Value::Kind::Choice: {
      ValueRef l = uv->left, r = uv->right, rs = rest;
      return mkChoice(narrow(uv->id),
                      mkNativeSusp([this, l, rs] { return conjValue(l, rs); }),
                      mkNativeSusp([this, r, rs] { return conjValue(r, rs); }));
    }
    case Value::Kind::Ctor:
      if (uv->ctor->id == prog_.successCtorId) return rest;
      return mkFail();
    default:
      return mkFail();  // functions never satisfy a constraint
  }
}

ValueRef Runtime::unifyArgs(const std::vector<ValueRef>& as, const std::vector<ValueRef>& bs,
                            bool lazy) {
  ValueRef acc = successValue();
  for (size_t i = as.size(); i-- > 0;) {
    ValueRef ai = as[i], bi = bs[i], rest = acc;
    acc = mkNativeSusp([this, ai, bi, rest, lazy] {
      return conjValue(lazy ? lazyUnify(ai, bi) : strictUnify(ai, bi), rest);
    });
  }
  return acc;
}

ValueRef Runtime::bindFreeToCtor(const ValueRef& freeVal, const ValueRef& ctorVal, bool freeOnLeft,
                                 bool lazy) {
  int target = ctorVal->ctor->id;
  std::vector<Constraint> path;
  ValueRef cur = freeVal;
  ValueRef alt;
  // Generators nest alternatives to the right in declaration order.
  for (;;) {
    ValueRef lv = force(cur->left);
    if (lv->kind == Value::Kind::Ctor && lv->ctor->id == target) {
      path.push_back({cur->id.raw, Decision::left()});
      alt = lv;
      break;
    }
    ValueRef rv = force(cur->right);
    if (rv->kind == Value::Kind::Ctor && rv->ctor->id == target) {
      path.push_back({cur->id.raw, Decision::right()});
      alt = rv;
      break;
    }
    if (rv->kind == Value::Kind::Choice && rv->id.flavor == Flavor::Free) {
      path.push_back({cur->id.raw, Decision::right()});
      cur = rv;
      continue;
    }
    if (lv->kind == Value::Kind::Choice && lv->id.flavor == Flavor::Free) {
      path.push_back({cur->id.raw, Decision::left()});
      cur = lv;
      continue;
    }
    return mkFail();  // the constructor is not in this variable's type
  }
  ValueRef args = freeOnLeft ? unifyArgs(alt->args, ctorVal->args, lazy)
                             : unifyArgs(ctorVal->args, alt->args, lazy);
  return mkGuard(std::move(path), std::move(args));
}

ValueRef Runtime::strictUnify(const ValueRef& a, const ValueRef& b) {
  ValueRef av = force(a);
  switch (av->kind) {
    case Value::Kind::Fail:
      return mkFail();
    case Value::Kind::Partial:
      return mkFail();
    case Value::Kind::Guard: {
      ValueRef inner = av->inner, bb = b;
      return mkGuard(av->constraints,
                     mkNativeSusp([this, inner, bb] { return strictUnify(inner, bb); }));
    }
    case Value::Kind::Choice:
      if (av->id.flavor == Flavor::Choice) {
        ValueRef l = av->left, r = av->right, bb = b;
        return mkChoice(av->id,
                        mkNativeSusp([this, l, bb] { return strictUnify(l, bb); }),
                        mkNativeSusp([this, r, bb] { return strictUnify(r, bb); }));
      }
      break;
    case Value::Kind::Ctor:
      break;
    default:
      throw std::logic_error("unify on unevaluated value");
  }

  ValueRef bv = force(b);
  switch (bv->kind) {
    case Value::Kind::Fail:
      return mkFail();
    case Value::Kind::Partial:
      return mkFail();
    case Value::Kind::Guard: {
      ValueRef inner = bv->inner, aa = av;
      return mkGuard(bv->constraints,
                     mkNativeSusp([this, aa, inner] { return strictUnify(aa, inner); }));
    }
    case Value::Kind::Choice:
      if (bv->id.flavor == Flavor::Choice) {
        ValueRef l = bv->left, r = bv->right, aa = av;
        return mkChoice(bv->id,
                        mkNativeSusp([this, aa, l] { return strictUnify(aa, l); }),
                        mkNativeSusp([this, aa, r] { return strictUnify(aa, r); }));
      }
      break;
    case Value::Kind::Ctor:
      break;
    default:
      throw std::logic_error("unify on unevaluated value");
  }

  bool aFree = av->kind == Value::Kind::Choice;
  bool bFree = bv->kind == Value::Kind::Choice;
  if (aFree && bFree) {
    if (av->id.raw == bv->id.raw) return successValue();
    std::vector<Constraint> cs{{av->id.raw, Decision::bind(bv->id.raw, av, bv)}};
    return mkGuard(std::move(cs), successValue());
  }
  if (aFree) return bindFreeToCtor(av, bv, /*freeOnLeft=*/true, /*lazy=*/false);
  if (bFree) return bindFreeToCtor(bv, av, /*freeOnLeft=*/false, /*lazy=*/false);

  if (av->ctor->id != bv->ctor->id) return mkFail();
  if (av->args.empty()) return successValue();
  return unifyArgs(av->args, bv->args, /*lazy=*/false);
}

ValueRef Runtime::lazyUnify(const ValueRef& a, const ValueRef& b) {
  ValueRef av = force(a);  // the pattern side
  switch (av->kind) {
    case Value::Kind::Fail:
      return mkFail();
    case Value::Kind::Partial:
      return mkFail();
    case Value::Kind::Guard: {
      ValueRef inner = av->inner, bb = b;
      return mkGuard(av->constraints,
                     mkNativeSusp([this, inner, bb] { return lazyUnify(inner, bb); }));
    }
    case Value::Kind::Choice: {
      if (av->id.flavor == Flavor::Free) {
        // The whole point: the right-hand side stays untouched until the
        // variable is demanded.
        auto t = std::make_shared<LazyBindThunk>();
        t->freeNode = av;
        t->expr = b;
        std::vector<Constraint> cs{{av->id.raw, Decision::lazy(std::move(t))}};
        return mkGuard(std::move(cs), successValue());
      }
      ValueRef l = av->left, r = av->right, bb = b;
      return mkChoice(av->id,
                      mkNativeSusp([this, l, bb] { return lazyUnify(l, bb); }),
                      mkNativeSusp([this, r, bb] { return lazyUnify(r, bb); }));
    }
    case Value::Kind::Ctor:
      break;
    default:
      throw std::logic_error("unify on unevaluated value");
  }

  ValueRef bv = force(b);
  switch (bv->kind) {
    case Value::Kind::Fail:
      return mkFail();
    case Value::Kind::Partial:
      return mkFail();
    case Value::Kind::Guard: {
      ValueRef inner = bv->inner, aa = av;
      return mkGuard(bv->constraints,
                     mkNativeSusp([this, aa, inner] { return lazyUnify(aa, inner); }));
    }
    case Value::Kind::Choice:
      if (bv->id.flavor == Flavor::Choice) {
        ValueRef l = bv->left, r = bv->right, aa = av;
        return mkChoice(bv->id,
                        mkNativeSusp([this, aa, l] { return lazyUnify(aa, l); }),
                        mkNativeSusp([this, aa, r] { return lazyUnify(aa, r); }));
      }
      // A pattern constructor against an unbound variable instantiates the
      // variable's shape now; the arguments are still matched lazily.
      return bindFreeToCtor(bv, av, /*freeOnLeft=*/false, /*lazy=*/true);
    case Value::Kind::Ctor:
      break;
    default:
      throw std::logic_error("unify on unevaluated value");
  }

  if (av->ctor->id != bv->ctor->id) return mkFail();
  if (av->args.empty()) return successValue();
  return unifyArgs(av->args, bv->args, /*lazy=*/true);
}

Runtime::SolveResult Runtime::solveValueToConstraints(const ValueRef& v, bool& storeDependent) {
  SolveResult out;
  ValueRef cur = v;
  for (;;) {
    cur = force(cur);
    switch (cur->kind) {
      case Value::Kind::Ctor:
        if (cur->ctor->id == prog_.successCtorId) return out;
        out.k = SolveKind::Fail;
        return out;
      case Value::Kind::Fail:
        out.k = SolveKind::Fail;
        return out;
      case Value::Kind::Guard:
        for (auto& c : cur->constraints) out.cs.push_back(c);
        cur = cur->inner;
        continue;
      case Value::Kind::Choice: {
        // Constraint evaluation is the one place values meet decisions:
        // follow a decided branch, or hand the undecided node to the search.
        LookupResult lr = store_.lookupDecision(cur->id.raw);
        if (lr.d.kind == DecisionKind::Left) {
          storeDependent = true;
          cur = cur->left;
          continue;
        }
        if (lr.d.kind == DecisionKind::Right) {
          storeDependent = true;
          cur = cur->right;
          continue;
        }
        out.k = SolveKind::Split;
        out.splitNode = cur;
        out.cs.clear();
        return out;
      }
      default:
        out.k = SolveKind::Fail;
        return out;
    }
  }
}

ForceResult Runtime::forceThunk(const std::shared_ptr<LazyBindThunk>& t) {
  ForceResult fr;
  if (t->forced) {
    if (t->inconsistent) {
      fr.k = ForceResult::K::Inconsistent;
    } else {
      fr.cs = t->cached;
    }
    return fr;
  }
  bool dep = false;
  SolveResult sr = solveValueToConstraints(strictUnify(t->freeNode, t->expr), dep);
  switch (sr.k) {
    case SolveKind::Ok:
      ++lazyForces_;
      ++stats_.forces;
      fr.cs = std::move(sr.cs);
      if (!dep) {  // a path-independent outcome can be reused across branches
        t->forced = true;
        t->cached = fr.cs;
      }
      return fr;
    case SolveKind::Fail:
      ++lazyForces_;
      ++stats_.forces;
      fr.k = ForceResult::K::Inconsistent;
      if (!dep) {
        t->forced = true;
        t->inconsistent = true;
      }
      return fr;
    case SolveKind::Split:
      fr.k = ForceResult::K::Split;
      fr.splitNode = std::move(sr.splitNode);
      return fr;
  }
  throw std::logic_error("bad solve result");
}

ForceResult Runtime::unifyNodes(ValueRef a, ValueRef b) {
  bool dep = false;
  SolveResult sr = solveValueToConstraints(strictUnify(a, b), dep);
  ForceResult fr;
  switch (sr.k) {
    case SolveKind::Ok:
      fr.cs = std::move(sr.cs);
      return fr;
    case SolveKind::Fail:
      fr.k = ForceResult::K::Inconsistent;
      return fr;
    case SolveKind::Split:
      fr.k = ForceResult::K::Split;
      fr.splitNode = std::move(sr.splitNode);
      return fr;
  }
  throw std::logic_error("bad solve result");
}

}  // namespace fleng
