#include "fleng/render.hpp"

#include <sstream>
#include <stdexcept>

namespace fleng {
namespace {

bool atomicStr(const std::string& s) {
  if (s.size() < 2) return true;
  if (s.front() == '(' && s.back() == ')') return true;
  if (s.front() == '[' && s.back() == ']') return true;
  return s.find(' ') == std::string::npos && s.find(':') == std::string::npos;
}

std::string wrap(const std::string& s) { return atomicStr(s) ? s : "(" + s + ")"; }

// ---------------------------------------------------------------------------
// User-facing rendering
// ---------------------------------------------------------------------------

class UserRenderer {
 public:
  explicit UserRenderer(Runtime& rt) : rt_(rt) {}

  std::string render(ValueRef v) {
    v = resolve(std::move(v));
    switch (v->kind) {
      case Value::Kind::Ctor:
        return renderCtor(v);
      case Value::Kind::Choice: {
        if (v->id.flavor != Flavor::Free)
          throw std::logic_error("undecided choice in displayed value");
        return "_x" + std::to_string(rt_.displayIndexFor(v->id.raw));
      }
      case Value::Kind::Partial:
        return renderPartial(v);
      case Value::Kind::Fail:
        throw RenderFailure{};
      default:
        throw std::logic_error("unnormalized value in display");
    }
  }

 private:
  // Forces, then follows the store through decided variables, demanding
  // pending lazy bindings along the way.
  ValueRef resolve(ValueRef v) {
    for (;;) {
      v = rt_.force(v);
      if (v->kind != Value::Kind::Choice) return v;
      LookupResult lr = rt_.store().lookupDecision(v->id.raw);
      ValueRef node = lr.repNode ? lr.repNode : v;
      switch (lr.d.kind) {
        case DecisionKind::None:
          return node;  // residual variable (possibly its representative)
        case DecisionKind::Left:
          v = node->left;
          break;
        case DecisionKind::Right:
          v = node->right;
          break;
        case DecisionKind::Lazy: {
          AddOutcome ao = rt_.store().demand(v->id.raw, rt_);
          if (ao.k == AddOutcome::K::Conflict) throw RenderFailure{};
          if (ao.k == AddOutcome::K::Split) throw RenderSplit{ao.splitNode};
          break;  // decided now; look it up again
        }
        case DecisionKind::Bind:
          throw std::logic_error("lookup returned a bind decision");
      }
    }
  }

  std::string renderCtor(const ValueRef& v) {
    const CtorInfo* c = v->ctor;
    const CoreProgram& p = rt_.program();
    if (c->id >= 0 && (c->id == p.consCtorId || c->id == p.nilCtorId)) return renderList(v);
    if (c->id >= 0 && (c->id == p.succCtorId || c->id == p.zeroCtorId)) return renderNat(v);
    if (v->args.empty()) return c->name;
    std::string out = c->name;
    for (auto& a : v->args) out += " " + wrap(render(a));
    return out;
  }

  std::string renderList(ValueRef v) {
    std::vector<std::string> elems;
    const CoreProgram& p = rt_.program();
    while (v->kind == Value::Kind::Ctor && v->ctor->id == p.consCtorId) {
      elems.push_back(render(v->args[0]));
      v = resolve(v->args[1]);
    }
    std::string out;
    if (v->kind == Value::Kind::Ctor && v->ctor->id == p.nilCtorId) {
      out = "[";
      for (size_t i = 0; i < elems.size(); ++i) out += (i ? "," : "") + elems[i];
      return out + "]";
    }
    out = "(";  // open-ended spine: (e1:e2:tail)
    for (auto& e : elems) out += wrap(e) + ":";
    return out + wrap(render(v)) + ")";
  }

  std::string renderNat(ValueRef v) {
    unsigned long long n = 0;
    const CoreProgram& p = rt_.program();
    while (v->kind == Value::Kind::Ctor && v->ctor->id == p.succCtorId) {
      ++n;
      v = resolve(v->args[0]);
    }
    if (v->kind == Value::Kind::Ctor && v->ctor->id == p.zeroCtorId) return std::to_string(n);
    std::string t = render(v);
    for (unsigned long long i = 0; i < n; ++i) t = "S " + wrap(t);
    return t;
  }

  std::string renderPartial(const ValueRef& v) {
    std::string out = v->ctor ? v->ctor->name : rt_.func(v->funcId).name;
    for (auto& a : v->args) out += " " + wrap(render(a));
    return v->args.empty() ? out : "(" + out + ")";
  }

  Runtime& rt_;
};

// ---------------------------------------------------------------------------
// Structural rendering
// ---------------------------------------------------------------------------

class DebugRenderer {
 public:
  explicit DebugRenderer(Runtime& rt) : rt_(rt) {}

  std::string render(ValueRef v) {
    v = rt_.force(v);
    switch (v->kind) {
      case Value::Kind::Ctor: {
        std::string out = v->ctor->name;
        for (auto& a : v->args) out += " " + wrap(render(a));
        return out;
      }
      case Value::Kind::Partial: {
        std::string out = v->ctor ? v->ctor->name : rt_.func(v->funcId).name;
        for (auto& a : v->args) out += " " + wrap(render(a));
        return out;
      }
      case Value::Kind::Fail:
        return "Fail";
      case Value::Kind::Choice:
        return "Choice " + idStr(v->id) + " " + wrap(render(v->left)) + " " +
               wrap(render(v->right));
      case Value::Kind::Guard: {
        std::vector<Constraint> cs = v->constraints;
        ValueRef inner = rt_.force(v->inner);
        while (inner->kind == Value::Kind::Guard) {
          for (auto& c : inner->constraints) cs.push_back(c);
          inner = rt_.force(inner->inner);
        }
        std::string out = "Guard [";
        for (size_t i = 0; i < cs.size(); ++i) out += (i ? ", " : "") + constraintStr(cs[i]);
        return out + "] " + wrap(render(inner));
      }
      default:
        throw std::logic_error("unforced value in structural rendering");
    }
  }

 private:
  // Free and ordinary choices print alike: the flavor changes how
  // unification and rendering treat a node, not the trace shape.
  static std::string idStr(const ID& id) { return rawToString(id.raw); }

  std::string constraintStr(const Constraint& c) {
    return rawToString(c.id) + " :=: " + decisionStr(c.d);
  }

  std::string decisionStr(const Decision& d) {
    switch (d.kind) {
      case DecisionKind::None:
        return "NoDecision";
      case DecisionKind::Left:
        return "ChooseLeft";
      case DecisionKind::Right:
        return "ChooseRight";
      case DecisionKind::Bind:
        return "BindTo " + rawToString(d.target);
      case DecisionKind::Lazy:
        return "LazyBind (lazyBind " + rawToString(d.thunk->freeNode->id.raw) + " " +
               wrap(shallow(d.thunk->expr)) + ")";
    }
    return "?";
  }

  // Shallow rendering of a possibly unevaluated value: pending right-hand
  // sides must show up in traces without being demanded.
  std::string shallow(const ValueRef& v) {
    switch (v->kind) {
      case Value::Kind::Susp:
        if (v->memo) return shallow(v->memo);
        return exprShallow(*v->expr, v->env);
      case Value::Kind::NativeSusp:
        if (v->memo) return shallow(v->memo);
        return "<susp>";
      case Value::Kind::Ctor: {
        std::string out = v->ctor->name;
        for (auto& a : v->args) out += " " + wrap(shallow(a));
        return out;
      }
      case Value::Kind::Partial: {
        std::string out = v->ctor ? v->ctor->name : rt_.func(v->funcId).name;
        for (auto& a : v->args) out += " " + wrap(shallow(a));
        return out;
      }
      case Value::Kind::Choice:
        return v->id.flavor == Flavor::Free ? "(FreeID " + rawToString(v->id.raw) + ")"
                                            : "(Choice " + rawToString(v->id.raw) + ")";
      case Value::Kind::Fail:
        return "failed";
      case Value::Kind::Guard:
        return "(guarded)";
    }
    return "?";
  }

  std::string exprShallow(const CExpr& e, const EnvRef& env) {
    switch (e.k) {
      case CExpr::K::Var:
        return shallow(lookupEnv(env, e.idx));
      case CExpr::K::Ctor:
      case CExpr::K::CtorRef: {
        std::string out = rt_.ctorInfo(e.idx).name;
        for (auto& a : e.args) out += " " + wrap(exprShallow(a, env));
        return out;
      }
      case CExpr::K::App:
      case CExpr::K::PApp: {
        std::string out = rt_.func(e.idx).name;
        for (auto& a : e.args) out += " " + wrap(exprShallow(a, env));
        return out;
      }
      case CExpr::K::ApplyTo: {
        std::string out = wrap(exprShallow(e.args[0], env));
        for (size_t i = 1; i < e.args.size(); ++i) out += " " + wrap(exprShallow(e.args[i], env));
        return out;
      }
      case CExpr::K::Choice:
        return "(?)";
      case CExpr::K::Case:
        return "(case)";
      case CExpr::K::Free:
        return "(free)";
      case CExpr::K::Fail:
        return "failed";
    }
    return "?";
  }

  Runtime& rt_;
};

}  // namespace

std::string renderValue(Runtime& rt, const ValueRef& v) { return UserRenderer(rt).render(v); }

std::string debugStruct(Runtime& rt, const ValueRef& v) { return DebugRenderer(rt).render(v); }

}  // namespace fleng
