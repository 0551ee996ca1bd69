#include "fleng/store.hpp"

#include <stdexcept>

namespace fleng {

const Decision* DecisionStore::rawLookup(const RawID& id) const {
  auto it = map_.find(id);
  return it == map_.end() ? nullptr : &it->second;
}

void DecisionStore::rawSet(const RawID& id, Decision d) {
  auto it = map_.find(id);
  trail_.emplace_back(id, it == map_.end() ? Decision::none() : it->second);
  if (d.kind == DecisionKind::None) {
    if (it != map_.end()) map_.erase(it);
  } else if (it == map_.end()) {
    map_.emplace(id, std::move(d));
  } else {
    it->second = std::move(d);
  }
}

void DecisionStore::undoTo(Mark m) {
  while (trail_.size() > m) {
    auto& [id, prev] = trail_.back();
    if (prev.kind == DecisionKind::None)
      map_.erase(id);
    else
      map_[id] = prev;
    trail_.pop_back();
  }
}

LookupResult DecisionStore::lookupDecision(const RawID& id) const {
  RawID cur = id;
  ValueRef node;
  for (;;) {
    const Decision* d = rawLookup(cur);
    if (!d) return {cur, Decision::none(), node};
    if (d->kind == DecisionKind::Bind) {
      node = d->targetNode;
      cur = d->target;
      continue;
    }
    return {cur, *d, node};
  }
}

void DecisionStore::setDecision(const RawID& id, Decision d) {
  LookupResult lk = lookupDecision(id);
  rawSet(lk.rep, std::move(d));
  checkParanoid();
}

// Forces the lazy binding held at rep, clears it, and applies the implied
// constraints; rep ends up concretely decided (or the attempt fails/splits).
DecisionStore::ApplyResult DecisionStore::resolveLazyAt(const RawID& rep,
                                                        const std::shared_ptr<LazyBindThunk>& t,
                                                        LazyResolver& r, ValueRef& splitOut) {
  ForceResult f = r.forceThunk(t);
  if (f.k == ForceResult::K::Inconsistent) return ApplyResult::Conflict;
  if (f.k == ForceResult::K::Split) {
    splitOut = f.splitNode;
    return ApplyResult::Split;
  }
  rawSet(rep, Decision::none());
  return applyAll(f.cs, r, splitOut);
}

DecisionStore::ApplyResult DecisionStore::applyOne(const Constraint& c, LazyResolver& r,
                                                   ValueRef& splitOut) {
  LookupResult lk = lookupDecision(c.id);
  const Decision& d = c.d;
  switch (d.kind) {
    case DecisionKind::None:
      throw std::logic_error("constraint carries no decision");

    case DecisionKind::Left:
    case DecisionKind::Right:
      if (lk.d.kind == DecisionKind::None) {
        rawSet(lk.rep, d.kind == DecisionKind::Left ? Decision::left() : Decision::right());
        return ApplyResult::Ok;
      }
      if (lk.d.kind == d.kind) return ApplyResult::Ok;
      if (lk.d.kind == DecisionKind::Lazy) {
        // The pending binding resolves first; then this decision must agree.
        ApplyResult a = resolveLazyAt(lk.rep, lk.d.thunk, r, splitOut);
        if (a != ApplyResult::Ok) return a;
        return applyOne(c, r, splitOut);
      }
      return ApplyResult::Conflict;

    case DecisionKind::Bind: {
      LookupResult lj = lookupDecision(d.target);
      if (lk.rep == lj.rep) return ApplyResult::Ok;  // already one class
      if (lk.d.kind == DecisionKind::None) {
        rawSet(lk.rep, Decision::bind(lj.rep, d.selfNode, lj.repNode ? lj.repNode : d.targetNode));
        return ApplyResult::Ok;
      }
      if (lj.d.kind == DecisionKind::None) {
        rawSet(lj.rep, Decision::bind(lk.rep, d.targetNode, lk.repNode ? lk.repNode : d.selfNode));
        return ApplyResult::Ok;
      }
      // Both variables already carry structure: walk it for agreement.
      return agreeStructures(lk.repNode ? lk.repNode : d.selfNode,
                             lj.repNode ? lj.repNode : d.targetNode, r, splitOut);
    }

    case DecisionKind::Lazy: {
      if (lk.d.kind == DecisionKind::None) {
        rawSet(lk.rep, d);
        return ApplyResult::Ok;
      }
      if (lk.d.kind == DecisionKind::Lazy) {
        // The variable is lazily bound twice (a non-linear functional
        // pattern): evaluate both sides and require them to unify.
        ForceResult f = r.unifyNodes(lk.d.thunk->expr, d.thunk->expr);
        if (f.k == ForceResult::K::Inconsistent) return ApplyResult::Conflict;
        if (f.k == ForceResult::K::Split) {
          splitOut = f.splitNode;
          return ApplyResult::Split;
        }
        return applyAll(f.cs, r, splitOut);
      }
      // Concrete structure already present: the lazy binding must agree.
      ForceResult f = r.forceThunk(d.thunk);
      if (f.k == ForceResult::K::Inconsistent) return ApplyResult::Conflict;
      if (f.k == ForceResult::K::Split) {
        splitOut = f.splitNode;
        return ApplyResult::Split;
      }
      return applyAll(f.cs, r, splitOut);
    }
  }
  return ApplyResult::Conflict;
}

DecisionStore::ApplyResult DecisionStore::agreeStructures(ValueRef a, ValueRef b,
                                                          LazyResolver& r, ValueRef& splitOut) {
  ValueRef av = r.forceValue(a);
  ValueRef bv = r.forceValue(b);
  bool aChoice = av->kind == Value::Kind::Choice;
  bool bChoice = bv->kind == Value::Kind::Choice;
  if (!aChoice && !bChoice) {
    // Single-constructor generator parts: match structurally.
    if (av->kind != Value::Kind::Ctor || bv->kind != Value::Kind::Ctor ||
        av->ctor != bv->ctor)
      return ApplyResult::Conflict;
    for (size_t i = 0; i < av->args.size(); ++i) {
      ApplyResult s = agreeStructures(av->args[i], bv->args[i], r, splitOut);
      if (s != ApplyResult::Ok) return s;
    }
    return ApplyResult::Ok;
  }
  if (aChoice != bChoice) return ApplyResult::Conflict;  // differing generator shapes

  LookupResult la = lookupDecision(av->id.raw);
  LookupResult lb = lookupDecision(bv->id.raw);
  if (la.rep == lb.rep) return ApplyResult::Ok;
  if (la.d.kind == DecisionKind::Lazy) {
    ApplyResult s = resolveLazyAt(la.rep, la.d.thunk, r, splitOut);
    if (s != ApplyResult::Ok) return s;
    return agreeStructures(av, bv, r, splitOut);
  }
  if (lb.d.kind == DecisionKind::Lazy) {
    ApplyResult s = resolveLazyAt(lb.rep, lb.d.thunk, r, splitOut);
    if (s != ApplyResult::Ok) return s;
    return agreeStructures(av, bv, r, splitOut);
  }
  if (la.d.kind == DecisionKind::None) {
    rawSet(la.rep, Decision::bind(lb.rep, av, lb.repNode ? lb.repNode : bv));
    return ApplyResult::Ok;
  }
  if (lb.d.kind == DecisionKind::None) {
    rawSet(lb.rep, Decision::bind(la.rep, bv, la.repNode ? la.repNode : av));
    return ApplyResult::Ok;
  }
  if (la.d.kind != lb.d.kind) return ApplyResult::Conflict;
  ValueRef nextA = la.d.kind == DecisionKind::Left ? av->left : av->right;
  ValueRef nextB = lb.d.kind == DecisionKind::Left ? bv->left : bv->right;
  return agreeStructures(nextA, nextB, r, splitOut);
}

DecisionStore::ApplyResult DecisionStore::applyAll(std::span<const Constraint> cs,
                                                   LazyResolver& r, ValueRef& splitOut) {
  for (const Constraint& c : cs) {
    ApplyResult a = applyOne(c, r, splitOut);
    if (a != ApplyResult::Ok) return a;
  }
  return ApplyResult::Ok;
}

AddOutcome DecisionStore::addConstraints(std::span<const Constraint> cs, LazyResolver& r) {
  Mark m = mark();
  ValueRef splitNode;
  ApplyResult a = applyAll(cs, r, splitNode);
  switch (a) {
    case ApplyResult::Ok:
      checkParanoid();
      return {AddOutcome::K::Ok, m, nullptr};
    case ApplyResult::Conflict:
      undoTo(m);
      return {AddOutcome::K::Conflict, m, nullptr};
    case ApplyResult::Split:
      undoTo(m);
      return {AddOutcome::K::Split, m, splitNode};
  }
  undoTo(m);
  return {AddOutcome::K::Conflict, m, nullptr};
}

AddOutcome DecisionStore::demand(const RawID& id, LazyResolver& r) {
  Mark m = mark();
  LookupResult lk = lookupDecision(id);
  if (lk.d.kind != DecisionKind::Lazy) return {AddOutcome::K::Ok, m, nullptr};
  ValueRef splitNode;
  ApplyResult a = resolveLazyAt(lk.rep, lk.d.thunk, r, splitNode);
  switch (a) {
    case ApplyResult::Ok:
      checkParanoid();
      return {AddOutcome::K::Ok, m, nullptr};
    case ApplyResult::Conflict:
      undoTo(m);
      return {AddOutcome::K::Conflict, m, nullptr};
    case ApplyResult::Split:
      undoTo(m);
      return {AddOutcome::K::Split, m, splitNode};
  }
  undoTo(m);
  return {AddOutcome::K::Conflict, m, nullptr};
}

std::string DecisionStore::validate() const {
  for (auto& [id, d] : map_) {
    if (d.kind == DecisionKind::None) return "stored NoDecision for id " + rawToString(id);
    if (d.kind != DecisionKind::Bind) continue;
    // Floyd cycle check along the bind chain starting here.
    RawID slow = id, fast = id;
    for (;;) {
      const Decision* df = rawLookup(fast);
      if (!df || df->kind != DecisionKind::Bind) break;
      fast = df->target;
      df = rawLookup(fast);
      if (!df || df->kind != DecisionKind::Bind) break;
      fast = df->target;
      slow = rawLookup(slow)->target;
      if (slow == fast) return "bind cycle through id " + rawToString(id);
    }
  }
  return "";
}

void DecisionStore::checkParanoid() const {
  if (!paranoid_) return;
  std::string err = validate();
  if (!err.empty()) throw std::logic_error("decision store inconsistent: " + err);
}

}  // namespace fleng
