#pragma once

#include "fleng/supply.hpp"
#include "fleng/value.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace fleng {

// How a pending lazy binding resolved when it was demanded.
struct ForceResult {
  enum class K { Ok, Inconsistent, Split } k = K::Ok;
  std::vector<Constraint> cs;  // Ok: decisions implied by the binding
  ValueRef splitNode;          // Split: undecided ordinary choice to branch on
};

// The store calls back into the evaluator when applying a constraint
// requires head-normalizing a value or evaluating a suspended binding.
class LazyResolver {
 public:
  virtual ~LazyResolver() = default;
  virtual ForceResult forceThunk(const std::shared_ptr<LazyBindThunk>&) = 0;
  // Unifies two arbitrary values (used when a variable receives two lazy
  // bindings) and reports the implied constraints.
  virtual ForceResult unifyNodes(ValueRef a, ValueRef b) = 0;
  virtual ValueRef forceValue(ValueRef v) = 0;
};

struct LookupResult {
  RawID rep;         // end of the binding chain
  Decision d;        // the representative's own decision (never Bind)
  ValueRef repNode;  // representative's node, when reached through a Bind
};

struct AddOutcome {
  enum class K { Ok, Conflict, Split } k = K::Ok;
  size_t mark = 0;     // Ok: undo point for removeConstraints
  ValueRef splitNode;  // Split: choice the caller must decide first
};

// Decisions for choice identifiers, with a trail so search can undo.
// Failed or split additions roll themselves back before returning.
class DecisionStore {
 public:
  using Mark = size_t;

  Mark mark() const { return trail_.size(); }
  void undoTo(Mark m);

  // Follows Bind chains to the representative.
  LookupResult lookupDecision(const RawID& id) const;

  // Records d at the representative of id (trailed).
  void setDecision(const RawID& id, Decision d);

  AddOutcome addConstraints(std::span<const Constraint> cs, LazyResolver& r);
  void removeConstraints(Mark m) { undoTo(m); }

  // Resolves the pending lazy binding of id (if any) into concrete
  // decisions, as if the variable had been demanded. Transactional like
  // addConstraints; a no-op Ok when the variable has no pending binding.
  AddOutcome demand(const RawID& id, LazyResolver& r);

  // Paranoid mode re-validates after every mutation (acceptance uses it).
  void setParanoid(bool on) { paranoid_ = on; }
  // Checks chain acyclicity and that nothing maps to NoDecision.
  // Returns an empty string when consistent.
  std::string validate() const;

  size_t size() const { return map_.size(); }

 private:
  enum class ApplyResult { Ok, Conflict, Split };
  ApplyResult applyOne(const Constraint& c, LazyResolver& r, ValueRef& splitOut);
  ApplyResult applyAll(std::span<const Constraint> cs, LazyResolver& r, ValueRef& splitOut);
  // Lockstep walk over two bound variables' decided structure, binding
  // still-undecided corresponding sub-variables to each other.
  ApplyResult agreeStructures(ValueRef a, ValueRef b, LazyResolver& r, ValueRef& splitOut);
  ApplyResult resolveLazyAt(const RawID& rep, const std::shared_ptr<LazyBindThunk>& t,
                            LazyResolver& r, ValueRef& splitOut);
  const Decision* rawLookup(const RawID& id) const;
  void rawSet(const RawID& id, Decision d);
  void checkParanoid() const;

  std::unordered_map<RawID, Decision, RawIDHash> map_;
  std::vector<std::pair<RawID, Decision>> trail_;
  bool paranoid_ = false;
};

}  // namespace fleng
