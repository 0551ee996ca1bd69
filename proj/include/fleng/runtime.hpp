#pragma once

#include "fleng/core.hpp"
#include "fleng/diag.hpp"
#include "fleng/store.hpp"
#include "fleng/supply.hpp"
#include "fleng/value.hpp"

#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

namespace fleng {

struct Stats {
  long long choices = 0;   // choice nodes the search branched on
  long long failures = 0;  // failed branches (dead ends and conflicts)
  long long guards = 0;    // guard nodes whose constraints were applied
  long long forces = 0;    // lazy bindings forced (evaluated, not cache hits)
  std::string line() const;
};

struct Options {
  long long stepBudget = -1;  // function calls; -1 = unlimited
  bool trace = false;
  std::ostream* traceOut = nullptr;
  bool paranoid = false;  // store self-checks after every mutation
  // Suspension memoization is a performance device only: identifier threading
  // alone fixes each argument's decisions, so results must not change when
  // this is off (re-forcing replays the same expression with the same supply).
  bool memo = true;
};

// Evaluator for one query: owns the decision store, the statistics and the
// demand-order numbering of logic variables. Expression evaluation never
// consults the store (decisions are path-local; values are shared across
// search paths), so suspension memoization is always sound. Only the
// search, rendering and constraint resolution read decisions.
class Runtime : public LazyResolver {
 public:
  Runtime(const CoreProgram& prog, const QueryUnit* unit, Options opts = {});

  // Builds the (usually suspended) value of an expression.
  ValueRef evalExpr(const CExpr& e, const EnvRef& env, const IDSupply& s);
  // Head normal form: runs suspensions until the head is a constructor,
  // partial application, choice, failure or guard.
  ValueRef force(const ValueRef& v);
  // Deep normal form: normalizes constructor arguments, pulling ordinary
  // choices, failures and guards above constructors. Free-variable choices
  // stay in place (they render as residual variables unless decided).
  ValueRef nf(const ValueRef& v);

  ValueRef callFunc(int funcId, std::vector<ValueRef> args, const IDSupply& s);
  // Applies a value to arguments; extra may be empty to trigger a saturated
  // uncalled partial (how generator instances are spawned per use site).
  ValueRef applyValue(const ValueRef& fn, std::vector<ValueRef> extra, const IDSupply& s);

  ValueRef evalRoot();  // calls the query's root function with a fresh supply

  // Equation solving; bodies live with the rest of the unification code.
  ValueRef strictUnify(const ValueRef& a, const ValueRef& b);  // =:=
  ValueRef lazyUnify(const ValueRef& a, const ValueRef& b);    // =:<=

  // Store callbacks.
  ForceResult forceThunk(const std::shared_ptr<LazyBindThunk>& t) override;
  ForceResult unifyNodes(ValueRef a, ValueRef b) override;
  ValueRef forceValue(ValueRef v) override;

  // Turns an evaluated constraint expression (Success under guards/choices)
  // into decisions. Sets storeDependent when existing decisions were read.
  enum class SolveKind { Ok, Fail, Split };
  struct SolveResult {
    SolveKind k = SolveKind::Ok;
    std::vector<Constraint> cs;
    ValueRef splitNode;
  };
  SolveResult solveValueToConstraints(const ValueRef& v, bool& storeDependent);

  // Demand-order index of a logic variable (assigned at first creation;
  // rendering shows the n-th demanded variable as _xn).
  int displayIndexFor(const RawID& raw);
  bool hasDisplayIndex(const RawID& raw) const;

  const CtorInfo& ctorInfo(int id) const;
  const CoreFunc& func(int id) const;

  const CoreProgram& program() const { return prog_; }
  const QueryUnit* unit() const { return unit_; }
  DecisionStore& store() { return store_; }
  Stats& stats() { return stats_; }
  const Options& options() const { return opts_; }
  long long stepsUsed() const { return steps_; }
  long long lazyForces() const { return lazyForces_; }

 private:
  ValueRef successValue();
  // Chains the unification of one argument pair in front of `rest`.
  ValueRef conjValue(const ValueRef& u, const ValueRef& rest);
  ValueRef unifyArgs(const std::vector<ValueRef>& as, const std::vector<ValueRef>& bs, bool lazy);
  // Instantiates a free variable to a constructor's shape by descending its
  // generator choices, then unifies the fresh arguments (strictly or lazily,
  // keeping the original operand order).
  ValueRef bindFreeToCtor(const ValueRef& freeVal, const ValueRef& ctorVal, bool freeOnLeft,
                          bool lazy);
  ValueRef evalSuspended(const CExpr& e, const EnvRef& env, const IDSupply& s);
  ValueRef dispatchCase(const CExpr& e, const ValueRef& scrut, const EnvRef& env,
                        const IDSupply& s);
  ValueRef evalBuiltin(const CoreFunc& f, std::vector<ValueRef>& args, const IDSupply& s);
  ValueRef condValue(const ValueRef& g, const ValueRef& body);
  ValueRef eqValue(const ValueRef& a, const ValueRef& b, const IDSupply& s);
  // Splits s among the needing children; a lone needing child of a
  // constructor-like parent (no call to feed afterwards) takes s whole.
  std::vector<ValueRef> evalArgs(const std::vector<CExpr>& args, size_t first, const EnvRef& env,
                                 const IDSupply& s, bool hasCallee, IDSupply& rest);
  void step(const CoreFunc& f);

  const CoreProgram& prog_;
  const QueryUnit* unit_;
  Options opts_;
  DecisionStore store_;
  Stats stats_;
  long long steps_ = 0;
  long long lazyForces_ = 0;  // completed lazy-binding evaluations
  std::unordered_map<RawID, int, RawIDHash> displayIdx_;
  int nextDisplay_ = 1;

  friend class ValueRenderer;
};

// True when evaluating the expression consumes identifiers.
bool needsSupply(const CExpr& e);

}  // namespace fleng
