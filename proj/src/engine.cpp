#include "fleng/engine.hpp"

#include "fleng/parser.hpp"
#include "fleng/prelude.hpp"
#include "fleng/render.hpp"
#include "fleng/transform.hpp"

#include <set>
#include <utility>

namespace fleng {

namespace {

void appendModule(Module& into, Module more) {
  for (auto& d : more.data) into.data.push_back(std::move(d));
  for (auto& s : more.sigs) into.sigs.push_back(std::move(s));
  for (auto& f : more.funcs) into.funcs.push_back(std::move(f));
}

// Undoes trailed store decisions on scope exit (rendering may add some).
struct StoreScope {
  DecisionStore& st;
  DecisionStore::Mark m;
  explicit StoreScope(DecisionStore& s) : st(s), m(s.mark()) {}
  ~StoreScope() { st.undoTo(m); }
};

}  // namespace

Engine Engine::fromSource(const std::string& userSource, EngineOptions opts) {
  Module merged;
  if (opts.usePrelude) merged = parseModule(preludeSource());
  appendModule(merged, parseModule(userSource));
  desugarFunctionalPatterns(merged);
  Engine e;
  e.prog_ = compileModule(merged);
  return e;
}

QueryResult Engine::query(const std::string& queryText, const QueryOptions& opts) const {
  Query q = parseQuery(queryText);
  for (auto& decl : opts.freeDecls) {
    FreeDecl fd = parseFreeDecl(decl);
    bool dup = false;
    for (auto& existing : q.frees) dup = dup || existing.name == fd.name;
    if (dup) throw LangError("free variable '" + fd.name + "' declared twice");
    q.frees.push_back(std::move(fd));
  }
  QueryUnit unit = compileQuery(prog_, q);

  Options ropts;
  ropts.stepBudget = opts.stepBudget;
  ropts.trace = opts.trace;
  ropts.traceOut = opts.traceOut;
  ropts.paranoid = opts.paranoid;
  ropts.memo = opts.memo;
  Runtime rt(prog_, &unit, ropts);

  QueryResult res;
  std::set<std::string> seen;
  AnswerSink sink = [&](const ValueRef& ansVal) -> bool {
    Answer a;
    {
      StoreScope scope(rt.store());  // demanding bindings may decide variables
      a.text = renderValue(rt, ansVal->args[0]);
      for (size_t i = 0; i < unit.freeNames.size(); ++i)
        a.bindings.emplace_back(unit.freeNames[i], renderValue(rt, ansVal->args[1 + i]));
    }
    if (a.bindings.empty()) {
      a.display = a.text;
    } else {
      a.display = "{";
      for (size_t i = 0; i < a.bindings.size(); ++i) {
        if (i) a.display += ", ";
        a.display += a.bindings[i].first + " = " + a.bindings[i].second;
      }
      a.display += "} " + a.text;
    }
    if (opts.set && !seen.insert(a.display).second)
      return opts.first < 0 || (long long)res.answers.size() < opts.first;
    res.answers.push_back(std::move(a));
    return opts.first < 0 || (long long)res.answers.size() < opts.first;
  };

  try {
    ValueRef root = rt.evalRoot();
    res.status = runSearch(rt, opts.strategy, root, sink, opts.probe);
  } catch (StepLimitExceeded&) {
    res.status = SearchStatus::StepBudget;
  }
  res.stats = rt.stats();
  res.steps = rt.stepsUsed();
  res.lazyForces = rt.lazyForces();
  res.storeRestored = rt.store().size() == 0;
  return res;
}

}  // namespace fleng
