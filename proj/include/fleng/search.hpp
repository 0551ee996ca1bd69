#pragma once

#include "fleng/runtime.hpp"
#include "fleng/value.hpp"

#include <functional>
#include <memory>

namespace fleng {

enum class Strategy { DFS, BFS, IDS };

enum class SearchStatus {
  Complete,   // the whole space was explored
  Stopped,    // the sink asked to stop (answer limit)
  StepBudget  // evaluation ran out of steps
};

// Receives each answer (the synthetic answer constructor) while the path's
// decisions are live in the store, so rendering can follow bindings.
// Returns false to stop the search.
using AnswerSink = std::function<bool(const ValueRef&)>;

// Hook for instrumented traversals (depth-first only). The walk reports one
// enter/exit pair per trail scope it opens, every choice resolution (whether
// freshly decided or an existing decision followed) inside the current
// scope, and each completed answer. An audit can replay the scopes to check
// that no path resolves the same identifier both ways.
struct SearchProbe {
  std::function<void()> enterScope;
  std::function<void()> exitScope;
  std::function<void(const RawID&, bool)> resolve;  // id, took-left?
  std::function<void(const ValueRef&)> answer;
};

SearchStatus runSearch(Runtime& rt, Strategy strat, const ValueRef& root, const AnswerSink& sink,
                       const SearchProbe* probe = nullptr);

// Explicit search-space tree up to a depth limit (in decisions), mainly for
// inspection and tests. Guards are transparent; failed branches show up as
// Failure nodes; anything past the limit is Unexplored.
struct SearchTree {
  enum class K { Leaf, Failure, Branch, Unexplored };
  K k = K::Failure;
  ValueRef leaf;  // Leaf: the answer value
  ID id;          // Branch: the choice that was decided
  std::unique_ptr<SearchTree> left, right;
};

SearchTree collectTree(Runtime& rt, const ValueRef& root, int depthLimit);

}  // namespace fleng
