#pragma once

#include "fleng/runtime.hpp"
#include "fleng/value.hpp"

#include <exception>
#include <string>

namespace fleng {

// Thrown while rendering an answer whose pending lazy binding turns out to
// be unsatisfiable once the displayed variable demands it.
struct RenderFailure : std::exception {
  const char* what() const noexcept override { return "binding failed when demanded for display"; }
};

// Thrown when display demands a pending binding whose value still contains
// an undecided ordinary choice; the search decides it and renders again.
struct RenderSplit {
  ValueRef node;
};

// User-facing term rendering. Follows the decision store: bound variables
// show their binding, unbound ones render as _xN in demand order. Lists
// print as [a,b] when ground and as (h:t) otherwise; ground naturals print
// in decimal. May add trailed decisions (demanding pending bindings), so
// callers bracket it between a store mark and an undo.
std::string renderValue(Runtime& rt, const ValueRef& v);

// Structural rendering of the evaluated graph: Choice/Fail/Guard nodes,
// identifiers, and decisions (ChooseLeft, BindTo n, LazyBind (...)) are
// shown literally. Forces what it walks, except the right-hand sides held
// by pending lazy bindings, which render shallowly and stay unevaluated.
// Nested guards merge into one constraint list, matching how conjunctions
// accumulate. Does not follow the store.
std::string debugStruct(Runtime& rt, const ValueRef& v);

}  // namespace fleng
