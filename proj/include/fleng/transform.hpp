#pragma once

#include "fleng/ast.hpp"
#include "fleng/core.hpp"

namespace fleng {

// Rewrites every rule whose patterns apply defined operations:
//   f (pat) = e   becomes   f y | pat =:<= y = e  where patvars free
// The synthesized free variables are typed from the data declarations and
// type signatures; an unresolvable variable type is an error, not a guess.
// Surface-to-surface; needs the whole (merged) module for signatures.
void desugarFunctionalPatterns(Module&);

// Compiles the merged module to core form: multi-rule pattern matching
// becomes single-variable case trees compiled column by column (columns
// chosen left to right per rule), overlapping rules combine with Choice in
// rule order, guards wrap right-hand sides in `cond`, and `where .. free`
// becomes Free. Also registers builtins and derives, per data type, a
// free-variable generator and structural equality.
CoreProgram compileModule(const Module&);

// Compiles "expr where frees" against a finished program. The answer is
// wrapped in a synthetic constructor carrying the value and one argument
// per declared free variable so bindings survive into search results.
QueryUnit compileQuery(const CoreProgram&, const Query&);

}  // namespace fleng
