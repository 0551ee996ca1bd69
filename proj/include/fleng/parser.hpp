#pragma once

#include "fleng/ast.hpp"

#include <string>

namespace fleng {

// Parses a whole program. Items start in column zero; indented lines
// continue the previous item; "--" starts a comment.
Module parseModule(const std::string& source);

// Parses "expr" or "expr where x::T, y::T free".
Query parseQuery(const std::string& text);

// Parses a single "name::Type" declaration (the CLI --free flag).
FreeDecl parseFreeDecl(const std::string& text);

}  // namespace fleng
