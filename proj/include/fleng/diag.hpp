#pragma once

#include <stdexcept>
#include <string>

namespace fleng {

struct SourcePos {
  int line = 0;  // 1-based; 0 means "no position"
  int col = 0;

  std::string str() const {
    if (line == 0) return "";
    return std::to_string(line) + ":" + std::to_string(col);
  }
};

// Raised for anything the user got wrong: syntax errors, unknown names,
// untypeable functional patterns, over-applied constructors, bad flags.
class LangError : public std::runtime_error {
 public:
  LangError(const std::string& msg, SourcePos pos = {})
      : std::runtime_error(pos.line ? pos.str() + ": " + msg : msg), pos_(pos) {}
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

// Raised when the evaluator exceeds its step budget.
class StepLimitExceeded : public std::runtime_error {
 public:
  explicit StepLimitExceeded(unsigned long long budget)
      : std::runtime_error("step budget exhausted (" + std::to_string(budget) + " steps)") {}
};

}  // namespace fleng
