#pragma once

#include "fleng/core.hpp"
#include "fleng/runtime.hpp"
#include "fleng/search.hpp"

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace fleng {

struct EngineOptions {
  bool usePrelude = true;
};

struct QueryOptions {
  Strategy strategy = Strategy::DFS;
  long long first = -1;  // stop after this many answers; -1 = all
  bool set = false;      // drop answers whose rendering was already reported
  long long stepBudget = -1;
  bool trace = false;
  std::ostream* traceOut = nullptr;
  bool paranoid = false;
  bool memo = true;
  std::vector<std::string> freeDecls;   // extra "x :: T" declarations
  const SearchProbe* probe = nullptr;  // instrumented-traversal hook
};

struct Answer {
  std::string text;  // the rendered value
  std::vector<std::pair<std::string, std::string>> bindings;
  std::string display;  // "{x = v, y = w} text", or just text
};

struct QueryResult {
  std::vector<Answer> answers;
  SearchStatus status = SearchStatus::Complete;
  Stats stats;
  long long steps = 0;
  long long lazyForces = 0;
  bool storeRestored = true;  // no decision survived the search
};

// A compiled program plus the machinery to answer queries against it.
class Engine {
 public:
  static Engine fromSource(const std::string& userSource, EngineOptions opts = {});

  QueryResult query(const std::string& queryText, const QueryOptions& opts = {}) const;

  const CoreProgram& program() const { return prog_; }

 private:
  Engine() = default;
  CoreProgram prog_;
};

}  // namespace fleng
