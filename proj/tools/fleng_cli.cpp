#include "fleng/diag.hpp"
#include "fleng/engine.hpp"

#include "bench_cases.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _WIN32
#include <io.h>
#define FLENG_ISATTY _isatty
#define FLENG_FILENO _fileno
#else
#include <unistd.h>
#define FLENG_ISATTY isatty
#define FLENG_FILENO fileno
#endif

namespace {

struct CommonFlags {
  std::string strategy = "dfs";
  long long first = -1;
  bool all = false;
  bool set = false;
  bool stats = false;
  bool trace = false;
  bool noPrelude = false;
  long long steps = -1;
  std::vector<std::string> frees;
};

fleng::Strategy parseStrategy(const std::string& s) {
  if (s == "dfs") return fleng::Strategy::DFS;
  if (s == "bfs") return fleng::Strategy::BFS;
  if (s == "ids") return fleng::Strategy::IDS;
  throw fleng::LangError("unknown strategy '" + s + "' (expected dfs, bfs or ids)");
}

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fleng::LangError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void addCommon(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--strategy", f.strategy, "search strategy: dfs, bfs or ids")
      ->check(CLI::IsMember({"dfs", "bfs", "ids"}));
  cmd->add_option("--first", f.first, "stop after N answers");
  cmd->add_flag("--all", f.all, "collect every answer (default)");
  cmd->add_flag("--set", f.set, "report each distinct answer once");
  cmd->add_flag("--stats", f.stats, "print evaluation statistics");
  cmd->add_flag("--trace", f.trace, "trace function calls to stderr");
  cmd->add_flag("--no-prelude", f.noPrelude, "do not load the prelude");
  cmd->add_option("--steps", f.steps, "abort evaluation after N function calls");
  cmd->add_option("--free", f.frees, "declare a free variable, e.g. --free \"xs :: [Bool]\"");
}

fleng::QueryOptions queryOptions(const CommonFlags& f) {
  fleng::QueryOptions q;
  q.strategy = parseStrategy(f.strategy);
  q.first = f.all ? -1 : f.first;
  q.set = f.set;
  q.stepBudget = f.steps;
  q.trace = f.trace;
  q.traceOut = &std::cerr;
  q.freeDecls = f.frees;
  return q;
}

void reportStatus(const fleng::QueryResult& r) {
  if (r.status == fleng::SearchStatus::StepBudget)
    std::cerr << "search aborted: step budget exhausted after " << r.steps << " calls\n";
}

int runQuery(const fleng::Engine& eng, const std::string& expr, const CommonFlags& flags) {
  fleng::QueryResult r = eng.query(expr, queryOptions(flags));
  for (const auto& a : r.answers) std::cout << a.display << "\n";
  if (flags.stats) std::cout << r.stats.line() << "\n";
  reportStatus(r);
  return r.answers.empty() ? 1 : 0;
}

int cmdRun(const std::string& file, const std::string& expr, const CommonFlags& flags) {
  fleng::EngineOptions eopts;
  eopts.usePrelude = !flags.noPrelude;
  std::string source = file.empty() ? std::string() : readFile(file);
  fleng::Engine eng = fleng::Engine::fromSource(source, eopts);
  return runQuery(eng, expr, flags);
}

int cmdRepl(const std::string& file, CommonFlags flags) {
  fleng::EngineOptions eopts;
  eopts.usePrelude = !flags.noPrelude;
  std::string source = file.empty() ? std::string() : readFile(file);
  fleng::Engine eng = fleng::Engine::fromSource(source, eopts);

  bool tty = FLENG_ISATTY(FLENG_FILENO(stdin)) != 0;
  if (tty)
    std::cout << "fleng interactive session. :quit leaves, :set <strategy> switches search, "
                 ":stats toggles statistics.\n";
  std::string line;
  for (;;) {
    if (tty) std::cout << "fleng> " << std::flush;
    if (!std::getline(std::cin, line)) break;
    std::string trimmed = line;
    while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t'))
      trimmed.pop_back();
    size_t b = trimmed.find_first_not_of(" \t");
    trimmed = b == std::string::npos ? "" : trimmed.substr(b);
    if (trimmed.empty()) continue;
    if (trimmed == ":quit" || trimmed == ":q") break;
    if (trimmed.rfind(":set ", 0) == 0) {
      std::string s = trimmed.substr(5);
      if (s.rfind("strategy ", 0) == 0) s = s.substr(9);
      try {
        parseStrategy(s);
        flags.strategy = s;
        std::cout << "strategy = " << s << "\n";
      } catch (fleng::LangError& e) {
        std::cout << e.what() << "\n";
      }
      continue;
    }
    if (trimmed == ":stats") {
      flags.stats = !flags.stats;
      std::cout << "stats " << (flags.stats ? "on" : "off") << "\n";
      continue;
    }
    if (trimmed[0] == ':') {
      std::cout << "unknown command " << trimmed << "\n";
      continue;
    }
    try {
      fleng::QueryResult r = eng.query(trimmed, queryOptions(flags));
      if (r.answers.empty()) std::cout << "no answers\n";
      for (const auto& a : r.answers) std::cout << a.display << "\n";
      if (flags.stats) std::cout << r.stats.line() << "\n";
      reportStatus(r);
    } catch (fleng::LangError& e) {
      std::cout << "error: " << e.what() << "\n";
    }
  }
  return 0;
}

// ---- benchmarks ----------------------------------------------------------

// One row per (program, equation style); reports the time and the search
// effort to the first answer. Absolute times are machine-bound; the point of
// the table is the ordering of the choice counts between the styles.
int cmdBench(const std::string& suite, long long scale, const CommonFlags& flags) {
  std::cout << "benchmark\tmode\ttime_ms\tchoices\tfailures\tguards\tforces\n";
  if (scale <= 0) return 0;
  for (const flbench::BenchCase& c : flbench::benchCases(scale, suite)) {
    fleng::Engine eng = fleng::Engine::fromSource(c.program);
    fleng::QueryOptions q = queryOptions(flags);
    q.first = 1;
    auto t0 = std::chrono::steady_clock::now();
    fleng::QueryResult r = eng.query(c.query, q);
    auto t1 = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    std::cout << c.name << "\t" << c.mode << "\t" << (long long)ms << "\t" << r.stats.choices
              << "\t" << r.stats.failures << "\t" << r.stats.guards << "\t" << r.stats.forces
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"functional-logic evaluation engine"};
  app.require_subcommand(1);

  std::string runFile, runExpr;
  CommonFlags runFlags;
  CLI::App* run = app.add_subcommand("run", "evaluate one query against a program");
  run->add_option("file", runFile, "program file (optional)");
  run->add_option("-e,--expr", runExpr, "query expression")->required();
  addCommon(run, runFlags);

  std::string replFile;
  CommonFlags replFlags;
  CLI::App* repl = app.add_subcommand("repl", "interactive query session");
  repl->add_option("file", replFile, "program file (optional)");
  addCommon(repl, replFlags);

  long long scale = 1;
  std::string suite = "all";
  CommonFlags benchFlags;
  CLI::App* bench = app.add_subcommand("bench", "run the built-in benchmarks");
  bench->add_option("suite", suite, "equations (==), unify (=:=), funpat (=:<=) or all")
      ->check(CLI::IsMember({"equations", "unify", "funpat", "all"}));
  bench->add_option("--scale", scale, "problem size multiplier (0 prints the header only)");
  addCommon(bench, benchFlags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmdRun(runFile, runExpr, runFlags);
    if (repl->parsed()) return cmdRepl(replFile, replFlags);
    if (bench->parsed()) return cmdBench(suite, scale, benchFlags);
  } catch (fleng::LangError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
