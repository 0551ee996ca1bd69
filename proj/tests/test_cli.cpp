// End-to-end checks of the command-line tool: exit codes, answer printing,
// the statistics line, the benchmark table and the interactive session.
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
  int exitCode = -1;
  std::string out;
};

// Runs `command` under the shell, capturing stdout (append 2>&1 in the
// command itself to fold stderr in).
RunResult shell(const std::string& command) {
  RunResult r;
  FILE* p = popen(command.c_str(), "r");
  REQUIRE_MESSAGE(p != nullptr, "popen failed");
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.exitCode = (st >= 0 && WIFEXITED(st)) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string cli() { return std::string(FLENG_CLI_PATH); }

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  std::string l;
  while (std::getline(in, l)) v.push_back(l);
  return v;
}

std::string writeTemp(const std::string& name, const std::string& text) {
  std::string path = std::string("/tmp/") + name;
  std::ofstream out(path);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("run prints one answer per line and exits zero") {
  RunResult r = shell(cli() + " run -e aBool");
  CHECK(r.exitCode == 0);
  CHECK(lines(r.out) == std::vector<std::string>{"True", "False"});
}

TEST_CASE("run exits one when the query has no answers") {
  RunResult r = shell(cli() + " run -e failed 2>/dev/null");
  CHECK(r.exitCode == 1);
  CHECK(r.out.empty());
}

TEST_CASE("run exits two and reports errors for bad queries") {
  RunResult r = shell(cli() + " run -e nosuchname 2>&1");
  CHECK(r.exitCode == 2);
  CHECK(r.out.find("error:") != std::string::npos);
  CHECK(r.out.find("nosuchname") != std::string::npos);
}

TEST_CASE("run rejects an unknown strategy name") {
  RunResult r = shell(cli() + " run -e aBool --strategy sideways 2>&1");
  CHECK(r.exitCode != 0);
  CHECK(r.exitCode != 1);
}

TEST_CASE("the statistics line has the documented shape") {
  RunResult r = shell(cli() + " run -e 'xorSelf aBool' --stats");
  CHECK(r.exitCode == 0);
  CHECK(lines(r.out) ==
        std::vector<std::string>{"False", "False", "choices=1 failures=0 guards=0 forces=0"});
}

TEST_CASE("first limits the number of answers") {
  RunResult r = shell(cli() + " run -e aBool --first 1");
  CHECK(r.exitCode == 0);
  CHECK(lines(r.out) == std::vector<std::string>{"True"});
}

TEST_CASE("breadth-first ordering is observable from the command line") {
  RunResult dfs = shell(cli() + " run -e '(0 ? 1) ? 2'");
  CHECK(lines(dfs.out) == std::vector<std::string>{"0", "1", "2"});
  RunResult bfs = shell(cli() + " run -e '(0 ? 1) ? 2' --strategy bfs");
  CHECK(lines(bfs.out) == std::vector<std::string>{"2", "0", "1"});
}

TEST_CASE("free variables are declared with --free and shown in answers") {
  RunResult r = shell(cli() + " run -e 'x =:= True' --free 'x :: Bool'");
  CHECK(r.exitCode == 0);
  CHECK(lines(r.out) == std::vector<std::string>{"{x = True} Success"});
}

TEST_CASE("run loads a program file") {
  std::string path = writeTemp("fleng_cli_last.fl",
                               "lastOf :: [Bool] -> Bool\n"
                               "lastOf (xs ++ [x]) = x\n");
  RunResult r = shell(cli() + " run " + path + " -e 'lastOf [failed, True]' --stats");
  CHECK(r.exitCode == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == "True");
  CHECK(ls[1].find("forces=1") != std::string::npos);
}

TEST_CASE("run reports a missing program file") {
  RunResult r = shell(cli() + " run /tmp/no_such_fleng_file.fl -e aBool 2>&1");
  CHECK(r.exitCode == 2);
  CHECK(r.out.find("cannot open file") != std::string::npos);
}

TEST_CASE("the step budget aborts runaway queries") {
  std::string path = writeTemp("fleng_cli_loop.fl",
                               "g :: Nat\n"
                               "g = g ? 0\n");
  RunResult r = shell(cli() + " run " + path + " -e g --steps 2000 2>&1");
  CHECK(r.exitCode == 1);
  CHECK(r.out.find("step budget exhausted") != std::string::npos);
}

TEST_CASE("the benchmark table is tab-separated with a fixed header") {
  RunResult header = shell(cli() + " bench --scale 0");
  CHECK(header.exitCode == 0);
  CHECK(header.out == "benchmark\tmode\ttime_ms\tchoices\tfailures\tguards\tforces\n");

  RunResult r = shell(cli() + " bench unify --scale 1");
  CHECK(r.exitCode == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() > 1);
  for (size_t i = 1; i < ls.size(); ++i) {
    std::istringstream row(ls[i]);
    std::string name, mode;
    std::getline(row, name, '\t');
    std::getline(row, mode, '\t');
    CHECK(mode == "=:=");
  }
}

TEST_CASE("bench rejects an unknown suite") {
  RunResult r = shell(cli() + " bench nonsense --scale 0 2>&1");
  CHECK(r.exitCode != 0);
}

TEST_CASE("the interactive session answers queries and switches strategy") {
  std::string script =
      "head xs where xs :: [Bool] free\n"
      ":set strategy bfs\n"
      "(0 ? 1) ? 2\n"
      ":stats\n"
      "xorSelf aBool\n"
      ":wibble\n"
      "nosuchname\n"
      "failed\n"
      ":quit\n";
  std::string path = writeTemp("fleng_cli_repl.txt", script);
  RunResult r = shell(cli() + " repl < " + path + " 2>/dev/null");
  CHECK(r.exitCode == 0);
  CHECK(lines(r.out) == std::vector<std::string>{
                            "{xs = (_x2:_x3)} _x2",
                            "strategy = bfs",
                            "2",
                            "0",
                            "1",
                            "stats on",
                            "False",
                            "False",
                            "choices=1 failures=0 guards=0 forces=0",
                            "unknown command :wibble",
                            "error: 1:1: unknown name 'nosuchname'",
                            "no answers",
                            "choices=0 failures=1 guards=0 forces=0",
                        });
}
