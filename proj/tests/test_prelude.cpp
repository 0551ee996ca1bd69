#include <doctest.h>

#include "fleng/engine.hpp"

#include <algorithm>
#include <string>
#include <vector>

using namespace fleng;

namespace {

const Engine& preludeEngine() {
  static Engine e = Engine::fromSource("");
  return e;
}

std::vector<std::string> texts(const std::string& query, QueryOptions opts = {}) {
  QueryResult r = preludeEngine().query(query, opts);
  std::vector<std::string> out;
  for (auto& a : r.answers) out.push_back(a.text);
  return out;
}

std::string one(const std::string& query) {
  std::vector<std::string> t = texts(query);
  REQUIRE_MESSAGE(t.size() == 1, query, " should have exactly one value, got ", t.size());
  return t[0];
}

}  // namespace

TEST_CASE("the prelude exposes its standard operations") {
  const CoreProgram& p = preludeEngine().program();
  for (const char* name :
       {"not", "and", "or", "xor", "xorSelf", "aBool", "aBoolList", "id", "ite", "otherwise",
        "fst", "snd", "head", "tail", "null", "++", "map", "length", "reverse", "add", "elem",
        "removeAll", "nub", "=:=", "=:<=", "==", "cond", "failed", "&"}) {
    CHECK_MESSAGE(p.funcByName.count(name) == 1, "missing: ", name);
  }
  for (const char* ty : {"Bool", "Success", "Nat", "Maybe", "Pair", "[]"})
    CHECK_MESSAGE(p.typeByName.count(ty) == 1, "missing type: ", ty);
}

TEST_CASE("boolean operations compute their full truth tables") {
  auto b = [](bool v) { return v ? std::string("True") : std::string("False"); };
  for (bool x : {true, false}) {
    CHECK(one("not " + b(x)) == b(!x));
    CHECK(one("xorSelf " + b(x)) == "False");
    for (bool y : {true, false}) {
      CHECK(one("and " + b(x) + " " + b(y)) == b(x && y));
      CHECK(one("or " + b(x) + " " + b(y)) == b(x || y));
      CHECK(one("xor " + b(x) + " " + b(y)) == b(x != y));
      CHECK(one("ite " + b(x) + " " + b(y) + " " + b(!y)) == b(x ? y : !y));
    }
  }
  CHECK(one("otherwise") == "True");
}

TEST_CASE("list operations work and render as bracketed lists") {
  CHECK(one("[True] ++ [False]") == "[True,False]");
  CHECK(one("[] ++ []") == "[]");
  CHECK(one("head [True,False]") == "True");
  CHECK(one("tail [True,False]") == "[False]");
  CHECK(one("null []") == "True");
  CHECK(one("null [True]") == "False");
  CHECK(one("reverse [1,2,3]") == "[3,2,1]");
  CHECK(one("map not [True,False]") == "[False,True]");
  CHECK(one("map S [0,1]") == "[1,2]");
  CHECK(one("map (S) [0]") == "[1]");
}

TEST_CASE("numerals are unary naturals and render back as decimals") {
  CHECK(one("add 2 3") == "5");
  CHECK(one("add 0 0") == "0");
  CHECK(one("length [True,True]") == "2");
  CHECK(one("S (S Z)") == "2");
}

TEST_CASE("pattern-match failure simply produces no value") {
  CHECK(texts("head []").empty());
  CHECK(texts("tail []").empty());
  CHECK(texts("failed").empty());
}

TEST_CASE("equality, membership and duplicate removal agree with structure") {
  CHECK(one("elem False [True,False]") == "True");
  CHECK(one("elem False [True,True]") == "False");
  CHECK(one("removeAll True [True,False,True]") == "[False]");
  CHECK(one("nub [True,True]") == "[True]");
  CHECK(one("nub [True,False,True,False]") == "[True,False]");
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 3; ++j) {
      std::string q = std::to_string(i) + " == " + std::to_string(j);
      CHECK_MESSAGE(one(q) == (i == j ? "True" : "False"), q);
    }
}

TEST_CASE("pairs and maybes construct and project") {
  CHECK(one("fst (Pair True 0)") == "True");
  CHECK(one("snd (Pair True 0)") == "0");
  CHECK(one("Just True") == "Just True");
  CHECK(one("Nothing") == "Nothing");
  CHECK(one("Pair (Just False) []") == "Pair (Just False) []");
}

TEST_CASE("aBool stays a residual variable until something demands it") {
  CHECK(texts("aBool") == std::vector<std::string>{"_x1"});
  // Demand narrows the generator and enumerates both booleans.
  CHECK(texts("not aBool") == std::vector<std::string>{"False", "True"});
}

TEST_CASE("aBoolList enumerates boolean lists once demanded") {
  CHECK(texts("aBoolList") == std::vector<std::string>{"_x1"});
  QueryOptions bfs;
  bfs.strategy = Strategy::BFS;
  bfs.first = 7;
  std::vector<std::string> got = texts("map not aBoolList", bfs);
  std::vector<std::string> want = {"[]",          "[True]",       "[False]",     "[True,True]",
                                   "[True,False]", "[False,True]", "[False,False]"};
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  CHECK(got == want);
}

TEST_CASE("free variables enumerate their type only as far as demanded") {
  // length forces the spine of the generated list but never the elements,
  // so every length appears exactly once.
  QueryOptions bfs;
  bfs.strategy = Strategy::BFS;
  bfs.first = 4;
  QueryResult r = preludeEngine().query("length xs where xs :: [Bool] free", bfs);
  std::vector<std::string> got;
  for (auto& a : r.answers) got.push_back(a.text);
  std::sort(got.begin(), got.end());
  CHECK(got == std::vector<std::string>{"0", "1", "2", "3"});
}

TEST_CASE("a free boolean constrained by equality enumerates candidates in order") {
  QueryOptions dfs;
  dfs.first = 3;
  QueryResult r = preludeEngine().query("n == 2 where n :: Nat free", dfs);
  std::vector<std::string> got;
  for (auto& a : r.answers) got.push_back(a.display);
  CHECK(got == std::vector<std::string>{"{n = 0} False", "{n = 1} False", "{n = 2} True"});
}

TEST_CASE("success conjunction and cond gate evaluation") {
  CHECK(one("(True =:= True) & (False =:= False)") == "Success");
  CHECK(texts("(True =:= False) & (False =:= False)").empty());
  CHECK(one("cond (True =:= True) False") == "False");
  CHECK(texts("cond (True =:= False) True").empty());
}

TEST_CASE("the prelude can be disabled for self-contained programs") {
  EngineOptions opts;
  opts.usePrelude = false;
  Engine e = Engine::fromSource("data B = T | F\nflip T = F\nflip F = T\n", opts);
  QueryResult r = e.query("flip T");
  REQUIRE(r.answers.size() == 1);
  CHECK(r.answers[0].text == "F");
  CHECK_THROWS(e.query("not True"));
}
