#include <doctest.h>

#include "eval_session.hpp"

#include "fleng/engine.hpp"

#include <string>
#include <vector>

using namespace fleng;
using evaltest::answerDisplays;
using evaltest::answerTexts;
using evaltest::structureOf;

TEST_CASE("strict unification of identical ground constructors succeeds") {
  CHECK(structureOf("", "True =:= True") == "Success");
  CHECK(structureOf("", "0 =:= 0") == "Success");
  CHECK(structureOf("", "[True,False] =:= [True,False]") == "Success");
}

TEST_CASE("strict unification of clashing constructors fails") {
  CHECK(structureOf("", "True =:= False") == "Fail");
  CHECK(structureOf("", "0 =:= 1") == "Fail");
  CHECK(structureOf("", "[True] =:= [True,False]") == "Fail");
  CHECK(structureOf("", "[True] =:= []") == "Fail");
}

TEST_CASE("unifying a free variable with a constructor emits a binding guard") {
  // True is the first alternative of the Bool generator, False the second.
  CHECK(structureOf("", "x =:= True where x :: Bool free") ==
        "Guard [2 :=: ChooseLeft] Success");
  CHECK(structureOf("", "x =:= False where x :: Bool free") ==
        "Guard [2 :=: ChooseRight] Success");
  CHECK(structureOf("", "True =:= x where x :: Bool free") ==
        "Guard [2 :=: ChooseLeft] Success");
}

TEST_CASE("unifying two free variables binds one identifier to the other") {
  CHECK(structureOf("", "x =:= y where x :: Bool, y :: Bool free") ==
        "Guard [2 :=: BindTo 6] Success");
}

TEST_CASE("unifying a free variable with itself needs no constraint") {
  CHECK(structureOf("", "x =:= x where x :: Bool free") == "Success");
}

TEST_CASE("unification distributes over ordinary choices") {
  CHECK(structureOf("", "(True ? False) =:= True") == "Choice 2 Success Fail");
  CHECK(structureOf("", "(True ? False) =:= False") == "Choice 2 Fail Success");
}

TEST_CASE("unifying a generator binds its identifier instead of branching") {
  CHECK(structureOf("", "aBool =:= True") == "Guard [2 :=: ChooseLeft] Success");
}

TEST_CASE("failure propagates through unification from either side") {
  CHECK(structureOf("", "failed =:= True") == "Fail");
  CHECK(structureOf("", "True =:= failed") == "Fail");
}

TEST_CASE("structured operands unify componentwise, accumulating constraints") {
  // The list spine narrows to cons then nil, the element to True.
  CHECK(structureOf("", "xs =:= [True] where xs :: [Bool] free") ==
        "Guard [2 :=: ChooseRight, 10 :=: ChooseLeft, 22 :=: ChooseLeft] Success");
}

TEST_CASE("conjunction merges the guards of both equations") {
  CHECK(structureOf("", "(x =:= True) & (y =:= False) where x :: Bool, y :: Bool free") ==
        "Guard [2 :=: ChooseLeft, 6 :=: ChooseRight] Success");
}

TEST_CASE("lazy unification suspends the right-hand side instead of evaluating it") {
  CHECK(structureOf("", "x =:<= True where x :: Bool free") ==
        "Guard [2 :=: LazyBind (lazyBind 2 True)] Success");
  // Even an undefined right-hand side suspends; strict unification fails it.
  CHECK(structureOf("", "x =:<= failed where x :: Bool free") ==
        "Guard [2 :=: LazyBind (lazyBind 2 failed)] Success");
  CHECK(structureOf("", "x =:= failed where x :: Bool free") == "Fail");
}

TEST_CASE("searching a strict equation enumerates exactly the solutions") {
  Engine e = Engine::fromSource("");
  CHECK(answerDisplays(e, "x =:= True where x :: Bool free") ==
        std::vector<std::string>{"{x = True} Success"});
  CHECK(answerDisplays(e, "(x =:= True) & (x =:= True) where x :: Bool free") ==
        std::vector<std::string>{"{x = True} Success"});
  CHECK(answerTexts(e, "(x =:= True) & (x =:= False) where x :: Bool free").empty());
}

TEST_CASE("two bound variables display as one residual variable") {
  Engine e = Engine::fromSource("");
  std::vector<std::string> got =
      answerDisplays(e, "x =:= y where x :: Bool, y :: Bool free");
  REQUIRE(got.size() == 1);
  CHECK(got[0] == "{x = _x2, y = _x2} Success");
}

TEST_CASE("equations solve list concatenation in both directions") {
  Engine e = Engine::fromSource("");
  CHECK(answerDisplays(e, "xs ++ [True] =:= [False,True] where xs :: [Bool] free") ==
        std::vector<std::string>{"{xs = [False]} Success"});
  // All splits of a two-element list, in left-prefix order.
  CHECK(answerDisplays(e, "xs ++ ys =:= [True,False] where xs :: [Bool], ys :: [Bool] free") ==
        std::vector<std::string>{"{xs = [], ys = [True,False]} Success",
                                 "{xs = [True], ys = [False]} Success",
                                 "{xs = [True,False], ys = []} Success"});
}

TEST_CASE("lazy unification defers work until the variable is demanded") {
  Engine e = Engine::fromSource(
      "lastOf :: [Bool] -> Bool\n"
      "lastOf (xs ++ [x]) = x\n");
  QueryResult r = e.query("lastOf [failed, True]");
  REQUIRE(r.answers.size() == 1);
  CHECK(r.answers[0].text == "True");
  // Only the demanded variable's pending binding was ever evaluated.
  CHECK(r.lazyForces == 1);
  CHECK(r.stats.forces == 1);
}

TEST_CASE("strict unification evaluates what lazy unification would skip") {
  Engine e = Engine::fromSource(
      "lastStrict :: [Bool] -> Bool\n"
      "lastStrict xs | ys ++ [y] =:= xs = y where ys :: [Bool], y :: Bool free\n"
      "lastOf :: [Bool] -> Bool\n"
      "lastOf (xs ++ [x]) = x\n");
  CHECK(answerTexts(e, "lastStrict [failed, True]").empty());
  CHECK(answerTexts(e, "lastOf [failed, True]") == std::vector<std::string>{"True"});
}
