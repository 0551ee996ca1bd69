#include <doctest.h>

#include "eval_session.hpp"

#include "fleng/engine.hpp"
#include "fleng/render.hpp"

#include <string>
#include <vector>

using namespace fleng;
using evaltest::Eval;
using evaltest::evalExpr;

namespace {
std::vector<std::string> answers(const Engine& e, const std::string& q, QueryOptions opts = {}) {
  return evaltest::answerTexts(e, q, opts);
}
}  // namespace

TEST_CASE("a shared choice argument keeps one identifier through both uses") {
  Eval s = evalExpr("", "xorSelf aBool");
  // Both inner choices carry the identifier of the single aBool argument:
  // whatever the outer choice decides, the inner one repeats, so the value
  // can never reach True.
  CHECK(debugStruct(*s.rt, s.value) ==
        "Choice 2 (Choice 2 False True) (Choice 2 True False)");
}

TEST_CASE("separate choice occurrences get distinct identifiers") {
  Eval s = evalExpr("", "xor aBool aBool");
  ValueRef v = s.rt->force(s.value);
  REQUIRE(v->kind == Value::Kind::Choice);
  ValueRef inner = s.rt->force(v->left);
  REQUIRE(inner->kind == Value::Kind::Choice);
  CHECK(v->id.raw != inner->id.raw);
}

TEST_CASE("normal form pulls choices above constructors") {
  Eval s = evalExpr("", "(True ? False) : []");
  ValueRef v = s.rt->nf(s.value);
  REQUIRE(v->kind == Value::Kind::Choice);
  // The hoisted legs stay lazy; normalizing them exposes the constructors.
  CHECK(s.rt->nf(v->left)->kind == Value::Kind::Ctor);
  CHECK(s.rt->nf(v->right)->kind == Value::Kind::Ctor);
  CHECK(debugStruct(*s.rt, v->left) == ": True []");
  CHECK(debugStruct(*s.rt, v->right) == ": False []");
}

TEST_CASE("normal form pulls failures above constructors") {
  Eval s = evalExpr("", "failed : []");
  CHECK(s.rt->nf(s.value)->kind == Value::Kind::Fail);
}

TEST_CASE("normal form leaves free-variable choices in place") {
  Eval s = evalExpr("", "x : [] where x :: Bool free");
  ValueRef v = s.rt->nf(s.value);
  REQUIRE(v->kind == Value::Kind::Ctor);
  CHECK(v->args[0]->kind == Value::Kind::Choice);
  CHECK(v->args[0]->id.flavor == Flavor::Free);
}

TEST_CASE("head is lazy in the tail and elements are not forced") {
  Engine e = Engine::fromSource("loop :: Bool -> Bool\nloop x = loop x\n");
  CHECK(answers(e, "head (True : (loop True : []))") == std::vector<std::string>{"True"});
  CHECK(answers(e, "head (True : failed)") == std::vector<std::string>{"True"});
  // The same expression evaluated strictly would never terminate; a small
  // budget proves the lazy path did not touch the loop.
  QueryOptions tight;
  tight.stepBudget = 500;
  QueryResult r = e.query("head (True : (loop True : []))", tight);
  CHECK(r.status == SearchStatus::Complete);
}

TEST_CASE("the step budget stops runaway evaluation") {
  Engine e = Engine::fromSource("loop :: Bool -> Bool\nloop x = loop x\n");
  QueryOptions tight;
  tight.stepBudget = 1000;
  QueryResult r = e.query("loop True", tight);
  CHECK(r.status == SearchStatus::StepBudget);
  CHECK(r.answers.empty());
  CHECK(r.steps >= 1000);
}

TEST_CASE("call-time choice: an argument's decision is made once per path") {
  Engine e = Engine::fromSource(
      "dup :: Bool -> Pair Bool Bool\n"
      "dup x = Pair x x\n");
  CHECK(answers(e, "dup (True ? False)") ==
        std::vector<std::string>{"Pair True True", "Pair False False"});
  // An undemanded generator is shared too: both copies print as one variable.
  CHECK(answers(e, "dup aBool") == std::vector<std::string>{"Pair _x1 _x1"});
  CHECK(answers(e, "xorSelf aBool") == std::vector<std::string>{"False", "False"});
}

TEST_CASE("results do not depend on suspension memoization") {
  Engine e = Engine::fromSource(
      "dup :: Bool -> Pair Bool Bool\n"
      "dup x = Pair x x\n");
  for (const char* q : {"dup aBool", "xorSelf aBool", "nub [True,True]",
                        "xs ++ [True] =:= [False,True] where xs :: [Bool] free"}) {
    QueryOptions with, without;
    without.memo = false;
    QueryResult a = e.query(q, with);
    QueryResult b = e.query(q, without);
    REQUIRE(a.answers.size() == b.answers.size());
    for (size_t i = 0; i < a.answers.size(); ++i)
      CHECK(a.answers[i].display == b.answers[i].display);
  }
}

TEST_CASE("memoization shares the forced node across demands") {
  Eval s = evalExpr("", "and True True");
  ValueRef f1 = s.rt->force(s.value);
  ValueRef f2 = s.rt->force(s.value);
  CHECK(f1.get() == f2.get());
}

TEST_CASE("functions apply through higher-order positions") {
  Engine e = Engine::fromSource("");
  CHECK(answers(e, "(ite True not id) False") == std::vector<std::string>{"True"});
  CHECK(answers(e, "map (add 1) [0,1]") == std::vector<std::string>{"[1,2]"});
  CHECK(answers(e, "map (ite False not) [True]") == std::vector<std::string>{"[True]"});
}

TEST_CASE("a nondeterministic function value forks per application site") {
  // Passing the *function* aBool-producer around: each call site applies it
  // separately and must get its own identifiers (no spurious sharing).
  Engine e = Engine::fromSource(
      "two :: (Bool -> Bool) -> Pair Bool Bool\n"
      "two f = Pair (f True) (f False)\n"
      "noisy :: Bool -> Bool\n"
      "noisy x = x ? not x\n");
  std::vector<std::string> got = answers(e, "two noisy");
  CHECK(got == std::vector<std::string>{"Pair True False", "Pair True True",
                                        "Pair False False", "Pair False True"});
}

TEST_CASE("failure propagates out of demanded arguments only") {
  Engine e = Engine::fromSource("");
  CHECK(answers(e, "and False failed") == std::vector<std::string>{"False"});
  CHECK(answers(e, "and failed False").empty());
  CHECK(answers(e, "ite True True failed") == std::vector<std::string>{"True"});
}

TEST_CASE("guards on answers carry constraints until search applies them") {
  Eval s = evalExpr("", "x =:= True where x :: Bool free");
  ValueRef v = s.rt->force(s.value);
  REQUIRE(v->kind == Value::Kind::Guard);
  REQUIRE(v->constraints.size() == 1);
  CHECK(v->constraints[0].d.kind == DecisionKind::Left);  // True is the first alternative
  CHECK(debugStruct(*s.rt, v->inner) == "Success");
}

TEST_CASE("evaluation statistics count the work actually done") {
  Engine e = Engine::fromSource("");
  QueryResult r = e.query("xorSelf aBool");
  CHECK(r.stats.choices == 1);   // one identifier branched on (twice met, once decided)
  CHECK(r.stats.failures == 0);
  CHECK(r.stats.forces == 0);
  CHECK(r.steps > 0);

  QueryResult h = e.query("head []");
  CHECK(h.stats.failures == 1);
}
