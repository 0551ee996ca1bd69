#include <doctest.h>

#include "fleng/ast.hpp"
#include "fleng/diag.hpp"
#include "fleng/parser.hpp"

#include <string>

using namespace fleng;

namespace {
std::string roundTrip(const std::string& text) { return prettyExpr(parseQuery(text).expr); }
}  // namespace

TEST_CASE("application binds tighter than any operator") {
  CHECK(roundTrip("xorSelf aBool") == "xorSelf aBool");
  SExpr e = parseQuery("f x ? g y").expr;
  CHECK(e.head == "?");
  REQUIRE(e.args.size() == 2);
  CHECK(e.args[0].head == "f");
  CHECK(e.args[1].head == "g");
}

TEST_CASE("choice, conjunction and append are right-associative") {
  CHECK(roundTrip("a ? b ? c") == "a ? (b ? c)");
  CHECK(roundTrip("a ++ b ++ c") == "a ++ (b ++ c)");
  CHECK(roundTrip("a & b & c") == "a & (b & c)");
  CHECK(roundTrip("a : b : c") == "a : (b : c)");
}

TEST_CASE("equations bind tighter than conjunction and looser than append") {
  CHECK(roundTrip("a & b =:= c") == "a & (b =:= c)");
  CHECK(roundTrip("xs ++ ys =:= zs") == "(xs ++ ys) =:= zs");
  CHECK(roundTrip("xs ++ ys == zs") == "(xs ++ ys) == zs");
  CHECK(roundTrip("x =:<= y ? z") == "(x =:<= y) ? z");
}

TEST_CASE("equation operators are non-associative") {
  CHECK_THROWS_AS(parseQuery("x == y == z"), LangError);
  CHECK_THROWS_AS(parseQuery("x =:= y =:= z"), LangError);
}

TEST_CASE("parentheses override precedence") {
  CHECK(roundTrip("(a ? b) ? c") == "(a ? b) ? c");
  CHECK(roundTrip("f (g x)") == "f (g x)");
  CHECK(roundTrip("not (not x)") == "not (not x)");
}

TEST_CASE("integer literals become unary-numeral spines") {
  CHECK(roundTrip("0") == "Z");
  CHECK(roundTrip("1") == "S Z");
  CHECK(roundTrip("3") == "S (S (S Z))");
  CHECK(roundTrip("add 2 x") == "add (S (S Z)) x");
}

TEST_CASE("list literals desugar to cons spines") {
  CHECK(roundTrip("[]") == "[]");
  CHECK(roundTrip("[a]") == "a : []");
  CHECK(roundTrip("[a, b]") == "a : (b : [])");
  CHECK(roundTrip("[1, 0]") == "(S Z) : (Z : [])");
  CHECK(roundTrip("[[], [a]]") == "[] : ((a : []) : [])");
}

TEST_CASE("parenthesized operators act as ordinary names") {
  SExpr e = parseQuery("(++) xs ys").expr;
  CHECK(e.head == "++");
  CHECK(e.args.size() == 2);
  CHECK(roundTrip("(++) xs ys") == "xs ++ ys");
  CHECK(roundTrip("(?)") == "(?)");
  CHECK(roundTrip("foldr (:) [] xs") == "foldr (:) [] xs");
}

TEST_CASE("queries accept typed free declarations after where") {
  Query q = parseQuery("head xs where xs :: [Bool] free");
  CHECK(prettyExpr(q.expr) == "head xs");
  REQUIRE(q.frees.size() == 1);
  CHECK(q.frees[0].name == "xs");
  CHECK(q.frees[0].type.str() == "[Bool]");

  Query q2 = parseQuery("f x y where x :: Bool, y :: [Nat] free");
  REQUIRE(q2.frees.size() == 2);
  CHECK(q2.frees[0].name == "x");
  CHECK(q2.frees[0].type.str() == "Bool");
  CHECK(q2.frees[1].name == "y");
  CHECK(q2.frees[1].type.str() == "[Nat]");
}

TEST_CASE("free declarations require types and a single trailing free") {
  CHECK_THROWS_AS(parseQuery("head xs where xs free"), LangError);
  CHECK_THROWS_AS(parseQuery("f x where x :: Bool"), LangError);
  CHECK_THROWS_AS(parseQuery("f x y where x :: Bool free, y :: Bool free"), LangError);
  CHECK_THROWS_AS(parseQuery("f x where free"), LangError);
}

TEST_CASE("modules split items at column zero and join indented continuations") {
  Module m = parseModule(
      "not True = False\n"
      "not False = True\n"
      "\n"
      "idTwice x =\n"
      "  not\n"
      "    (not x)\n");
  REQUIRE(m.funcs.size() == 2);
  CHECK(m.funcs[0].name == "not");
  CHECK(m.funcs[0].rules.size() == 2);
  CHECK(m.funcs[1].name == "idTwice");
  CHECK(prettyExpr(m.funcs[1].rules[0].rhs) == "not (not x)");

  CHECK_THROWS_AS(parseModule("  f x = x\n"), LangError);  // indented first item
}

TEST_CASE("comments are stripped to end of line") {
  Module m = parseModule(
      "-- whole-line comment\n"
      "f x = x -- trailing comment\n");
  REQUIRE(m.funcs.size() == 1);
  CHECK(m.funcs[0].rules.size() == 1);
}

TEST_CASE("data declarations list constructors and their field types") {
  Module m = parseModule("data Pair = MkPair Bool [Bool]\n");
  REQUIRE(m.data.size() == 1);
  CHECK(m.data[0].name == "Pair");
  REQUIRE(m.data[0].ctors.size() == 1);
  CHECK(m.data[0].ctors[0].name == "MkPair");
  REQUIRE(m.data[0].ctors[0].argTypes.size() == 2);
  CHECK(m.data[0].ctors[0].argTypes[1].str() == "[Bool]");

  Module m2 = parseModule("data Maybe a = Nothing | Just a\n");
  REQUIRE(m2.data.size() == 1);
  CHECK(m2.data[0].params == std::vector<std::string>{"a"});
  REQUIRE(m2.data[0].ctors.size() == 2);
  CHECK(m2.data[0].ctors[0].name == "Nothing");
  CHECK(m2.data[0].ctors[1].name == "Just");
  CHECK(m2.data[0].ctors[1].argTypes[0].var);

  CHECK_THROWS_AS(parseModule("data pair = P\n"), LangError);
  CHECK_THROWS_AS(parseModule("data P = p\n"), LangError);
}

TEST_CASE("signatures flatten arrow chains into argument and result types") {
  Module m = parseModule("f :: Bool -> [Bool] -> Bool\n");
  REQUIRE(m.sigs.size() == 1);
  CHECK(m.sigs[0].name == "f");
  REQUIRE(m.sigs[0].argTypes.size() == 2);
  CHECK(m.sigs[0].argTypes[0].str() == "Bool");
  CHECK(m.sigs[0].argTypes[1].str() == "[Bool]");
  CHECK(m.sigs[0].result.str() == "Bool");

  Module m2 = parseModule("(++) :: [a] -> [a] -> [a]\n");
  REQUIRE(m2.sigs.size() == 1);
  CHECK(m2.sigs[0].name == "++");

  // Higher-order argument types keep their arrow structure.
  Module m3 = parseModule("apply :: (Bool -> Bool) -> Bool -> Bool\n");
  REQUIRE(m3.sigs[0].argTypes.size() == 2);
  CHECK(m3.sigs[0].argTypes[0].head == "->");
}

TEST_CASE("rules support guards, operator heads and where-frees") {
  Module m = parseModule("f x | x == True = False\n");
  REQUIRE(m.funcs.size() == 1);
  REQUIRE(m.funcs[0].rules.size() == 1);
  REQUIRE(m.funcs[0].rules[0].guards.size() == 1);
  CHECK(prettyExpr(m.funcs[0].rules[0].guards[0]) == "x == True");
  CHECK(prettyExpr(m.funcs[0].rules[0].rhs) == "False");

  Module m2 = parseModule("x ? y = x\n");
  REQUIRE(m2.funcs.size() == 1);
  CHECK(m2.funcs[0].name == "?");
  CHECK(m2.funcs[0].arity == 2);

  Module m3 = parseModule("dup x = pair y y where y :: Bool free\n");
  REQUIRE(m3.funcs[0].rules[0].frees.size() == 1);
  CHECK(m3.funcs[0].rules[0].frees[0].name == "y");
}

TEST_CASE("wildcard patterns become fresh distinct variables") {
  Module m = parseModule("constTrue _ _ = True\n");
  const Rule& r = m.funcs[0].rules[0];
  REQUIRE(r.params.size() == 2);
  CHECK(r.params[0].kind == Pattern::Kind::Var);
  CHECK(r.params[1].kind == Pattern::Kind::Var);
  CHECK(r.params[0].name != r.params[1].name);
  CHECK(r.params[0].name != "_");
}

TEST_CASE("applied defined operations in patterns parse as functional patterns") {
  Module m = parseModule("lastOf (xs ++ [x]) = x\n");
  const Rule& r = m.funcs[0].rules[0];
  REQUIRE(r.params.size() == 1);
  CHECK(r.params[0].kind == Pattern::Kind::OpApp);
  CHECK(r.params[0].name == "++");
  CHECK(r.params[0].containsOpApp());
  REQUIRE(r.params[0].args.size() == 2);
  CHECK(r.params[0].args[0].kind == Pattern::Kind::Var);
  CHECK(r.params[0].args[1].kind == Pattern::Kind::Ctor);  // the [x] spine
  CHECK(r.params[0].args[1].name == ":");

  Module m2 = parseModule("unpack (wrap y) = y\n");
  CHECK(m2.funcs[0].rules[0].params[0].kind == Pattern::Kind::OpApp);
}

TEST_CASE("constructor patterns keep their spine structure") {
  Module m = parseModule("heads (x : y : rest) = x\n");
  const Pattern& p = m.funcs[0].rules[0].params[0];
  CHECK(p.kind == Pattern::Kind::Ctor);
  CHECK(p.name == ":");
  REQUIRE(p.args.size() == 2);
  CHECK(p.args[1].name == ":");
  CHECK(prettyPattern(p) == "x : (y : rest)");
}

TEST_CASE("malformed rule heads are rejected") {
  CHECK_THROWS_AS(parseModule("True x = x\n"), LangError);       // constructor head
  CHECK_THROWS_AS(parseModule("(?) x = x\n"), LangError);        // operator needs two args
  CHECK_THROWS_AS(parseModule("f x =\n"), LangError);            // missing right-hand side
  CHECK_THROWS_AS(parseModule("f x = x extra = y\n"), LangError);
}

TEST_CASE("syntax errors carry one-based source positions") {
  try {
    parseModule("ok x = x\n\nbad y = (y\n");
    FAIL("expected a syntax error");
  } catch (const LangError& e) {
    CHECK(e.pos().line == 3);
    CHECK(std::string(e.what()).find("')'") != std::string::npos);
  }
  try {
    parseQuery("f $ x");
    FAIL("expected a lex error");
  } catch (const LangError& e) {
    CHECK(std::string(e.what()).find("unexpected character") != std::string::npos);
  }
}

TEST_CASE("single free declarations parse for the command-line flag") {
  FreeDecl fd = parseFreeDecl("xs :: [Bool]");
  CHECK(fd.name == "xs");
  CHECK(fd.type.str() == "[Bool]");
  CHECK_THROWS_AS(parseFreeDecl("xs"), LangError);
  CHECK_THROWS_AS(parseFreeDecl(":: Bool"), LangError);
}
