#pragma once

// Desk-scale benchmark table: each classic exercise is solved with up to
// three equation styles over the same input —
//   "=="    Boolean equality, which enumerates candidate values,
//   "=:="   strict unification, which binds variables instead,
//   "=:<="  lazy unification through a functional pattern.
// The interesting output is the relative search effort (choices / failures /
// guards / forces) between the styles, not absolute times; sizes are kept
// small enough for interactive runs and grow with the scale multiplier.

#include <string>
#include <vector>

namespace flbench {

struct BenchCase {
  std::string name;     // benchmark family
  std::string mode;     // "==", "=:=" or "=:<="
  std::string program;  // module source (prelude is added by the engine)
  std::string query;    // query expression
};

inline std::string peano(long long n) {
  std::string out;
  for (long long i = 0; i < n; ++i) out += "S (";
  out += "Z";
  for (long long i = 0; i < n; ++i) out += ")";
  return out;
}

inline std::string boolPalindrome(long long half) {
  std::vector<std::string> front;
  for (long long i = 0; i < half; ++i) front.push_back(i % 2 ? "False" : "True");
  std::string out = "[";
  for (long long i = 0; i < half; ++i) out += front[i] + ",";
  for (long long i = half; i-- > 0;) {
    out += front[i];
    if (i) out += ",";
  }
  return out + "]";
}

inline std::string symList(long long pairs) {
  std::string out = "[";
  for (long long i = 0; i < pairs; ++i) {
    if (i) out += ",";
    out += "Sb,Sa";
  }
  return out + "]";
}

// last element of [1..n] (Peano numbers, so "==" pays per digit).
inline BenchCase lastCase(const std::string& mode, long long n) {
  std::string common =
      "asc :: Nat -> Nat -> [Nat]\n"
      "asc c Z = []\n"
      "asc c (S k) = c : asc (S c) k\n";
  BenchCase c;
  c.name = "last";
  c.mode = mode;
  if (mode == "==") {
    c.program = common +
                "lastE :: [Nat] -> Nat\n"
                "lastE xs | ((ys ++ [y]) == xs) =:= True = y"
                " where ys :: [Nat], y :: Nat free\n";
    c.query = "lastE (asc 1 " + std::to_string(n) + ")";
  } else if (mode == "=:=") {
    c.program = common +
                "lastU :: [Nat] -> Nat\n"
                "lastU xs | (ys ++ [y]) =:= xs = y"
                " where ys :: [Nat], y :: Nat free\n";
    c.query = "lastU (asc 1 " + std::to_string(n) + ")";
  } else {
    c.program = common +
                "lastF :: [Nat] -> Nat\n"
                "lastF (ys ++ [y]) = y\n";
    c.query = "lastF (asc 1 " + std::to_string(n) + ")";
  }
  return c;
}

inline std::vector<BenchCase> benchCases(long long scale, const std::string& suite) {
  std::vector<BenchCase> all;
  auto want = [&](const std::string& mode) {
    if (suite == "all" || suite.empty()) return true;
    if (suite == "equations") return mode == "==";
    if (suite == "unify") return mode == "=:=";
    return mode == "=:<=";  // "funpat"
  };
  auto add = [&](BenchCase c) {
    if (want(c.mode)) all.push_back(std::move(c));
  };

  for (const char* m : {"==", "=:=", "=:<="}) add(lastCase(m, 50 * scale));

  // Half of an even Peano number: x with x + x = n.
  {
    std::string q = std::to_string(40 * scale);
    add({"half", "==",
         "halfE :: Nat -> Nat\n"
         "halfE y | ((add x x) == y) =:= True = x where x :: Nat free\n",
         "halfE " + q});
    add({"half", "=:=",
         "halfU :: Nat -> Nat\n"
         "halfU y | (add x x) =:= y = x where x :: Nat free\n",
         "halfU " + q});
    add({"half", "=:<=",
         "halfF :: Nat -> Nat\n"
         "halfF (add x x) = x\n",
         "halfF " + q});
  }

  // Recognize an even-length palindrome by splitting it as xs ++ reverse xs.
  {
    std::string q = boolPalindrome(8 * scale);
    add({"palindrome", "==",
         "paliE :: [Bool] -> Bool\n"
         "paliE ys | ((xs ++ reverse xs) == ys) =:= True = True where xs :: [Bool] free\n",
         "paliE " + q});
    add({"palindrome", "=:=",
         "paliU :: [Bool] -> Bool\n"
         "paliU ys | (xs ++ reverse xs) =:= ys = True where xs :: [Bool] free\n",
         "paliU " + q});
    add({"palindrome", "=:<=",
         "paliF :: [Bool] -> Bool\n"
         "paliF (xs ++ reverse xs) = True\n",
         "paliF " + q});
  }

  // First duplicated element: distinct run [1..n], then 1 again.
  {
    long long n = 12 * scale;
    std::string common =
        "asc :: Nat -> Nat -> [Nat]\n"
        "asc c Z = []\n"
        "asc c (S k) = c : asc (S c) k\n";
    std::string q = "((asc 1 " + std::to_string(n) + ") ++ [1])";
    add({"fstDup", "==", common +
         "fstDupE :: [Nat] -> Nat\n"
         "fstDupE xs | ((ys ++ ([e] ++ zs)) == xs) =:= True & (elem e ys) =:= True"
         " & (nub ys) =:= ys = e"
         " where ys :: [Nat], zs :: [Nat], e :: Nat free\n",
         "fstDupE " + q});
    add({"fstDup", "=:=", common +
         "fstDupU :: [Nat] -> Nat\n"
         "fstDupU xs | (ys ++ ([e] ++ zs)) =:= xs & (elem e ys) =:= True"
         " & (nub ys) =:= ys = e"
         " where ys :: [Nat], zs :: [Nat], e :: Nat free\n",
         "fstDupU " + q});
    add({"fstDup", "=:<=", common +
         "fstDupF :: [Nat] -> Nat\n"
         "fstDupF (ys ++ ([e] ++ zs)) | (elem e ys) =:= True & (nub ys) =:= ys = e\n",
         "fstDupF " + q});
  }

  // Horses and men: h + m heads, 4h + 2m feet.
  {
    std::string common =
        "double :: Nat -> Nat\n"
        "double n = add n n\n";
    std::string q = std::to_string(8 * scale) + " " + std::to_string(20 * scale);
    add({"horseman", "==", common +
         "horseE :: Nat -> Nat -> Pair Nat Nat\n"
         "horseE hs ft | ((add m h) == hs) =:= True"
         " & ((add (double m) (double (double h))) == ft) =:= True = Pair m h"
         " where m :: Nat, h :: Nat free\n",
         "horseE " + q});
    add({"horseman", "=:=", common +
         "horseU :: Nat -> Nat -> Pair Nat Nat\n"
         "horseU hs ft | (add m h) =:= hs"
         " & (add (double m) (double (double h))) =:= ft = Pair m h"
         " where m :: Nat, h :: Nat free\n",
         "horseU " + q});
  }

  // Substring matching against a non-deterministic regular-expression
  // denotation: does xs contain a word of a(ba)* ?
  {
    std::string common =
        "data Sym = Sa | Sb\n"
        "data RE = Lit Sym | Alt RE RE | Cat RE RE | Star RE\n"
        "sem :: RE -> [Sym]\n"
        "sem (Lit c) = [c]\n"
        "sem (Alt r t) = (sem r) ? (sem t)\n"
        "sem (Cat r t) = (sem r) ++ (sem t)\n"
        "sem (Star r) = [] ? ((sem r) ++ (sem (Star r)))\n";
    std::string q = "(Cat (Lit Sa) (Star (Cat (Lit Sb) (Lit Sa)))) " + symList(6 * scale);
    add({"grep-small", "==", common +
         "grepE :: RE -> [Sym] -> Bool\n"
         "grepE r xs | ((ys ++ ((sem r) ++ zs)) == xs) =:= True = True"
         " where ys :: [Sym], zs :: [Sym] free\n",
         "grepE " + q});
    add({"grep-small", "=:=", common +
         "grepU :: RE -> [Sym] -> Bool\n"
         "grepU r xs | (ys ++ ((sem r) ++ zs)) =:= xs = True"
         " where ys :: [Sym], zs :: [Sym] free\n",
         "grepU " + q});
  }

  // Strip neutral arithmetic wrappers (0 + e, 1 * e), one layer per call.
  {
    std::string common =
        "data V = Vx | Vy\n"
        "data Exp = Num Nat | Vr V | Plus Exp Exp | Times Exp Exp\n"
        "evalTo :: Exp -> Exp\n"
        "evalTo e = (Plus (Num 0) e) ? (Times (Num 1) e)\n";
    long long k = 10 * scale;
    auto nested = [&](const std::string& fn) {
      std::string inner = "Vr Vx";
      for (long long i = 0; i < k; ++i)
        inner = (i % 2 ? "Plus (Num 0) (" : "Times (Num 1) (") + inner + ")";
      std::string e = inner;
      for (long long i = 0; i < k; ++i) e = fn + " (" + e + ")";
      return e;
    };
    add({"simplify-small", "==", common +
         "simpE :: Exp -> Exp\n"
         "simpE e | ((evalTo x) == e) =:= True = x where x :: Exp free\n",
         nested("simpE")});
    add({"simplify-small", "=:=", common +
         "simpU :: Exp -> Exp\n"
         "simpU e | (evalTo x) =:= e = x where x :: Exp free\n",
         nested("simpU")});
    add({"simplify-small", "=:<=", common +
         "simpF :: Exp -> Exp\n"
         "simpF (evalTo x) = x\n",
         nested("simpF")});
  }

  // All variables occurring in an expression, via a non-deterministic
  // context that plugs a hole somewhere inside.
  {
    std::string common =
        "data V = Vx | Vy\n"
        "data Exp = Num Nat | Vr V | Plus Exp Exp | Times Exp Exp\n"
        "ctx :: Exp -> Exp\n"
        "ctx e = e\n"
        "ctx e = Plus (ctx e) r where r :: Exp free\n"
        "ctx e = Plus l (ctx e) where l :: Exp free\n"
        "ctx e = Times (ctx e) r where r :: Exp free\n"
        "ctx e = Times l (ctx e) where l :: Exp free\n";
    long long k = 6 * scale;
    std::string e = "Vr Vx";
    for (long long i = 0; i < k; ++i)
      e = (i % 2 ? "Plus (Vr Vy) (" : "Times (Num 2) (") + e + ")";
    std::string q = "(" + e + ")";
    add({"varInExp-small", "==", common +
         "varE :: Exp -> V\n"
         "varE e | ((ctx (Vr v)) == e) =:= True = v where v :: V free\n",
         "varE " + q});
    add({"varInExp-small", "=:=", common +
         "varU :: Exp -> V\n"
         "varU e | (ctx (Vr v)) =:= e = v where v :: V free\n",
         "varU " + q});
    add({"varInExp-small", "=:<=", common +
         "varF :: Exp -> V\n"
         "varF (ctx (Vr v)) = v\n",
         "varF " + q});
  }

  return all;
}

}  // namespace flbench
