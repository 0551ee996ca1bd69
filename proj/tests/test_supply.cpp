#include "fleng/supply.hpp"

#include <doctest.h>

#include <random>
#include <set>
#include <vector>

using namespace fleng;

namespace {

// Reference model: a supply with value n denotes the identifier set
// {n} ∪ ids(2n) ∪ ids(2n+1). This enumerates the set to a given depth,
// independently of the IDSupply implementation.
void modelIds(const RawID& n, int depth, std::set<RawID>& out) {
  out.insert(n);
  if (depth == 0) return;
  modelIds(n * 2, depth - 1, out);
  modelIds(n * 2 + 1, depth - 1, out);
}

std::set<RawID> supplyIds(const IDSupply& s, int depth) {
  std::set<RawID> out;
  out.insert(thisID(s));
  if (depth > 0) {
    for (const RawID& x : supplyIds(leftSupply(s), depth - 1)) out.insert(x);
    for (const RawID& x : supplyIds(rightSupply(s), depth - 1)) out.insert(x);
  }
  return out;
}

bool disjoint(const std::set<RawID>& a, const std::set<RawID>& b) {
  for (const RawID& x : a)
    if (b.count(x)) return false;
  return true;
}

}  // namespace

TEST_CASE("the root supply starts at one and is a pure value") {
  CHECK(thisID(initSupply()) == 1);
  CHECK(thisID(initSupply()) == thisID(initSupply()));
}

TEST_CASE("child supplies follow the doubling scheme") {
  IDSupply s = initSupply();
  CHECK(thisID(leftSupply(s)) == 2);
  CHECK(thisID(rightSupply(s)) == 3);
  CHECK(thisID(leftSupply(leftSupply(s))) == 4);
  CHECK(thisID(rightSupply(leftSupply(s))) == 5);

  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    IDSupply t = s;
    int steps = int(rng() % 40);
    for (int j = 0; j < steps; ++j) t = (rng() % 2) ? leftSupply(t) : rightSupply(t);
    CHECK(thisID(leftSupply(t)) == thisID(t) * 2);
    CHECK(thisID(rightSupply(t)) == thisID(t) * 2 + 1);
  }
}

TEST_CASE("this/left/right identifier sets are pairwise disjoint") {
  // Oracle: enumerate the reference-model sets and intersect them.
  std::mt19937 rng(20240811);
  for (int i = 0; i < 1000; ++i) {
    IDSupply s = initSupply();
    int steps = int(rng() % 12);
    for (int j = 0; j < steps; ++j) s = (rng() % 2) ? leftSupply(s) : rightSupply(s);

    std::set<RawID> self{thisID(s)};
    std::set<RawID> lhs, rhs;
    modelIds(thisID(s) * 2, 8, lhs);
    modelIds(thisID(s) * 2 + 1, 8, rhs);
    CHECK(disjoint(self, lhs));
    CHECK(disjoint(self, rhs));
    CHECK(disjoint(lhs, rhs));

    // The implementation's sets coincide with the model's sets.
    if (i % 100 == 0) {
      CHECK(supplyIds(leftSupply(s), 8) == lhs);
      CHECK(supplyIds(rightSupply(s), 8) == rhs);
    }
  }
}

TEST_CASE("distinct paths from the root yield distinct identifiers") {
  // Exhaustive to depth 12: 2^13 - 1 supplies, all ids pairwise different.
  std::set<RawID> seen;
  std::vector<IDSupply> level{initSupply()};
  size_t expected = 0;
  for (int d = 0; d <= 12; ++d) {
    expected += level.size();
    std::vector<IDSupply> next;
    for (const IDSupply& s : level) {
      seen.insert(thisID(s));
      if (d < 12) {
        next.push_back(leftSupply(s));
        next.push_back(rightSupply(s));
      }
    }
    level = std::move(next);
  }
  CHECK(seen.size() == expected);
  CHECK(expected == (1u << 13) - 1);
}
