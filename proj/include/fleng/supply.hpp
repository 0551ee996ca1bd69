#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <utility>

namespace fleng {

// Choice identifiers are unbounded integers: deep evaluations split the
// supply hundreds of times and ids must never collide.
using RawID = boost::multiprecision::cpp_int;

struct RawIDHash {
  size_t operator()(const RawID& n) const {
    // Mix every limb: deep left spines produce ids like 2^k whose low bits
    // are all zero, so hashing a fixed-width slice would put them in one
    // bucket and make the store quadratic.
    uint64_t h = 0x9e3779b97f4a7c15ULL;
    const auto& b = n.backend();
    for (unsigned i = 0; i < b.size(); ++i) {
      h ^= static_cast<uint64_t>(b.limbs()[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    h ^= static_cast<uint64_t>(b.size());
    return static_cast<size_t>(h);
  }
};

inline std::string rawToString(const RawID& n) { return n.str(); }

// An IDSupply denotes the infinite id set {n} | ids(2n) | ids(2n+1).
// The two child supplies are disjoint from each other and from thisID(),
// so independent subcomputations can mint ids without coordination.
class IDSupply {
 public:
  IDSupply() : n_(1) {}
  explicit IDSupply(RawID n) : n_(std::move(n)) {}

  const RawID& thisID() const { return n_; }
  IDSupply left() const { return IDSupply(n_ * 2); }
  IDSupply right() const { return IDSupply(n_ * 2 + 1); }

 private:
  RawID n_;
};

inline IDSupply initSupply() { return IDSupply(); }
inline RawID thisID(const IDSupply& s) { return s.thisID(); }
inline IDSupply leftSupply(const IDSupply& s) { return s.left(); }
inline IDSupply rightSupply(const IDSupply& s) { return s.right(); }

}  // namespace fleng
