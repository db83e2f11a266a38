#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace unitring {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using u32 = std::uint32_t;
using i128 = __int128;
using u128 = unsigned __int128;

// Structured error hierarchy. Every failure mode named in a contract gets its
// own type so callers (and the CLI exit-code mapping) can distinguish them.
struct UnitringError : std::runtime_error {
  explicit UnitringError(const std::string& msg) : std::runtime_error(msg) {}
};

#define UNITRING_ERROR(Name)                                          \
  struct Name : UnitringError {                                       \
    explicit Name(const std::string& msg) : UnitringError(#Name ": " + msg) {} \
  }

UNITRING_ERROR(InfiniteGroup);
UNITRING_ERROR(InfiniteAbelianization);
UNITRING_ERROR(NotAGroup);
UNITRING_ERROR(TooLarge);
UNITRING_ERROR(NotPAnnihilated);
UNITRING_ERROR(NotPRing);
UNITRING_ERROR(NotSemisimple);
UNITRING_ERROR(SplitFailure);
UNITRING_ERROR(NotDeterminantOne);
UNITRING_ERROR(NotAUnit);
UNITRING_ERROR(NotInSubgroup);
UNITRING_ERROR(NotNilpotent);
UNITRING_ERROR(NotExact);
UNITRING_ERROR(NoSolution);
UNITRING_ERROR(Overflow);
UNITRING_ERROR(BadSpec);

#undef UNITRING_ERROR

inline i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow("i64 product");
  return r;
}
inline i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow("i64 sum");
  return r;
}

// Euclidean remainder in [0, m).
inline i64 mod_floor(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

// Deterministic RNG. Seeds propagate explicitly through every randomized
// routine; helpers avoid std distributions whose output is
// implementation-defined.
class Rng {
 public:
  explicit Rng(u64 seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  u64 next() {
    // splitmix64: tiny, portable, and good enough for algorithmic randomness.
    u64 z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n), n >= 1, via rejection.
  u64 below(u64 n) {
    if (n == 0) throw UnitringError("Rng::below(0)");
    u64 limit = ~u64(0) - ~u64(0) % n;
    u64 v;
    do { v = next(); } while (v >= limit);
    return v % n;
  }

  // Independent stream for a named subcomputation.
  Rng derive(std::string_view label) const {
    u64 h = 0xcbf29ce484222325ULL;
    for (char c : label) { h ^= static_cast<unsigned char>(c); h *= 0x100000001b3ULL; }
    Rng r(state_ ^ h);
    r.next();
    return r;
  }

 private:
  u64 state_;
};

inline u64 hash_combine(u64 h, u64 v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

template <typename T>
u64 hash_span(const std::vector<T>& v) {
  u64 h = 0x811c9dc5;
  for (const T& x : v) h = hash_combine(h, static_cast<u64>(x));
  return h;
}

}  // namespace unitring
