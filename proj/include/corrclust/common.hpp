#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace corrclust {

using Vertex = std::uint32_t;

// Error categories, mapped to distinct process exit codes by the CLI.
// ConfigError: malformed option values or violated call preconditions.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// IoError: unreadable, unwritable, or malformed files.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// BudgetError: an operation exceeded its enumeration or iteration budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Always-on assertion for cheap contract checks. Throws instead of aborting
// so callers (and the CLI) can surface a clean diagnostic.
#define CORRCLUST_ASSERT(cond, msg)                                        \
  do {                                                                     \
    if (!(cond))                                                           \
      throw std::logic_error(std::string("assertion failed: ") + (msg));  \
  } while (0)

// Unordered pair packed into one 64-bit key with the smaller endpoint in the
// high bits, so numeric key order equals lexicographic (min, max) order.
inline std::uint64_t pair_key(Vertex u, Vertex v) {
  CORRCLUST_ASSERT(u != v, "pair_key: self pair");
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

inline Vertex pair_lo(std::uint64_t key) {
  return static_cast<Vertex>(key >> 32);
}

inline Vertex pair_hi(std::uint64_t key) {
  return static_cast<Vertex>(key & 0xffffffffULL);
}

// splitmix64 finalizer. All seeded randomness in this library (coins,
// priorities, tie-breaking) is a pure function of a key built with these
// mixers, never of evaluation order, so results cannot depend on scheduling
// or worker count.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash2(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ b);
}

inline std::uint64_t hash3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix64(hash2(a, b) ^ c);
}

// Uniform double in [0, 1), from the 53 high bits of a hash.
inline double uniform01(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ln 3, the log of the initial scaling factor alpha.
inline const double kLog3 = std::log(3.0);

// log(exp(a) + exp(b)) without overflow.
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

// log(exp(a) + exp(b) + exp(c)); the three-term form used for triangle
// lengths, evaluated at double precision with no tolerance.
inline double log_add3(double a, double b, double c) {
  double m = std::max(a, std::max(b, c));
  if (m == kNegInf) return kNegInf;
  return m + std::log(std::exp(a - m) + std::exp(b - m) + std::exp(c - m));
}

// Streaming log-sum-exp accumulator: value() = log(sum of exp(x_i)).
// The result depends on insertion order in the final ulps; callers that need
// bit-for-bit reproducibility must feed terms in a fixed order.
class LogSumExp {
 public:
  void add(double x) { add_scaled(x, 1); }

  // Adds count * exp(x).
  void add_scaled(double x, std::uint64_t count) {
    if (count == 0 || x == kNegInf) return;
    if (x <= max_) {
      sum_ += static_cast<double>(count) * std::exp(x - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - x) + static_cast<double>(count);
      max_ = x;
    }
  }

  double value() const {
    if (sum_ <= 0.0) return kNegInf;
    return max_ + std::log(sum_);
  }

 private:
  double max_ = kNegInf;  // largest term seen so far
  double sum_ = 0.0;      // sum of exp(x - max_) over all terms
};

}  // namespace corrclust
