#pragma once

#include <cstdint>
#include <utility>

namespace termsq {

using Pair = std::pair<std::uint64_t, std::uint64_t>;

// Diagonal pairing bijection omega x omega -> omega:
// tau(n,m) = n + (n+m)(n+m+1)/2.
constexpr std::uint64_t tau(std::uint64_t n, std::uint64_t m) {
  const std::uint64_t d = n + m;
  return n + d * (d + 1) / 2;
}

constexpr std::uint64_t tau(const Pair& p) { return tau(p.first, p.second); }

// Inverse of tau.
constexpr Pair tauInv(std::uint64_t k) {
  // Largest d with d(d+1)/2 <= k.
  std::uint64_t d = 0;
  {
    std::uint64_t lo = 0, hi = 1;
    while (hi * (hi + 1) / 2 <= k) hi *= 2;
    lo = hi / 2;
    while (lo < hi) {
      std::uint64_t mid = lo + (hi - lo + 1) / 2;
      if (mid * (mid + 1) / 2 <= k) lo = mid; else hi = mid - 1;
    }
    d = lo;
  }
  const std::uint64_t n = k - d * (d + 1) / 2;
  return {n, d - n};
}

// The linear order on pairs induced by tau.
constexpr bool triangleLeq(const Pair& a, const Pair& b) {
  return tau(a) <= tau(b);
}

}  // namespace termsq
