#pragma once

#include <cstdint>
#include <cstring>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace owc {

// 64-bit FNV-1a over a byte string. Used for config fingerprints; stable
// across platforms and runs, unlike std::hash.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Deterministic RNG pinned to the standard-specified mt19937_64 engine so
// drop sequences are reproducible across implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, n) via rejection sampling (no modulo bias,
  // no implementation-defined std::uniform_int_distribution).
  std::uint64_t bounded(std::uint64_t n) {
    if (n == 0) throw std::domain_error("Rng::bounded: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % n;
  }

  // k distinct values from [0, n), partial Fisher-Yates, order preserved
  // as drawn.
  std::vector<int> sample_without_replacement(int n, int k) {
    if (k > n) throw std::domain_error("sample_without_replacement: k > n");
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    std::vector<int> out(k);
    for (int i = 0; i < k; ++i) {
      const auto j = i + static_cast<int>(bounded(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[i], pool[j]);
      out[i] = pool[i];
    }
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

// Runs fn(i) for i in [0, n) across `workers` threads. Each index is
// processed exactly once and writes only its own output slot, so results
// do not depend on the worker count.
inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  std::vector<std::thread> threads;
  threads.reserve(nw);
  for (std::size_t t = 0; t < nw; ++t) {
    threads.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += nw) fn(i);
    });
  }
  for (auto& th : threads) th.join();
}

}  // namespace owc
