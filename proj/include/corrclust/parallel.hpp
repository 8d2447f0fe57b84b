#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <type_traits>
#include <vector>

namespace corrclust {

// Deterministic data-parallel loop. The body is invoked either per index
// (std::size_t) or per half-open range (begin, end), and must only write
// state owned by those indices (and must not throw). Chunk boundaries
// depend on n alone, never on the worker count, so any per-chunk artifacts
// a caller assembles in chunk order are reproducible bit-for-bit with 1, 4,
// or 64 workers.
//
// Small ranges run inline: spawning threads costs more than the work itself
// at that size, and the contract above makes the results identical anyway.
template <class Body>
void parallel_for(std::size_t n, int workers, Body&& body) {
  constexpr std::size_t kChunks = 64;
  constexpr std::size_t kSerialCutoff = 4096;
  if (n == 0) return;
  auto invoke = [&body](std::size_t begin, std::size_t end) {
    if constexpr (std::is_invocable_v<Body&, std::size_t, std::size_t>) {
      body(begin, end);
    } else {
      for (std::size_t i = begin; i < end; ++i) body(i);
    }
  };
  std::size_t chunk = (n + kChunks - 1) / kChunks;
  if (workers <= 1 || n < kSerialCutoff) {
    for (std::size_t begin = 0; begin < n; begin += chunk)
      invoke(begin, std::min(begin + chunk, n));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (;;) {
      std::size_t begin = next.fetch_add(1) * chunk;
      if (begin >= n) return;
      invoke(begin, std::min(begin + chunk, n));
    }
  };
  int extra = std::min(workers, static_cast<int>(kChunks)) - 1;
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(extra));
  for (int i = 0; i < extra; ++i) threads.emplace_back(run);
  run();
  for (auto& t : threads) t.join();
}

}  // namespace corrclust
