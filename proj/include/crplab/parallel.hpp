#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace crplab {

// Worker count for partitionable searches. Controlled by CRPLAB_THREADS;
// defaults to 1 (sequential). Results must not depend on this value: callers
// merge per-chunk results by index.
inline int worker_count() {
  const char* env = std::getenv("CRPLAB_THREADS");
  if (env == nullptr) return 1;
  const long v = std::strtol(env, nullptr, 10);
  if (v < 1) return 1;
  if (v > 256) return 256;
  return static_cast<int>(v);
}

// Splits [0, total) into `workers` contiguous chunks and runs
// fn(chunk_index, begin, end) for each, possibly on separate threads.
// Chunk boundaries depend only on (total, workers), so per-chunk results
// can be merged deterministically by chunk index.
inline void parallel_chunks(std::uint64_t total, int workers,
                            const std::function<void(int, std::uint64_t, std::uint64_t)>& fn) {
  if (total == 0) return;
  if (workers < 1) workers = 1;
  if (static_cast<std::uint64_t>(workers) > total) workers = static_cast<int>(total);
  if (workers == 1) {
    fn(0, 0, total);
    return;
  }
  const std::uint64_t per = total / workers;
  const std::uint64_t extra = total % workers;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  std::uint64_t begin = 0;
  for (int c = 0; c < workers; ++c) {
    const std::uint64_t len = per + (static_cast<std::uint64_t>(c) < extra ? 1 : 0);
    const std::uint64_t end = begin + len;
    threads.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
    begin = end;
  }
  for (auto& t : threads) t.join();
}

}  // namespace crplab
