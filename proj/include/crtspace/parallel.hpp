#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace crtspace {

// Deterministic data-parallel loop. The range is split into a chunk count
// that depends only on the range (never on the thread count); workers pull
// chunks from a shared counter and each chunk writes its partial result
// into a slot indexed by chunk id. Callers reduce the slots in chunk order,
// so results are identical for any thread count.
template <typename Partial, typename ChunkFn>
std::vector<Partial> parallel_chunks(std::uint64_t begin, std::uint64_t end,
                                     int threads, ChunkFn chunk_fn) {
  const std::uint64_t n = end > begin ? end - begin : 0;
  if (n == 0) return {};
  const std::uint64_t chunk_size = std::max<std::uint64_t>(1, n / 256);
  const std::uint64_t nchunks = (n + chunk_size - 1) / chunk_size;
  std::vector<Partial> partials(nchunks);
  if (threads <= 1 || nchunks == 1) {
    for (std::uint64_t c = 0; c < nchunks; ++c) {
      const std::uint64_t lo = begin + c * chunk_size;
      const std::uint64_t hi = std::min(end, lo + chunk_size);
      partials[c] = chunk_fn(lo, hi);
    }
    return partials;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= nchunks) break;
      const std::uint64_t lo = begin + c * chunk_size;
      const std::uint64_t hi = std::min(end, lo + chunk_size);
      partials[c] = chunk_fn(lo, hi);
    }
  };
  std::vector<std::thread> pool;
  const int nt = std::min<int>(threads, static_cast<int>(nchunks));
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return partials;
}

// Compensated (Kahan) accumulator; used wherever epsilon sums cross chunks.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace crtspace
