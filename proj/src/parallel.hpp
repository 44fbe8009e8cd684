#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

// Deterministic work sharding for Monte Carlo ensembles. Paths are grouped
// into fixed-size blocks; each block's partial result depends only on
// (seed, block) and workers grab blocks from an atomic counter. Callers
// merge the returned partials in block order, which makes every floating
// point reduction independent of the worker count and of scheduling.

namespace telegraph {

inline constexpr std::int64_t kPathBlockSize = 8192;

// fn(first_path, last_path) -> State, computed for [first, last) path
// indices; the returned vector is ordered by block index.
template <class State, class BlockFn>
std::vector<State> run_path_blocks(std::int64_t n_paths, int workers, BlockFn fn) {
  const std::int64_t nb = (n_paths + kPathBlockSize - 1) / kPathBlockSize;
  std::vector<State> partials(static_cast<std::size_t>(nb));
  auto run_block = [&](std::int64_t b) {
    const std::int64_t first = b * kPathBlockSize;
    const std::int64_t last = std::min(first + kPathBlockSize, n_paths);
    partials[static_cast<std::size_t>(b)] = fn(first, last);
  };
  if (workers <= 1 || nb <= 1) {
    for (std::int64_t b = 0; b < nb; ++b) run_block(b);
    return partials;
  }
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (std::int64_t b = next.fetch_add(1); b < nb; b = next.fetch_add(1))
      run_block(b);
  };
  std::vector<std::thread> pool;
  const int n_threads = static_cast<int>(std::min<std::int64_t>(workers, nb));
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return partials;
}

// Streaming mean/variance accumulator (Welford). merge() uses the standard
// pairwise-combination formula; merging block partials in index order keeps
// results bit-identical across worker counts.
struct RunningStat {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const RunningStat& o) {
    if (o.n == 0) return;
    if (n == 0) { *this = o; return; }
    double delta = o.mean - mean;
    std::int64_t total = n + o.n;
    mean += delta * static_cast<double>(o.n) / static_cast<double>(total);
    m2 += o.m2 + delta * delta * static_cast<double>(n) *
                     static_cast<double>(o.n) / static_cast<double>(total);
    n = total;
  }

  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

}  // namespace telegraph
