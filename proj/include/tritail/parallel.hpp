#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace tritail {

// Worker-pool helpers. The item range is cut into blocks of a caller-fixed
// size, every block's partial result lands in a slot indexed by block number,
// and the slots are folded in index order. Block boundaries depend only on
// (item count, block size), never on the thread count, so the reduction is
// bitwise identical for 1 thread or 64.

inline int hardware_threads() {
  unsigned h = std::thread::hardware_concurrency();
  return h > 0 ? static_cast<int>(h) : 1;
}

namespace detail {
inline std::atomic<int>& thread_count_storage() {
  static std::atomic<int> v{0};  // 0 means "use hardware parallelism"
  return v;
}
}  // namespace detail

// process-wide worker count; 0 or negative resets to hardware parallelism
inline void set_thread_count(int t) { detail::thread_count_storage().store(t > 0 ? t : 0); }

inline int thread_count() {
  int t = detail::thread_count_storage().load();
  return t > 0 ? t : hardware_threads();
}

namespace detail {

template <class Fn>
void run_blocks(std::int64_t n_blocks, Fn&& fn) {
  int workers = thread_count();
  if (workers > n_blocks) workers = static_cast<int>(n_blocks);
  if (workers <= 1) {
    for (std::int64_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::int64_t b = next.fetch_add(1, std::memory_order_relaxed);
        if (b >= n_blocks) return;
        fn(b);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

// Map [0, n) in blocks of block_size; block_fn(block_index, lo, hi) returns a
// partial of type T; partials are merged left-to-right by block index.
template <class T, class BlockFn, class MergeFn>
T parallel_reduce_blocks(std::int64_t n, std::int64_t block_size, BlockFn block_fn,
                         MergeFn merge_fn, T init = T{}) {
  if (n <= 0) return init;
  if (block_size < 1) block_size = 1;
  std::int64_t n_blocks = (n + block_size - 1) / block_size;
  std::vector<T> partial(static_cast<std::size_t>(n_blocks));
  detail::run_blocks(n_blocks, [&](std::int64_t b) {
    std::int64_t lo = b * block_size;
    std::int64_t hi = lo + block_size < n ? lo + block_size : n;
    partial[static_cast<std::size_t>(b)] = block_fn(b, lo, hi);
  });
  T out = init;
  for (auto& p : partial) merge_fn(out, p);
  return out;
}

// plain parallel sweep with no reduction; same fixed block structure
template <class BlockFn>
void parallel_for_blocks(std::int64_t n, std::int64_t block_size, BlockFn block_fn) {
  if (n <= 0) return;
  if (block_size < 1) block_size = 1;
  std::int64_t n_blocks = (n + block_size - 1) / block_size;
  detail::run_blocks(n_blocks, [&](std::int64_t b) {
    std::int64_t lo = b * block_size;
    std::int64_t hi = lo + block_size < n ? lo + block_size : n;
    block_fn(b, lo, hi);
  });
}

}  // namespace tritail
