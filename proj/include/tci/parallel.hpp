#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace tci {

/// Runs body(begin, end) over contiguous chunks of [0, count) on up to
/// `workers` threads (0 = hardware concurrency). Chunks write disjoint
/// outputs, so results never depend on scheduling.
template <typename F>
void parallel_for(std::int64_t count, F&& body, unsigned workers = 0) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  constexpr std::int64_t kMinChunk = 4096;
  const auto chunks = static_cast<unsigned>(
      std::clamp<std::int64_t>(count / kMinChunk, 1, workers));
  if (chunks <= 1) {
    body(std::int64_t{0}, count);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(chunks);
  for (unsigned c = 0; c < chunks; ++c) {
    const std::int64_t begin = count * c / chunks;
    const std::int64_t end = count * (c + 1) / chunks;
    threads.emplace_back([&, c, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// out[i] = fn(i), items handed out one at a time (for coarse, uneven
/// work). Results land by index; the lowest-index exception is rethrown.
template <typename T, typename F>
std::vector<T> parallel_map(std::size_t count, F&& fn, unsigned workers = 0) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<T> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads_wanted = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (threads_wanted <= 1) {
    run();
  } else {
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < threads_wanted; ++t) threads.emplace_back(run);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace tci
