#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace coklab {

/// Splits [0, count) into `workers` contiguous chunks and calls
/// fn(worker, begin, end) for each on its own thread. The first exception
/// thrown by any chunk is rethrown after all threads join.
template <class Fn>
void parallel_chunks(std::uint64_t count, int workers, Fn&& fn) {
  const auto w = static_cast<std::uint64_t>(std::max(1, workers));
  const std::uint64_t used = std::max<std::uint64_t>(1, std::min(w, count));
  if (used == 1) {
    fn(0, std::uint64_t{0}, count);
    return;
  }
  std::vector<std::exception_ptr> errors(used);
  std::vector<std::thread> threads;
  threads.reserve(used);
  for (std::uint64_t i = 0; i < used; ++i) {
    const std::uint64_t begin = count * i / used, end = count * (i + 1) / used;
    threads.emplace_back([&, i, begin, end] {
      try {
        fn(static_cast<int>(i), begin, end);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace coklab
