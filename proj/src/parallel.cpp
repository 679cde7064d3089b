#include "pmtherm/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace pmtherm {

std::size_t default_workers() {
  if (const char* env = std::getenv("PMTHERM_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void for_each_stream(std::size_t n, std::size_t workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  const std::size_t streams = (n + kStreamBlock - 1) / kStreamBlock;
  if (workers == 0) workers = default_workers();
  workers = std::max<std::size_t>(1, std::min(workers, streams));

  auto run = [&](std::size_t s) {
    const std::size_t first = s * kStreamBlock;
    body(s, first, std::min(n, first + kStreamBlock));
  };
  if (workers == 1) {
    for (std::size_t s = 0; s < streams; ++s) run(s);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t s = next++; s < streams; s = next++) {
        try {
          run(s);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace pmtherm
