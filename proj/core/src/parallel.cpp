#include "ddfilter/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ddfilter {

std::size_t thread_count() {
  if (const char* env = std::getenv("DD_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      // unparsable values fall back to auto
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {
thread_local bool in_worker = false;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t min_block) {
  if (count == 0) return;
  min_block = std::max<std::size_t>(1, min_block);
  const std::size_t chunks = (count + min_block - 1) / min_block;
  const std::size_t workers = in_worker ? 1 : std::min(thread_count(), chunks);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::mutex mutex;
  std::size_t failed_index = count;
  std::exception_ptr failure;
  std::atomic<std::size_t> next{0};

  // chunks are claimed dynamically; indices past a known failure are skipped
  // so the reported failure is always the lowest failing index
  auto run = [&] {
    in_worker = true;
    for (;;) {
      const std::size_t begin = next.fetch_add(min_block);
      if (begin >= count) break;
      const std::size_t end = std::min(count, begin + min_block);
      for (std::size_t i = begin; i < end; ++i) {
        {
          std::lock_guard lock(mutex);
          if (i > failed_index) break;
        }
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(mutex);
          if (i < failed_index) {
            failed_index = i;
            failure = std::current_exception();
          }
        }
      }
    }
    in_worker = false;
  };

  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run);
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ddfilter
