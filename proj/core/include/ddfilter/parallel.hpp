#pragma once

#include <cstddef>
#include <functional>

namespace ddfilter {

/// Worker count: DD_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (DD_THREADS=0 means auto).
std::size_t thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() threads.
/// Chunks of min_block indices are claimed dynamically; callers write results
/// by index, so output never depends on scheduling. Calls made from inside a
/// worker run serially. If any call throws, the exception from the lowest
/// failing index is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t min_block = 1);

}  // namespace ddfilter
