#pragma once

#include <cstddef>
#include <functional>

namespace varprin {

/// Forces every parallel_for in the process to run on the calling thread.
void set_serial(bool serial);
bool serial_mode();
/// Upper bound on worker threads (0 = hardware concurrency).
void set_max_threads(unsigned count);

/// Runs body(i) for i in [0, count). Iterations must write only to their own
/// slot; nested calls run serially. If several iterations throw, the exception
/// of the lowest index is rethrown, so failures are the same in serial and
/// parallel runs.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace varprin
