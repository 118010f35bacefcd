#pragma once
#include <cstddef>
#include <functional>

namespace fracext {

/// Upper bound on worker threads for inner loops; 0 selects the number of available cores.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Runs body(i) for i in [0, count). Work is split into fixed contiguous chunks and every
/// index writes only its own output, so results do not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fracext
