#pragma once

#include <cstddef>
#include <functional>

namespace semdrift {

/// Worker count used by every parallel loop in the library. 0 means one
/// worker per hardware thread.
void set_thread_count(unsigned count) noexcept;
unsigned thread_count() noexcept;

/// Runs body(i) for i in [0, n). Each index is visited exactly once; callers
/// write results into per-index slots, so output never depends on the
/// number of workers. The first exception thrown by a body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace semdrift
