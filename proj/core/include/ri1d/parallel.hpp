#pragma once

#include <cstddef>
#include <functional>

namespace ri1d {

/// Worker count: hardware concurrency, capped by the RI1D_THREADS environment variable.
unsigned worker_count();

/// Runs body(i) for i in [0, n). Each index is handled exactly once; callers write
/// into per-index slots so the merged result does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace ri1d
