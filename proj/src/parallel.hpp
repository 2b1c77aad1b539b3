#pragma once

#include <cstddef>
#include <functional>

namespace mmsv::detail {

/// Worker count: hardware concurrency, capped by MMS_VERIFY_THREADS when set.
std::size_t worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, count). Chunks write
/// disjoint outputs, so results do not depend on the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace mmsv::detail
