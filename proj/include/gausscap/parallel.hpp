#pragma once

#include <cstddef>
#include <functional>

namespace gausscap {

/// Worker count: hardware concurrency, capped by GAUSSCAP_THREADS when set.
unsigned worker_count();

/// Calls body(i) for i in [0, n) across worker_count() threads. Exceptions
/// thrown by body are rethrown (the first one by index) after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gausscap
