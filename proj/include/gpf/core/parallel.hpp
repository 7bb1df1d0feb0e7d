// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace gpf {

/// Worker count used by parallel_for. 0 means hardware concurrency.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Calls body(i) for i in [0, n). Work is handed out in chunks of `grain`;
/// callers must write results to index-addressed slots so the outcome does not
/// depend on the schedule. The first exception thrown by a body is rethrown
/// after all workers have stopped.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, std::size_t grain = 64);

}  // namespace gpf
