#pragma once

#include <cstddef>
#include <functional>

namespace infolab {

/// Worker count: INFOLAB_THREADS if set and positive, else the hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Tasks must
/// write only to their own slots; the first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace infolab
