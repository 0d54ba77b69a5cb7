#pragma once

#include <cstddef>
#include <functional>

namespace tpi {

/// Worker count from the TPI_WORKERS environment variable, otherwise the
/// hardware concurrency. Always at least 1.
std::size_t worker_count();

/// Splits [0, n) into `chunks` contiguous slices and runs
/// fn(chunk, begin, end) for each on up to `workers` threads. Callers store
/// per-chunk results by chunk index, so assembly does not depend on
/// scheduling. The first exception thrown by fn is rethrown.
void parallel_chunks(std::size_t n, std::size_t chunks, std::size_t workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace tpi
