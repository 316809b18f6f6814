#pragma once

#include <cstdint>
#include <functional>

namespace galmod {

/// Worker count: GALMOD_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned thread_count();

/// Split [0, total) into contiguous chunks and run body(begin, end, slot) for
/// each, one chunk per worker. Slots are numbered 0..thread_count()-1 so
/// callers can keep per-slot accumulators and combine them deterministically.
void parallel_chunks(std::uint64_t total,
                     const std::function<void(std::uint64_t, std::uint64_t, unsigned)> &body);

} // namespace galmod
