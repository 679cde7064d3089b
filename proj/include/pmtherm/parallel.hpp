#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace pmtherm {

/// Draws per stream. Global draw g belongs to stream g / kStreamBlock.
inline constexpr std::size_t kStreamBlock = 1024;

/// Worker count: PMTHERM_THREADS if set and positive, else hardware
/// concurrency (at least 1).
std::size_t default_workers();

/// Calls body(stream, first, last) for every stream covering [0, n). Streams
/// are handed to `workers` threads (0 = default_workers()); the body must
/// write only to its own slice of output.
void for_each_stream(std::size_t n, std::size_t workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace pmtherm
