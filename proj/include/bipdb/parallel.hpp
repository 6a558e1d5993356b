#pragma once

#include <cstdint>
#include <functional>

namespace bipdb {

// 0 (or negative) means "all hardware threads".
int resolve_workers(int requested);

// Runs fn(chunk_index, begin, end) over [0, n) in fixed-size chunks. Chunk
// boundaries depend only on n and chunk_size, never on the worker count, so
// per-chunk partial results can be combined in chunk order for bitwise
// reproducible reductions.
void for_each_chunk(uint64_t n, uint64_t chunk_size, int workers,
                    const std::function<void(size_t chunk, uint64_t begin, uint64_t end)>& fn);

inline constexpr uint64_t kDefaultChunk = 8192;

} // namespace bipdb
