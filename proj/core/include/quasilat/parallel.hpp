#pragma once

#include <cstddef>
#include <functional>

namespace quasilat {

// Worker count used by the library's parallel maps. Initialised from
// QUASILAT_THREADS (default 1, i.e. serial and bit-reproducible).
std::size_t thread_count();
void set_thread_count(std::size_t n);

// Splits [0, n) into at most thread_count() contiguous chunks and calls
// body(chunk_index, begin, end) for each; chunk boundaries depend only on n
// and the worker count. Exceptions from workers are rethrown on the caller.
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

// Number of chunks parallel_chunks(n, ...) will produce.
std::size_t chunk_count(std::size_t n);

}  // namespace quasilat
