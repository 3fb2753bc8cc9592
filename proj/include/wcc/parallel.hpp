#pragma once

#include <cstddef>
#include <functional>

namespace wcc {

// Worker-thread count used by the channel- and element-parallel loops in
// this library. Affects wall time only: every parallel loop writes disjoint
// output ranges with a fixed per-element evaluation order, so results are
// bit-identical for any thread count.
void set_num_threads(int n);
int num_threads();

// Invokes fn(begin, end) on contiguous chunks covering [0, count).
// With one worker this is a single direct call.
void parallel_chunks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace wcc
