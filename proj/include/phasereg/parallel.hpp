#pragma once

#include <cstddef>
#include <functional>

namespace phasereg {

void set_thread_count(unsigned count);
unsigned thread_count();

// Runs body(i) for i in [0, n). Work is split into contiguous blocks so
// every index is written by exactly one thread and results do not depend
// on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace phasereg
