#pragma once

#include <cstddef>

// Heap accounting for the bench paths. Linking src/memtrack.cpp replaces the
// global operator new/delete; install() also routes GMP through the counters.
namespace cyfrob::memtrack {

void install();
bool installed();
std::size_t current_bytes();
std::size_t peak_bytes();
// peak := current
void reset_peak();

}  // namespace cyfrob::memtrack
