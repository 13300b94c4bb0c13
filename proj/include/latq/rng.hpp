#pragma once
#include <array>
#include <cstdint>

namespace latq {

// Philox4x32-10 counter-based generator: every output is a pure function of
// (key, counter), so sample i coordinate j is reproducible no matter how the
// work is scheduled across threads.
std::array<uint32_t, 4> philox4x32(uint64_t key, uint64_t ctr_lo, uint64_t ctr_hi);

// Uniform double in [0, 1) for (seed, sample index, coordinate).
double uniform01(uint64_t seed, uint64_t sample, uint32_t coord);

}  // namespace latq
