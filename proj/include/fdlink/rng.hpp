#pragma once

#include <cstdint>
#include <random>

#include "fdlink/types.hpp"

namespace fdlink {

/// splitmix64 step; used to derive well-separated seeds from (master, counter).
uint64_t splitmix64(uint64_t& state);

/// Deterministic per-frame random stream.
///
/// Every frame owns an independent stream keyed by (seed, frame_index), so
/// simulation results do not depend on scheduling or thread count.  All
/// distributions are hand-rolled on top of the raw 64-bit output to keep the
/// bit stream identical across standard library implementations.
class FrameRng {
  public:
    FrameRng(uint64_t seed, uint64_t frame_index);

    uint64_t next_u64();

    /// One equiprobable bit.
    uint8_t bit();

    /// Uniform integer in [0, bound) by rejection; bound must be nonzero.
    uint64_t below(uint64_t bound);

    /// Uniform double in [0, 1) with 53-bit resolution.
    double u01();

    /// Standard normal via Box-Muller; pairs are cached.
    double gauss();

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fdlink
