#include "fdlink/rng.hpp"

#include <cmath>
#include <numbers>

namespace fdlink {

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

FrameRng::FrameRng(uint64_t seed, uint64_t frame_index) {
    uint64_t s = seed ^ 0x6a09e667f3bcc908ULL;
    uint64_t a = splitmix64(s);
    s ^= frame_index * 0x9e3779b97f4a7c15ULL;
    uint64_t b = splitmix64(s);
    eng_.seed(a ^ (b + 0x2545f4914f6cdd1dULL + (frame_index << 1)));
}

uint64_t FrameRng::next_u64() { return eng_(); }

uint8_t FrameRng::bit() { return static_cast<uint8_t>(next_u64() >> 63); }

uint64_t FrameRng::below(uint64_t bound) {
    // Rejection sampling keeps the draw exactly uniform.
    const uint64_t limit = bound * (~uint64_t{0} / bound);
    uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % bound;
}

double FrameRng::u01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double FrameRng::gauss() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1, u2;
    do {
        u1 = u01();
    } while (u1 <= 0.0);
    u2 = u01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

}  // namespace fdlink
