#pragma once

// Shared pieces between the scalar and AVX2 kernel translation units.  The
// vector variants replicate exactly these constants and operation orders so
// that both backends produce identical bit patterns.

#include <bit>
#include <cmath>
#include <cstdint>

#include "fdlink/kernels.hpp"

namespace fdlink::kernels::detail {

// exp(x) = 2^k * exp(r), r = x - k*ln2 split against the classic hi/lo pair.
inline constexpr double kInvLn2 = 1.4426950408889634074;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;

// Taylor coefficients 1/i! for the degree-11 Horner evaluation on |r|<=ln2/2.
inline constexpr double kExpC[12] = {
    1.0,
    1.0,
    5.0000000000000000000e-01,
    1.6666666666666666667e-01,
    4.1666666666666666667e-02,
    8.3333333333333333333e-03,
    1.3888888888888888889e-03,
    1.9841269841269841270e-04,
    2.4801587301587301587e-05,
    2.7557319223985890653e-06,
    2.7557319223985890653e-07,
    2.5052108385441718775e-08,
};

inline double fexp_scalar(double x) {
    if (x < -708.0) return 0.0;
    const double kd = std::nearbyint(x * kInvLn2);
    const double r = (x - kd * kLn2Hi) - kd * kLn2Lo;
    double p = kExpC[11];
    for (int i = 10; i >= 0; --i) p = p * r + kExpC[i];
    const auto k = static_cast<int64_t>(kd);
    const double f = std::bit_cast<double>(static_cast<uint64_t>(k + 1023) << 52);
    return p * f;
}

inline void fold_max(double* acc, uint32_t mask, int positions, double t) {
    for (int pos = 0; pos < positions; ++pos) {
        double& a = acc[2 * pos + ((mask >> pos) & 1u)];
        if (t > a) a = t;
    }
}

inline void fold_lse(double* acc, uint32_t mask, int positions, double t,
                     const double* fc, double fc_scale) {
    for (int pos = 0; pos < positions; ++pos) {
        double& a = acc[2 * pos + ((mask >> pos) & 1u)];
        const double hi = a > t ? a : t;
        const double d = std::fabs(a - t);
        // Differences beyond the table (including the empty-bucket sentinel)
        // need no correction; the range check also keeps the index finite.
        if (d < 10.0) {
            const auto idx = static_cast<int>(d * fc_scale + 0.5);
            a = idx < 256 ? hi + fc[idx] : hi;
        } else {
            a = hi;
        }
    }
}

}  // namespace fdlink::kernels::detail
