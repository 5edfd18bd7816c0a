#pragma once

#include <cstddef>
#include <cstdint>

#include "fdlink/types.hpp"

namespace fdlink::kernels {

/// Arguments for the detector enumeration scan.
///
/// The scan walks every candidate amplitude vector z of one group rail,
/// accumulates its metric t(z) from the per-coordinate cost table and prior
/// table, and folds t(z) into one accumulator pair per label bit position.
struct ScanArgs {
    const int32_t* s_idx;   ///< Q planes of z_count cost-table column indices
    const int32_t* g_idx;   ///< Q planes of z_count level indices (prior lookup)
    const uint32_t* masks;  ///< per-z label bits, bit (q*bits_per_pam + b)
    const double* ctab;     ///< Q rows of cost values, stride ct_stride
    const double* ap;       ///< Q rows of per-level prior log-weights, stride m
    std::size_t z_count;
    int q;
    int m;                  ///< levels per coordinate (sqrt of QAM order)
    int bits_per_pam;
    std::size_t ct_stride;
    const double* fc;       ///< 256-entry max-star correction table (lse only)
    double fc_scale;        ///< table index scale (entries per unit)
    double* acc;            ///< 2*q*bits_per_pam accumulators, acc[2*pos+bit]
};

/// Arguments for the per-rail PAM posterior update.
///
/// Weights w[g] = exp(-((obs-levels[g])^2*inv_ve + prior_e[g] - shift)) with
/// shift chosen so the largest weight is 1; s0/s1/s2 are the raw, first and
/// second moment sums used for the mean/variance of the rail posterior.
struct RailArgs {
    double obs;
    double inv_ve;
    const double* levels;
    const double* prior_e;  ///< per-level prior exponent (negative log-weight)
    int m;
    double* w;              ///< out: m raw weights
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
};

struct Api {
    const char* name;
    /// exp(x) for x <= ~700; identical bit pattern across backends.
    double (*fexp)(double);
    /// In-place unnormalized Walsh-Hadamard butterflies, n a power of two.
    void (*fwht_stages)(cplx* x, std::size_t n);
    /// In-place radix-2 DIT butterflies over bit-reversed input; tw is the
    /// flat per-stage twiddle table (stage of half-size m at offset m-1).
    void (*fft_stages)(cplx* x, std::size_t n, const cplx* tw);
    /// out[i] = ((y - g*s[i])^2) * coef
    void (*ctable_fill)(double* out, const double* s, std::size_t w, double y,
                        double g, double coef);
    void (*scan_maxlog)(const ScanArgs& a);
    void (*scan_lse)(const ScanArgs& a);
    void (*rail_posterior)(RailArgs& a);
};

enum class Backend { Scalar, Avx2 };

const Api& scalar_api();
/// Null when the build or CPU lacks AVX2.
const Api* avx2_api();
bool avx2_supported();

/// Selects the dispatch table; throws std::invalid_argument when unsupported.
void set_backend(Backend b);
Backend active_backend();

/// Honors FDLINK_KERNELS=scalar|avx2 on first use, else picks the best
/// supported backend.
const Api& api();

}  // namespace fdlink::kernels
