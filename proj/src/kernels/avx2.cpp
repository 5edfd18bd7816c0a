// AVX2 kernel variants.  Compiled with -mavx2 only (no FMA) so every lane
// performs exactly the operation sequence of the scalar reference; outputs are
// bit-identical, which the kernel equivalence tests assert.

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace fdlink::kernels {

const Api* avx2_api_impl();

namespace {

using detail::fexp_scalar;

inline __m256d fexp4(__m256d x) {
    const __m256d kd = _mm256_round_pd(
        _mm256_mul_pd(x, _mm256_set1_pd(detail::kInvLn2)),
        _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_sub_pd(x, _mm256_mul_pd(kd, _mm256_set1_pd(detail::kLn2Hi)));
    r = _mm256_sub_pd(r, _mm256_mul_pd(kd, _mm256_set1_pd(detail::kLn2Lo)));
    __m256d p = _mm256_set1_pd(detail::kExpC[11]);
    for (int i = 10; i >= 0; --i)
        p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(detail::kExpC[i]));
    const __m128i k32 = _mm256_cvtpd_epi32(kd);
    const __m256i k64 = _mm256_cvtepi32_epi64(k32);
    const __m256i bits =
        _mm256_slli_epi64(_mm256_add_epi64(k64, _mm256_set1_epi64x(1023)), 52);
    __m256d res = _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
    const __m256d dead = _mm256_cmp_pd(x, _mm256_set1_pd(-708.0), _CMP_LT_OQ);
    return _mm256_andnot_pd(dead, res);
}

double fexp_avx2(double x) {
    alignas(32) double buf[4] = {x, x, x, x};
    _mm256_store_pd(buf, fexp4(_mm256_load_pd(buf)));
    return buf[0];
}

void fwht_stages_avx2(cplx* x, std::size_t n) {
    auto* d = reinterpret_cast<double*>(x);
    // Half-size 1: adjacent complex butterflies, 128-bit lanes.
    for (std::size_t k = 0; k + 1 < n; k += 2) {
        const __m128d u = _mm_loadu_pd(d + 2 * k);
        const __m128d v = _mm_loadu_pd(d + 2 * k + 2);
        _mm_storeu_pd(d + 2 * k, _mm_add_pd(u, v));
        _mm_storeu_pd(d + 2 * k + 2, _mm_sub_pd(u, v));
    }
    for (std::size_t m = 2; m < n; m <<= 1) {
        for (std::size_t k = 0; k < n; k += 2 * m) {
            for (std::size_t j = 0; j < m; j += 2) {
                double* top = d + 2 * (k + j);
                double* bot = d + 2 * (k + j + m);
                const __m256d u = _mm256_loadu_pd(top);
                const __m256d v = _mm256_loadu_pd(bot);
                _mm256_storeu_pd(top, _mm256_add_pd(u, v));
                _mm256_storeu_pd(bot, _mm256_sub_pd(u, v));
            }
        }
    }
}

void fft_stages_avx2(cplx* x, std::size_t n, const cplx* tw) {
    auto* d = reinterpret_cast<double*>(x);
    if (n >= 2) {
        for (std::size_t k = 0; k + 1 < n; k += 2) {
            const __m128d u = _mm_loadu_pd(d + 2 * k);
            const __m128d v = _mm_loadu_pd(d + 2 * k + 2);
            _mm_storeu_pd(d + 2 * k, _mm_add_pd(u, v));
            _mm_storeu_pd(d + 2 * k + 2, _mm_sub_pd(u, v));
        }
    }
    for (std::size_t m = 2; m < n; m <<= 1) {
        const auto* w = reinterpret_cast<const double*>(tw + (m - 1));
        for (std::size_t k = 0; k < n; k += 2 * m) {
            for (std::size_t j = 0; j < m; j += 2) {
                const __m256d wv = _mm256_loadu_pd(w + 2 * j);
                const __m256d wr = _mm256_movedup_pd(wv);
                const __m256d wi = _mm256_permute_pd(wv, 0b1111);
                double* top = d + 2 * (k + j);
                double* bot = d + 2 * (k + j + m);
                const __m256d v = _mm256_loadu_pd(bot);
                const __m256d vs = _mm256_permute_pd(v, 0b0101);
                // (wr*vr - wi*vi, wr*vi + wi*vr): the scalar mult forms.
                const __m256d t =
                    _mm256_addsub_pd(_mm256_mul_pd(wr, v), _mm256_mul_pd(wi, vs));
                const __m256d u = _mm256_loadu_pd(top);
                _mm256_storeu_pd(top, _mm256_add_pd(u, t));
                _mm256_storeu_pd(bot, _mm256_sub_pd(u, t));
            }
        }
    }
}

void ctable_fill_avx2(double* out, const double* s, std::size_t w, double y,
                      double g, double coef) {
    const __m256d yv = _mm256_set1_pd(y);
    const __m256d gv = _mm256_set1_pd(g);
    const __m256d cv = _mm256_set1_pd(coef);
    std::size_t i = 0;
    for (; i + 4 <= w; i += 4) {
        const __m256d t = _mm256_sub_pd(yv, _mm256_mul_pd(gv, _mm256_loadu_pd(s + i)));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_mul_pd(t, t), cv));
    }
    for (; i < w; ++i) {
        const double t = y - g * s[i];
        out[i] = (t * t) * coef;
    }
}

template <bool Lse>
void scan_avx2(const ScanArgs& a) {
    const int positions = a.q * a.bits_per_pam;
    const std::size_t zfit = a.z_count & ~std::size_t{3};
    alignas(32) double tt[4];
    for (std::size_t z = 0; z < zfit; z += 4) {
        __m256d t4 = _mm256_setzero_pd();
        for (int q = 0; q < a.q; ++q) {
            const std::size_t plane = static_cast<std::size_t>(q) * a.z_count;
            const __m128i si =
                _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.s_idx + plane + z));
            const __m128i gi =
                _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.g_idx + plane + z));
            t4 = _mm256_add_pd(
                t4, _mm256_i32gather_pd(a.ctab + static_cast<std::size_t>(q) * a.ct_stride,
                                        si, 8));
            t4 = _mm256_add_pd(
                t4, _mm256_i32gather_pd(a.ap + static_cast<std::size_t>(q * a.m), gi, 8));
        }
        _mm256_store_pd(tt, t4);
        for (int lane = 0; lane < 4; ++lane) {
            if constexpr (Lse)
                detail::fold_lse(a.acc, a.masks[z + lane], positions, tt[lane], a.fc,
                                 a.fc_scale);
            else
                detail::fold_max(a.acc, a.masks[z + lane], positions, tt[lane]);
        }
    }
    for (std::size_t z = zfit; z < a.z_count; ++z) {
        double t = 0.0;
        for (int q = 0; q < a.q; ++q) {
            const std::size_t plane = static_cast<std::size_t>(q) * a.z_count;
            t += a.ctab[static_cast<std::size_t>(q) * a.ct_stride +
                        static_cast<std::size_t>(a.s_idx[plane + z])];
            t += a.ap[static_cast<std::size_t>(q * a.m) + a.g_idx[plane + z]];
        }
        if constexpr (Lse)
            detail::fold_lse(a.acc, a.masks[z], positions, t, a.fc, a.fc_scale);
        else
            detail::fold_max(a.acc, a.masks[z], positions, t);
    }
}

void rail_posterior_avx2(RailArgs& a) {
    if (a.m < 4) {
        scalar_api().rail_posterior(a);
        return;
    }
    alignas(32) double xs[8];
    const __m256d ov = _mm256_set1_pd(a.obs);
    const __m256d iv = _mm256_set1_pd(a.inv_ve);
    __m256d mins = _mm256_set1_pd(1e300);
    for (int g = 0; g < a.m; g += 4) {
        const __m256d d = _mm256_sub_pd(ov, _mm256_loadu_pd(a.levels + g));
        const __m256d x = _mm256_add_pd(_mm256_mul_pd(_mm256_mul_pd(d, d), iv),
                                        _mm256_loadu_pd(a.prior_e + g));
        _mm256_store_pd(xs + g, x);
        mins = _mm256_min_pd(mins, x);
    }
    const __m128d lo =
        _mm_min_pd(_mm256_castpd256_pd128(mins), _mm256_extractf128_pd(mins, 1));
    const double xmin = _mm_cvtsd_f64(_mm_min_sd(lo, _mm_unpackhi_pd(lo, lo)));
    const __m256d xm = _mm256_set1_pd(xmin);
    for (int g = 0; g < a.m; g += 4)
        _mm256_storeu_pd(a.w + g, fexp4(_mm256_sub_pd(xm, _mm256_load_pd(xs + g))));
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (int g = 0; g < a.m; ++g) {
        const double lw = a.levels[g] * a.w[g];
        s0 += a.w[g];
        s1 += lw;
        s2 += lw * a.levels[g];
    }
    a.s0 = s0;
    a.s1 = s1;
    a.s2 = s2;
}

}  // namespace

const Api* avx2_api_impl() {
    static const Api t{
        "avx2",
        &fexp_avx2,
        &fwht_stages_avx2,
        &fft_stages_avx2,
        &ctable_fill_avx2,
        &scan_avx2<false>,
        &scan_avx2<true>,
        &rail_posterior_avx2,
    };
    return &t;
}

}  // namespace fdlink::kernels
