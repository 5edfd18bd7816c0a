#include <cmath>

#include "kernels_impl.hpp"

namespace fdlink::kernels {

namespace {

using detail::fexp_scalar;

void fwht_stages_scalar(cplx* x, std::size_t n) {
    for (std::size_t m = 1; m < n; m <<= 1) {
        for (std::size_t k = 0; k < n; k += 2 * m) {
            for (std::size_t j = 0; j < m; ++j) {
                const cplx u = x[k + j];
                const cplx v = x[k + j + m];
                x[k + j] = u + v;
                x[k + j + m] = u - v;
            }
        }
    }
}

void fft_stages_scalar(cplx* x, std::size_t n, const cplx* tw) {
    for (std::size_t m = 1; m < n; m <<= 1) {
        const cplx* w = tw + (m - 1);
        for (std::size_t k = 0; k < n; k += 2 * m) {
            for (std::size_t j = 0; j < m; ++j) {
                const double wa = w[j].real();
                const double wb = w[j].imag();
                const cplx v = x[k + j + m];
                const double tr = wa * v.real() - wb * v.imag();
                const double ti = wa * v.imag() + wb * v.real();
                const cplx u = x[k + j];
                x[k + j] = cplx(u.real() + tr, u.imag() + ti);
                x[k + j + m] = cplx(u.real() - tr, u.imag() - ti);
            }
        }
    }
}

void ctable_fill_scalar(double* out, const double* s, std::size_t w, double y,
                        double g, double coef) {
    for (std::size_t i = 0; i < w; ++i) {
        const double t = y - g * s[i];
        out[i] = (t * t) * coef;
    }
}

template <bool Lse>
void scan_scalar(const ScanArgs& a) {
    const int positions = a.q * a.bits_per_pam;
    for (std::size_t z = 0; z < a.z_count; ++z) {
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

void rail_posterior_scalar(RailArgs& a) {
    double xs[8];
    double xmin = 1e300;
    for (int g = 0; g < a.m; ++g) {
        const double d = a.obs - a.levels[g];
        const double x = (d * d) * a.inv_ve + a.prior_e[g];
        xs[g] = x;
        if (x < xmin) xmin = x;
    }
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (int g = 0; g < a.m; ++g) {
        const double w = fexp_scalar(xmin - xs[g]);
        a.w[g] = w;
        const double lw = a.levels[g] * w;
        s0 += w;
        s1 += lw;
        s2 += lw * a.levels[g];
    }
    a.s0 = s0;
    a.s1 = s1;
    a.s2 = s2;
}

}  // namespace

const Api& scalar_api() {
    static const Api t{
        "scalar",
        &fexp_scalar,
        &fwht_stages_scalar,
        &fft_stages_scalar,
        &ctable_fill_scalar,
        &scan_scalar<false>,
        &scan_scalar<true>,
        &rail_posterior_scalar,
    };
    return t;
}

}  // namespace fdlink::kernels
