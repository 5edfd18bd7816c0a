#include "fdlink/transforms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fdlink/kernels.hpp"

namespace fdlink {

namespace {

void require_pow2(std::size_t n, const char* who) {
    if (!is_pow2(n))
        throw std::invalid_argument(std::string(who) + ": length must be a power of two");
}

}  // namespace

void fwht_unnormalized(ComplexBlock& x) {
    require_pow2(x.size(), "fwht");
    kernels::api().fwht_stages(x.data(), x.size());
}

void fwht(ComplexBlock& x) {
    fwht_unnormalized(x);
    const double s = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (auto& v : x) v *= s;
}

Fft::Fft(std::size_t n) : n_(n) {
    require_pow2(n, "fft");
    scale_ = 1.0 / std::sqrt(static_cast<double>(n));
    rev_.resize(n);
    const unsigned bits = ilog2(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (unsigned b = 0; b < bits; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        rev_[i] = r;
    }
    // Flat table: the stage with half-size m keeps its m twiddles at offset m-1.
    tw_fwd_.resize(n > 1 ? n - 1 : 0);
    tw_inv_.resize(tw_fwd_.size());
    for (std::size_t m = 1; m < n; m <<= 1) {
        for (std::size_t j = 0; j < m; ++j) {
            const double th = std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
            const cplx w(std::cos(th), -std::sin(th));
            tw_fwd_[m - 1 + j] = w;
            tw_inv_[m - 1 + j] = std::conj(w);
        }
    }
}

void Fft::run(ComplexBlock& x, const ComplexBlock& tw) const {
    if (x.size() != n_) throw std::invalid_argument("fft: length mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t r = rev_[i];
        if (i < r) std::swap(x[i], x[r]);
    }
    if (n_ > 1) kernels::api().fft_stages(x.data(), n_, tw.data());
    for (auto& v : x) v *= scale_;
}

void Fft::forward(ComplexBlock& x) const { run(x, tw_fwd_); }
void Fft::inverse(ComplexBlock& x) const { run(x, tw_inv_); }

}  // namespace fdlink
