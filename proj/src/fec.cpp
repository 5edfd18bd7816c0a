#include "fdlink/fec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace fdlink {

namespace {

constexpr double kNegInf = -1e300;

struct Branch {
    int next;
    int d;    // register input after feedback
    int par;  // parity output
};

// branch[state][u]: feedback 1+D+D^2, feedforward 1+D^2.
// State packs (d_{k-1} << 1) | d_{k-2}.
constexpr Branch branch_of(int s, int u) {
    const int p1 = (s >> 1) & 1;
    const int p2 = s & 1;
    const int d = u ^ p1 ^ p2;
    return {(d << 1) | p1, d, d ^ p2};
}

struct Trellis {
    Branch b[4][2];
    constexpr Trellis() : b{} {
        for (int s = 0; s < 4; ++s)
            for (int u = 0; u < 2; ++u) b[s][u] = branch_of(s, u);
    }
};

constexpr Trellis kTrellis;

}  // namespace

std::size_t RscCode::info_length(std::size_t n_coded) {
    if (n_coded % 2 != 0 || n_coded < 2 * kTailBits + 2)
        throw std::invalid_argument("rsc: invalid coded length");
    return n_coded / 2 - kTailBits;
}

BitVec RscCode::encode(const BitVec& info) const {
    const std::size_t steps = info.size() + kTailBits;
    BitVec out(2 * steps);
    int s = 0;
    for (std::size_t k = 0; k < steps; ++k) {
        const int p1 = (s >> 1) & 1;
        const int p2 = s & 1;
        const int u = k < info.size() ? (info[k] & 1) : (p1 ^ p2);
        const Branch& br = kTrellis.b[s][u];
        out[2 * k] = static_cast<uint8_t>(u);
        out[2 * k + 1] = static_cast<uint8_t>(br.par);
        s = br.next;
    }
    return out;
}

Interleaver::Interleaver(std::vector<uint32_t> perm) : perm_(std::move(perm)) {
    inv_.resize(perm_.size());
    std::vector<uint8_t> seen(perm_.size(), 0);
    for (std::size_t i = 0; i < perm_.size(); ++i) {
        const uint32_t p = perm_[i];
        if (p >= perm_.size() || seen[p])
            throw std::invalid_argument("interleaver: not a permutation");
        seen[p] = 1;
        inv_[p] = static_cast<uint32_t>(i);
    }
}

Interleaver Interleaver::random(std::size_t n, FrameRng& rng) {
    std::vector<uint32_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<uint32_t>(i);
    for (std::size_t i = n; i > 1; --i)
        std::swap(p[i - 1], p[rng.below(i)]);
    return Interleaver(std::move(p));
}

Interleaver Interleaver::identity(std::size_t n) {
    std::vector<uint32_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<uint32_t>(i);
    return Interleaver(std::move(p));
}

LlrBlock Interleaver::interleave(const LlrBlock& x) const {
    if (x.size() != perm_.size()) throw std::invalid_argument("interleave: length mismatch");
    LlrBlock y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[perm_[i]];
    return y;
}

LlrBlock Interleaver::deinterleave(const LlrBlock& x) const {
    if (x.size() != perm_.size()) throw std::invalid_argument("deinterleave: length mismatch");
    LlrBlock y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[inv_[i]];
    return y;
}

BitVec Interleaver::interleave(const BitVec& x) const {
    if (x.size() != perm_.size()) throw std::invalid_argument("interleave: length mismatch");
    BitVec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[perm_[i]];
    return y;
}

BcjrDecoder::BcjrDecoder(MaxStar mode) : mode_(mode), fc_(&fc_table()) {}

double BcjrDecoder::fold(double a, double b) const {
    const double hi = a > b ? a : b;
    const double lo = a > b ? b : a;
    if (lo <= kNegInf) return hi;
    const double d = hi - lo;
    if (mode_ == MaxStar::Exact) return hi + std::log1p(std::exp(-d));
    return hi + fc_->lookup(d);
}

BcjrResult BcjrDecoder::decode(const LlrBlock& coded_llr) const {
    const std::size_t n_info = RscCode::info_length(coded_llr.size());
    const std::size_t steps = n_info + RscCode::kTailBits;

    // gamma[k][s][u] = -c_sys*L_sys - c_par*L_par for the allowed branches.
    std::vector<std::array<std::array<double, 2>, 4>> gamma(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const double ls = coded_llr[2 * k];
        const double lp = coded_llr[2 * k + 1];
        for (int s = 0; s < 4; ++s) {
            for (int u = 0; u < 2; ++u) {
                const Branch& br = kTrellis.b[s][u];
                const bool allowed = k < n_info || br.d == 0;
                gamma[k][s][u] =
                    allowed ? -(u ? ls : 0.0) - (br.par ? lp : 0.0) : kNegInf;
            }
        }
    }

    std::vector<std::array<double, 4>> alpha(steps + 1), beta(steps + 1);
    alpha[0] = {0.0, kNegInf, kNegInf, kNegInf};
    for (std::size_t k = 0; k < steps; ++k) {
        alpha[k + 1] = {kNegInf, kNegInf, kNegInf, kNegInf};
        for (int s = 0; s < 4; ++s) {
            if (alpha[k][s] <= kNegInf) continue;
            for (int u = 0; u < 2; ++u) {
                if (gamma[k][s][u] <= kNegInf) continue;
                double& dst = alpha[k + 1][kTrellis.b[s][u].next];
                dst = fold(dst, alpha[k][s] + gamma[k][s][u]);
            }
        }
        const double mx = *std::max_element(alpha[k + 1].begin(), alpha[k + 1].end());
        for (double& v : alpha[k + 1])
            if (v > kNegInf) v -= mx;
    }

    beta[steps] = {0.0, kNegInf, kNegInf, kNegInf};
    for (std::size_t k = steps; k-- > 0;) {
        beta[k] = {kNegInf, kNegInf, kNegInf, kNegInf};
        for (int s = 0; s < 4; ++s) {
            for (int u = 0; u < 2; ++u) {
                if (gamma[k][s][u] <= kNegInf) continue;
                const double nb = beta[k + 1][kTrellis.b[s][u].next];
                if (nb <= kNegInf) continue;
                beta[k][s] = fold(beta[k][s], nb + gamma[k][s][u]);
            }
        }
        const double mx = *std::max_element(beta[k].begin(), beta[k].end());
        for (double& v : beta[k])
            if (v > kNegInf) v -= mx;
    }

    BcjrResult res;
    res.app_coded.resize(coded_llr.size());
    res.app_info.resize(n_info);
    for (std::size_t k = 0; k < steps; ++k) {
        double sys[2] = {kNegInf, kNegInf};
        double par[2] = {kNegInf, kNegInf};
        for (int s = 0; s < 4; ++s) {
            if (alpha[k][s] <= kNegInf) continue;
            for (int u = 0; u < 2; ++u) {
                if (gamma[k][s][u] <= kNegInf) continue;
                const Branch& br = kTrellis.b[s][u];
                const double nb = beta[k + 1][br.next];
                if (nb <= kNegInf) continue;
                const double w = alpha[k][s] + gamma[k][s][u] + nb;
                sys[u] = fold(sys[u], w);
                par[br.par] = fold(par[br.par], w);
            }
        }
        res.app_coded[2 * k] = sys[0] - sys[1];
        res.app_coded[2 * k + 1] = par[0] - par[1];
        if (k < n_info) res.app_info[k] = sys[0] - sys[1];
    }
    return res;
}

}  // namespace fdlink
