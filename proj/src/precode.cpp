#include "fdlink/precode.hpp"

#include <stdexcept>

#include "fdlink/transforms.hpp"

namespace fdlink {

PrecoderSpec PrecoderSpec::make(PrecoderKind kind, std::size_t n, std::size_t q) {
    if (!is_pow2(n)) throw std::invalid_argument("precoder: n must be a power of two");
    if (kind == PrecoderKind::Dft) q = n;
    if (!is_pow2(q) || q == 0 || q > n || n % q != 0)
        throw std::invalid_argument("precoder: q must be a power of two dividing n");
    return {kind, n, q, n / q};
}

const char* to_string(PrecoderKind k) {
    switch (k) {
        case PrecoderKind::Dft: return "dft";
        case PrecoderKind::Sdft: return "sdft";
        case PrecoderKind::Swh: return "swh";
    }
    return "?";
}

std::vector<std::size_t> group_indices(const PrecoderSpec& spec, std::size_t p) {
    if (p >= spec.p) throw std::invalid_argument("group_indices: group out of range");
    std::vector<std::size_t> idx(spec.q);
    for (std::size_t q = 0; q < spec.q; ++q) idx[q] = p + q * spec.p;
    return idx;
}

namespace {

template <typename GroupFn>
ComplexBlock apply_grouped(const PrecoderSpec& spec, const ComplexBlock& in, GroupFn&& fn) {
    if (in.size() != spec.n) throw std::invalid_argument("precode: length mismatch");
    ComplexBlock out(spec.n);
    ComplexBlock buf(spec.q);
    for (std::size_t p = 0; p < spec.p; ++p) {
        for (std::size_t q = 0; q < spec.q; ++q) buf[q] = in[p + q * spec.p];
        fn(buf);
        for (std::size_t q = 0; q < spec.q; ++q) out[p + q * spec.p] = buf[q];
    }
    return out;
}

}  // namespace

ComplexBlock precode(const PrecoderSpec& spec, const ComplexBlock& d) {
    if (spec.kind == PrecoderKind::Swh)
        return apply_grouped(spec, d, [](ComplexBlock& b) { fwht(b); });
    const Fft fft(spec.q);
    return apply_grouped(spec, d, [&](ComplexBlock& b) { fft.forward(b); });
}

ComplexBlock deprecode(const PrecoderSpec& spec, const ComplexBlock& x) {
    if (spec.kind == PrecoderKind::Swh)
        return apply_grouped(spec, x, [](ComplexBlock& b) { fwht(b); });
    const Fft fft(spec.q);
    return apply_grouped(spec, x, [&](ComplexBlock& b) { fft.inverse(b); });
}

std::vector<GroupView> split_groups(const PrecoderSpec& spec, const ComplexBlock& y,
                                    const ComplexBlock& lambda) {
    if (y.size() != spec.n || lambda.size() != spec.n)
        throw std::invalid_argument("split_groups: length mismatch");
    std::vector<GroupView> groups(spec.p);
    for (std::size_t p = 0; p < spec.p; ++p) {
        GroupView& g = groups[p];
        g.p = p;
        g.idx = group_indices(spec, p);
        g.y.resize(spec.q);
        g.lambda.resize(spec.q);
        for (std::size_t q = 0; q < spec.q; ++q) {
            g.y[q] = y[g.idx[q]];
            g.lambda[q] = lambda[g.idx[q]];
        }
    }
    return groups;
}

}  // namespace fdlink
