#include "fdlink/harness/exit_chart.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace fdlink {

namespace {

/// log2(1 + exp(-x)) without overflow.
double soft_bit_term(double x) {
    constexpr double inv_ln2 = std::numbers::log2e;
    if (x >= 0.0) return std::log1p(std::exp(-x)) * inv_ln2;
    return (-x + std::log1p(std::exp(x))) * inv_ln2;
}

}  // namespace

double bitwise_mutual_information(const LlrBlock& llrs, const BitVec& bits) {
    if (llrs.size() != bits.size() || llrs.empty())
        throw std::invalid_argument("mutual_information: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < llrs.size(); ++i)
        s += soft_bit_term(bits[i] ? -llrs[i] : llrs[i]);
    return 1.0 - s / static_cast<double>(llrs.size());
}

double j_function(double sigma) {
    if (sigma <= 0.0) return 0.0;
    // Midpoint quadrature over +-10 standard deviations around sigma^2/2.
    constexpr int steps = 4000;
    const double mu = sigma * sigma / 2.0;
    const double lo = mu - 10.0 * sigma;
    const double hi = mu + 10.0 * sigma;
    const double dx = (hi - lo) / steps;
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    double acc = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double x = lo + (i + 0.5) * dx;
        const double z = (x - mu) / sigma;
        acc += std::exp(-0.5 * z * z) * soft_bit_term(x);
    }
    return 1.0 - norm * acc * dx;
}

double j_inverse(double i) {
    if (i <= 0.0) return 0.0;
    if (i >= 1.0) throw std::invalid_argument("j_inverse: target must be below 1");
    double lo = 1e-4, hi = 60.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (j_function(mid) < i)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<ExitPoint> exit_trajectory(const LinkRuntime& rt, double ebn0_db,
                                       std::size_t frames) {
    if (frames == 0) throw std::invalid_argument("exit_trajectory: frames must be positive");
    const LinkConfig& cfg = rt.config();
    const double sigma2 = cfg.sigma2_for(ebn0_db);
    const std::size_t nc = rt.coded_bits();
    const int passes = cfg.turbo_iters + 1;

    // Pooled soft-bit sums per pass over all frames and bits.
    std::vector<double> sa_det(passes, 0.0), se_det(passes, 0.0), sa_dec(passes, 0.0),
        se_dec(passes, 0.0);

    BcjrDecoder bcjr(MaxStar::Table);
    for (std::size_t f = 0; f < frames; ++f) {
        const FrameData fd = rt.make_frame(sigma2, f);
        const Interleaver il{std::vector<uint32_t>(fd.perm)};
        LlrBlock la(nc, 0.0);
        for (int tau = 0; tau < passes; ++tau) {
            sa_det[tau] += 1.0 - bitwise_mutual_information(la, fd.coded_perm);
            const LlrBlock le = rt.detect(fd.y, sigma2, la, tau);
            se_det[tau] += 1.0 - bitwise_mutual_information(le, fd.coded_perm);
            const LlrBlock dec_in = il.deinterleave(le);
            sa_dec[tau] += 1.0 - bitwise_mutual_information(dec_in, fd.coded);
            const BcjrResult dec = bcjr.decode(dec_in);
            LlrBlock ext(nc);
            for (std::size_t i = 0; i < nc; ++i)
                ext[i] = clip_llr(dec.app_coded[i] - dec_in[i]);
            se_dec[tau] += 1.0 - bitwise_mutual_information(ext, fd.coded);
            la = il.interleave(ext);
        }
    }

    std::vector<ExitPoint> rows(passes);
    const double inv = 1.0 / static_cast<double>(frames);
    for (int tau = 0; tau < passes; ++tau) {
        rows[tau].ti = tau;
        rows[tau].ia_det = 1.0 - sa_det[tau] * inv;
        rows[tau].ie_det = 1.0 - se_det[tau] * inv;
        rows[tau].ia_dec = 1.0 - sa_dec[tau] * inv;
        rows[tau].ie_dec = 1.0 - se_dec[tau] * inv;
    }
    return rows;
}

std::vector<DecCurvePoint> decoder_exit_curve(std::size_t n_info,
                                              const std::vector<double>& ia_grid,
                                              std::size_t frames, uint64_t seed) {
    if (n_info == 0 || frames == 0)
        throw std::invalid_argument("decoder_exit_curve: empty setup");
    const RscCode rsc;
    const BcjrDecoder bcjr(MaxStar::Table);
    const std::size_t nc = RscCode::coded_length(n_info);

    std::vector<DecCurvePoint> out;
    out.reserve(ia_grid.size());
    uint64_t frame_counter = 0;
    for (double ia : ia_grid) {
        const double sig = ia > 0.0 ? j_inverse(std::min(ia, 0.9999)) : 0.0;
        const double mu = sig * sig / 2.0;
        double se = 0.0;
        for (std::size_t f = 0; f < frames; ++f) {
            FrameRng rng(seed, frame_counter++);
            BitVec info(n_info);
            for (auto& b : info) b = rng.bit();
            const BitVec coded = rsc.encode(info);
            LlrBlock la(nc);
            for (std::size_t i = 0; i < nc; ++i) {
                const double s = coded[i] ? -1.0 : 1.0;
                la[i] = s * mu + sig * rng.gauss();
            }
            const BcjrResult dec = bcjr.decode(la);
            LlrBlock ext(nc);
            for (std::size_t i = 0; i < nc; ++i)
                ext[i] = clip_llr(dec.app_coded[i] - la[i]);
            se += bitwise_mutual_information(ext, coded);
        }
        out.push_back({ia, se / static_cast<double>(frames)});
    }
    return out;
}

double probe_fer(const LinkRuntime& rt, double ebn0_db, std::size_t frames) {
    const double sigma2 = rt.config().sigma2_for(ebn0_db);
    std::size_t errors = 0;
    for (std::size_t f = 0; f < frames; ++f)
        errors += rt.run_frame(sigma2, f).frame_error ? 1 : 0;
    return static_cast<double>(errors) / static_cast<double>(frames);
}

double pick_exit_ebn0(const LinkRuntime& rt, std::size_t probe_frames) {
    const auto& grid = rt.config().ebn0_db;
    if (grid.empty()) throw std::invalid_argument("exit: empty grid and no --ebn0");
    for (double e : grid)
        if (probe_fer(rt, e, probe_frames) < 0.5) return e;
    return grid.back();
}

void write_exit_csv(std::ostream& os, const std::vector<ExitPoint>& rows) {
    os << "ti,ia_det,ie_det,ia_dec,ie_dec\n";
    char buf[128];
    for (const ExitPoint& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%.6f,%.6f\n", r.ti, r.ia_det,
                      r.ie_det, r.ia_dec, r.ie_dec);
        os << buf;
    }
}

void write_decoder_curve_csv(std::ostream& os, const std::vector<DecCurvePoint>& rows) {
    os << "ia,ie\n";
    char buf[64];
    for (const DecCurvePoint& r : rows) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f\n", r.ia, r.ie);
        os << buf;
    }
}

}  // namespace fdlink
