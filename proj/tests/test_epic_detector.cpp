#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "fdlink/channel.hpp"
#include "fdlink/constellation.hpp"
#include "fdlink/epic_detector.hpp"
#include "fdlink/precode.hpp"
#include "fdlink/rng.hpp"
#include "fdlink/transforms.hpp"

using namespace fdlink;

namespace {

ComplexBlock random_block(std::size_t n, uint64_t seed, double s = 1.0) {
    FrameRng rng(seed, 0);
    ComplexBlock x(n);
    for (auto& v : x) v = {s * rng.gauss(), s * rng.gauss()};
    return x;
}

// Dense per-symbol LMMSE with extrinsic (cavity) gain normalization.
void dense_lmmse(const std::vector<ComplexBlock>& g, const ComplexBlock& y,
                 const ComplexBlock& lambda, const ComplexBlock& d_a, double v_a,
                 double sigma2, ComplexBlock& d_e, std::vector<double>& v_e) {
    const std::size_t n = y.size();
    ComplexBlock r(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{0, 0};
        for (std::size_t col = 0; col < n; ++col) acc += g[k][col] * d_a[col];
        r[k] = y[k] - acc;
    }
    d_e.assign(n, cplx{0, 0});
    v_e.assign(n, 0.0);
    for (std::size_t col = 0; col < n; ++col) {
        double lam = 0.0;
        cplx corr{0, 0};
        for (std::size_t k = 0; k < n; ++k) {
            const double den = std::norm(lambda[k]) * v_a + sigma2;
            lam += std::norm(g[k][col]) / den;
            corr += std::conj(g[k][col]) * r[k] / den;
        }
        d_e[col] = d_a[col] + corr / lam;
        v_e[col] = 1.0 / lam - v_a;
    }
}

}  // namespace

TEST_CASE("schedule defaults and decay") {
    const EpSchedule s4 = EpSchedule::defaults(4);
    CHECK(s4.n_self == 2);
    CHECK(s4.beta_scale == doctest::Approx(0.7));
    CHECK(s4.beta_decay == doctest::Approx(0.9));
    const EpSchedule s16 = EpSchedule::defaults(16);
    CHECK(s16.n_self == 5);
    CHECK(s16.beta_scale == doctest::Approx(0.85));
    CHECK(s16.beta_decay == doctest::Approx(0.85));
    const EpSchedule s64 = EpSchedule::defaults(64);
    CHECK(s64.n_self == 6);
    CHECK(s64.beta_scale == doctest::Approx(1.0));
    CHECK(s64.beta_decay == doctest::Approx(0.85));

    CHECK(s4.beta(0, 0) == doctest::Approx(0.7));
    CHECK(s4.beta(1, 2) == doctest::Approx(0.7 * 0.9 * 0.9 * 0.9));
}

TEST_CASE("prior pmf") {
    const Constellation c = Constellation::make(4);
    const std::vector<double> uni = prior_pmf(c, LlrBlock{0.0, 0.0});
    for (double p : uni) CHECK(p == doctest::Approx(0.25).epsilon(1e-14));

    // L(bit I) = 2 favors bit 0, which labels the positive level.
    const std::vector<double> pmf = prior_pmf(c, LlrBlock{2.0, -1.0});
    const double pi0 = 1.0 / (1.0 + std::exp(-2.0));  // P(I bit = 0)
    const double pq0 = 1.0 / (1.0 + std::exp(1.0));
    CHECK(pmf[1 * 2 + 0] == doctest::Approx(pi0 * (1 - pq0)).epsilon(1e-12));
    CHECK(pmf[1 * 2 + 1] == doctest::Approx(pi0 * pq0).epsilon(1e-12));
    CHECK(pmf[0 * 2 + 0] == doctest::Approx((1 - pi0) * (1 - pq0)).epsilon(1e-12));
    double sum = 0.0;
    for (double p : pmf) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("posterior pmf and moments match direct enumeration") {
    const Constellation c = Constellation::make(16);
    FrameRng rng(71, 0);
    LlrBlock la(4);
    for (auto& v : la) v = rng.gauss();
    const cplx d_e{0.3, -0.6};
    const double v_e = 0.5;

    const std::vector<double> pmf = posterior_pmf(c, d_e, v_e, la);
    const std::vector<double> pri = prior_pmf(c, la);
    const int m = c.pam_levels();
    double norm = 0.0;
    std::vector<double> ref(pmf.size());
    for (int gi = 0; gi < m; ++gi)
        for (int gq = 0; gq < m; ++gq) {
            const cplx pt{c.levels()[gi], c.levels()[gq]};
            ref[gi * m + gq] = pri[gi * m + gq] * std::exp(-std::norm(pt - d_e) / v_e);
            norm += ref[gi * m + gq];
        }
    cplx mean{0, 0};
    double second = 0.0;
    for (int i = 0; i < m * m; ++i) {
        ref[i] /= norm;
        CHECK(pmf[i] == doctest::Approx(ref[i]).epsilon(1e-11));
        const cplx pt{c.levels()[i / m], c.levels()[i % m]};
        mean += ref[i] * pt;
        second += ref[i] * std::norm(pt);
    }
    const SymbolMoments mom = pmf_moments(c, pmf);
    CHECK(std::abs(mom.mean - mean) < 1e-12);
    CHECK(mom.var == doctest::Approx(second - std::norm(mean)).epsilon(1e-10));
}

TEST_CASE("gaussian division") {
    const EpDivideResult r = ep_divide(cplx{0.4, 0.2}, 0.25, cplx{0.1, -0.1}, 0.75,
                                       cplx{9, 9}, 9.0);
    CHECK_FALSE(r.fell_back);
    // 1/v = 1/0.25 - 1/0.75; mean = v*(mu/gb - de/ve)
    const double v = 1.0 / (1.0 / 0.25 - 1.0 / 0.75);
    CHECK(r.var == doctest::Approx(v).epsilon(1e-12));
    const cplx want = v * (cplx{0.4, 0.2} / 0.25 - cplx{0.1, -0.1} / 0.75);
    CHECK(std::abs(r.mean - want) < 1e-12);

    const EpDivideResult fb = ep_divide(cplx{0.4, 0.2}, 0.8, cplx{0.1, -0.1}, 0.75,
                                        cplx{9, 9}, 9.0);
    CHECK(fb.fell_back);
    CHECK(fb.var == 9.0);
    CHECK(std::abs(fb.mean - cplx{9, 9}) < 1e-15);

    // A vanishing posterior variance floors the result at v_min.
    const EpDivideResult fl = ep_divide(cplx{0, 0}, 1e-15, cplx{0, 0}, 0.75,
                                        cplx{1, 1}, 1.0);
    CHECK_FALSE(fl.fell_back);
    CHECK(fl.var == doctest::Approx(1e-10));
}

TEST_CASE("one-tap equalizer matches the dense filter") {
    const std::size_t n = 16;
    const Fft fft(n);
    const ComplexBlock y = random_block(n, 81);
    const ComplexBlock lambda = random_block(n, 82);
    const ComplexBlock d_a = random_block(n, 83, 0.4);
    const double v_a = 0.6, sigma2 = 0.2;

    for (PrecoderKind kind :
         {PrecoderKind::Swh, PrecoderKind::Sdft, PrecoderKind::Dft}) {
        std::vector<ComplexBlock> g(n, ComplexBlock(n));
        for (std::size_t col = 0; col < n; ++col) {
            ComplexBlock e(n, cplx{0, 0});
            e[col] = 1.0;
            if (kind == PrecoderKind::Swh)
                fwht(e);
            else
                fft.forward(e);
            for (std::size_t k = 0; k < n; ++k) g[k][col] = lambda[k] * e[k];
        }
        ComplexBlock d_ref;
        std::vector<double> v_ref;
        dense_lmmse(g, y, lambda, d_a, v_a, sigma2, d_ref, v_ref);

        const FdLmmseResult got = fd_lmmse(kind, &fft, y, lambda, d_a, v_a, sigma2);
        REQUIRE(got.d_e.size() == n);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(got.d_e[i] - d_ref[i]) < 1e-9);
            CHECK(std::fabs(got.v_e - v_ref[i]) < 1e-9);
        }
        CHECK(got.v_e > 0.0);
    }
}

TEST_CASE("equalizer transform accounting") {
    const std::size_t n = 8;
    const Fft fft(n);
    const ComplexBlock y = random_block(n, 84);
    const ComplexBlock lambda = random_block(n, 85);
    const ComplexBlock d_a(n, cplx{0, 0});

    OpCounter swh, dft;
    fd_lmmse(PrecoderKind::Swh, nullptr, y, lambda, d_a, 1.0, 0.5, &swh);
    fd_lmmse(PrecoderKind::Dft, &fft, y, lambda, d_a, 1.0, 0.5, &dft);
    CHECK(swh.adds == 2 * 2 * n * 3);
    CHECK(swh.mults == 0);
    CHECK(dft.adds == 2 * 2 * n * 3);
    CHECK(dft.mults == 2 * 2 * n * 3);
}

TEST_CASE("demapper extrinsic llrs") {
    const Constellation c = Constellation::make(4);
    // Posterior weights fully favor the (+,-) point; priors are subtracted.
    const std::vector<double> wi{0.25, 0.75}, wq{0.9, 0.1};
    const LlrBlock la{0.4, -0.2};
    const LlrBlock le = dem_extrinsic_llrs(c, wi, wq, la);
    REQUIRE(le.size() == 2);
    CHECK(le[0] == doctest::Approx(std::log(0.75 / 0.25) - 0.4).epsilon(1e-12));
    CHECK(le[1] == doctest::Approx(std::log(0.1 / 0.9) + 0.2).epsilon(1e-12));
}

TEST_CASE("full-size grouped equalizer equals the dense-map equalizer bitwise") {
    const std::size_t n = 32;
    const Constellation c = Constellation::make(4);
    const ChannelState st = make_channel_state(proakis_c(), n, 0.4);
    const ComplexBlock y = random_block(n, 86);
    FrameRng rng(87, 0);
    LlrBlock la(n * 2);
    for (auto& v : la) v = rng.gauss();
    const EpSchedule sched = EpSchedule::defaults(4);

    const PrecoderSpec sdft = PrecoderSpec::make(PrecoderKind::Sdft, n, n);
    const PrecoderSpec dft = PrecoderSpec::make(PrecoderKind::Dft, n, n);
    const LlrBlock a = detect_frame_epic(EpicVariant::Epic, sdft, st, y, la, c, sched, 0);
    const LlrBlock b = detect_frame_epic(EpicVariant::Epic, dft, st, y, la, c, sched, 0);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("detection is deterministic and variant sensitive") {
    const std::size_t n = 16;
    const Constellation c = Constellation::make(16);
    const ChannelState st = make_channel_state(proakis_c(), n, 0.3);
    const PrecoderSpec spec = PrecoderSpec::make(PrecoderKind::Swh, n, 8);
    const ComplexBlock y = random_block(n, 88);
    FrameRng rng(89, 0);
    LlrBlock la(n * 4);
    for (auto& v : la) v = 0.5 * rng.gauss();
    const EpSchedule sched = EpSchedule::defaults(16);

    const LlrBlock a = detect_frame_epic(EpicVariant::Epic, spec, st, y, la, c, sched, 1);
    const LlrBlock b = detect_frame_epic(EpicVariant::Epic, spec, st, y, la, c, sched, 1);
    CHECK(a == b);

    const LlrBlock v = detect_frame_epic(EpicVariant::Vamp, spec, st, y, la, c, sched, 1);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) differs |= a[i] != v[i];
    CHECK(differs);

    for (double l : a) CHECK(std::fabs(l) <= kLlrClip);
}

TEST_CASE("grouped variance replacement never increases the total error") {
    FrameRng rng(90, 0);
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t groups = 1u << rng.below(4);
        const std::size_t per = 1u << rng.below(3);
        const std::size_t n = groups * per;
        std::vector<double> v(n);
        for (auto& x : v) x = rng.u01() * (1.0 + rng.u01());

        double global = 0.0;
        for (double x : v) global += x;
        global /= n;
        double mse = 0.0, mse_s = 0.0;
        for (std::size_t p = 0; p < groups; ++p) {
            std::vector<double> grp;
            for (std::size_t i = p; i < n; i += groups) grp.push_back(v[i]);
            const double gm = average_variance(grp);
            for (double x : grp) {
                mse_s += (x - gm) * (x - gm);
                mse += (x - global) * (x - global);
            }
        }
        REQUIRE(mse_s <= mse + 1e-12);
    }
}
