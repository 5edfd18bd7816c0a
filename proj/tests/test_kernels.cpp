#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "fdlink/channel.hpp"
#include "fdlink/constellation.hpp"
#include "fdlink/epic_detector.hpp"
#include "fdlink/kernels.hpp"
#include "fdlink/map_detector.hpp"
#include "fdlink/rng.hpp"
#include "fdlink/transforms.hpp"

using namespace fdlink;

namespace {

struct BackendGuard {
    kernels::Backend prev = kernels::active_backend();
    ~BackendGuard() { kernels::set_backend(prev); }
};

uint64_t bits_of(double x) { return std::bit_cast<uint64_t>(x); }

bool same_bits(const ComplexBlock& a, const ComplexBlock& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (bits_of(a[i].real()) != bits_of(b[i].real()) ||
            bits_of(a[i].imag()) != bits_of(b[i].imag()))
            return false;
    return true;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (bits_of(a[i]) != bits_of(b[i])) return false;
    return true;
}

std::vector<double> exp_probe_points() {
    std::vector<double> xs = {0.0,   1.0,    -1.0,  0.5 * std::log(2.0),
                              -707.9, -708.5, -750.0, 5.0,
                              -1e-9, 2.3e-13};
    FrameRng rng(77, 0);
    for (int i = 0; i < 2000; ++i) xs.push_back(-700.0 + 705.0 * rng.u01());
    return xs;
}

}  // namespace

TEST_CASE("portable exp tracks the library exp") {
    const auto& api = kernels::scalar_api();
    for (double x : exp_probe_points()) {
        const double got = api.fexp(x);
        const double want = std::exp(x);
        if (want == 0.0 || x < -708.0) {
            CHECK(got >= 0.0);
            CHECK(got <= want * (1 + 1e-13) + 1e-300);
        } else {
            CHECK(got == doctest::Approx(want).epsilon(1e-14));
        }
    }
    CHECK(api.fexp(0.0) == 1.0);
    CHECK(api.fexp(-750.0) == 0.0);
}

TEST_CASE("backend selection") {
    BackendGuard guard;
    kernels::set_backend(kernels::Backend::Scalar);
    CHECK(kernels::active_backend() == kernels::Backend::Scalar);
    CHECK(std::string(kernels::api().name) == "scalar");
    if (!kernels::avx2_supported()) {
        CHECK(kernels::avx2_api() == nullptr);
        CHECK_THROWS_AS(kernels::set_backend(kernels::Backend::Avx2),
                        std::invalid_argument);
    } else {
        kernels::set_backend(kernels::Backend::Avx2);
        CHECK(kernels::active_backend() == kernels::Backend::Avx2);
    }
}

TEST_CASE("vector exp is bit-identical to scalar exp") {
    if (!kernels::avx2_supported()) return;
    const auto& sc = kernels::scalar_api();
    const auto& vx = *kernels::avx2_api();
    for (double x : exp_probe_points()) CHECK(bits_of(sc.fexp(x)) == bits_of(vx.fexp(x)));
}

TEST_CASE("vector butterflies are bit-identical to scalar") {
    if (!kernels::avx2_supported()) return;
    const auto& sc = kernels::scalar_api();
    const auto& vx = *kernels::avx2_api();
    for (std::size_t n : {2u, 4u, 8u, 32u, 256u}) {
        FrameRng rng(101, n);
        ComplexBlock a(n);
        for (auto& v : a) v = {rng.gauss(), rng.gauss()};
        ComplexBlock b = a;
        sc.fwht_stages(a.data(), n);
        vx.fwht_stages(b.data(), n);
        CHECK(same_bits(a, b));
    }

    BackendGuard guard;
    for (std::size_t n : {4u, 16u, 128u}) {
        FrameRng rng(102, n);
        ComplexBlock x(n);
        for (auto& v : x) v = {rng.gauss(), rng.gauss()};
        const Fft fft(n);
        ComplexBlock a = x, b = x;
        kernels::set_backend(kernels::Backend::Scalar);
        fft.forward(a);
        kernels::set_backend(kernels::Backend::Avx2);
        fft.forward(b);
        CHECK(same_bits(a, b));
    }
}

TEST_CASE("vector cost table and scans are bit-identical to scalar") {
    if (!kernels::avx2_supported()) return;
    BackendGuard guard;
    const Constellation c = Constellation::make(16);
    const auto db = AmplitudeIndexDb::build(4, 16);
    FrameRng rng(103, 0);
    std::vector<double> y(4), gains(4);
    for (int i = 0; i < 4; ++i) {
        y[i] = rng.gauss();
        gains[i] = 0.4 + rng.u01();
    }
    LlrBlock la(4 * c.bits_per_pam());
    for (auto& v : la) v = 1.5 * rng.gauss();

    for (bool maxlog : {false, true}) {
        kernels::set_backend(kernels::Backend::Scalar);
        const LlrBlock a = maxlog
            ? max_log_map_extrinsic(db, c, y, gains, 0.3, la)
            : log_map_extrinsic(db, c, y, gains, 0.3, la);
        kernels::set_backend(kernels::Backend::Avx2);
        const LlrBlock b = maxlog
            ? max_log_map_extrinsic(db, c, y, gains, 0.3, la)
            : log_map_extrinsic(db, c, y, gains, 0.3, la);
        CHECK(same_bits(a, b));
    }
}

TEST_CASE("vector rail posterior is bit-identical to scalar") {
    if (!kernels::avx2_supported()) return;
    const Constellation c = Constellation::make(64);
    FrameRng rng(104, 0);
    std::vector<double> prior(8);
    for (auto& v : prior) v = rng.gauss();
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> wa(8), wb(8);
        kernels::RailArgs a{rng.gauss(), 1.0 / (0.05 + rng.u01()), c.levels().data(),
                            prior.data(), 8, wa.data()};
        kernels::RailArgs b = a;
        b.w = wb.data();
        kernels::scalar_api().rail_posterior(a);
        kernels::avx2_api()->rail_posterior(b);
        CHECK(same_bits(wa, wb));
        CHECK(bits_of(a.s0) == bits_of(b.s0));
        CHECK(bits_of(a.s1) == bits_of(b.s1));
        CHECK(bits_of(a.s2) == bits_of(b.s2));
    }
}

TEST_CASE("full equalizer pass is backend independent") {
    if (!kernels::avx2_supported()) return;
    BackendGuard guard;
    const std::size_t n = 64;
    const Constellation c = Constellation::make(16);
    const PrecoderSpec spec = PrecoderSpec::make(PrecoderKind::Sdft, n, 8);
    const ChannelState st = make_channel_state(proakis_c(), n, 0.2);
    FrameRng rng(105, 0);
    ComplexBlock y(n);
    for (auto& v : y) v = {rng.gauss(), rng.gauss()};
    LlrBlock la(n * c.bits_per_symbol());
    for (auto& v : la) v = rng.gauss();
    const EpSchedule sched = EpSchedule::defaults(16);

    kernels::set_backend(kernels::Backend::Scalar);
    const LlrBlock a = detect_frame_epic(EpicVariant::Epic, spec, st, y, la, c, sched, 1);
    kernels::set_backend(kernels::Backend::Avx2);
    const LlrBlock b = detect_frame_epic(EpicVariant::Epic, spec, st, y, la, c, sched, 1);
    CHECK(same_bits(a, b));
}
