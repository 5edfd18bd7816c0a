#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fdlink/harness/complexity.hpp"
#include "fdlink/harness/config.hpp"
#include "fdlink/harness/exit_chart.hpp"
#include "fdlink/harness/simulate.hpp"
#include "fdlink/kernels.hpp"
#include "fdlink/rng.hpp"

using namespace fdlink;

namespace {

LinkConfig small_config() {
    LinkConfig cfg;
    cfg.n = 16;
    cfg.q = 4;
    cfg.j = 4;
    cfg.precoder = PrecoderKind::Swh;
    cfg.detector = DetectorKind::SwhLog;
    cfg.turbo_iters = 3;
    cfg.ebn0_db = {7.0};
    cfg.seed = 99;
    cfg.min_frame_errors = 8;
    cfg.max_frames = 120;
    return cfg;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("config parsing") {
    std::stringstream ss(
        "# comment\n"
        "n = 64\n"
        "q = 8\n"
        "j = 16\n"
        "precoder = sdft\n"
        "detector = epic   # trailing comment\n"
        "turbo_iters = 5\n"
        "self_iters = 3\n"
        "beta_scale = 0.9\n"
        "beta_decay = 0.8\n"
        "ebn0_db = 4, 4.5, 5\n"
        "seed = 7\n"
        "min_frame_errors = 50\n"
        "max_frames = 1000\n"
        "threads = 2\n");
    const LinkConfig cfg = parse_config(ss);
    CHECK(cfg.n == 64);
    CHECK(cfg.q == 8);
    CHECK(cfg.j == 16);
    CHECK(cfg.precoder == PrecoderKind::Sdft);
    CHECK(cfg.detector == DetectorKind::Epic);
    CHECK(cfg.turbo_iters == 5);
    CHECK(cfg.self_iters == 3);
    CHECK(cfg.beta_scale == doctest::Approx(0.9));
    REQUIRE(cfg.ebn0_db.size() == 3);
    CHECK(cfg.ebn0_db[1] == doctest::Approx(4.5));
    CHECK(cfg.seed == 7);
    CHECK(cfg.threads == 2);
}

TEST_CASE("config rejection") {
    const auto parse = [](const std::string& text) {
        std::stringstream ss(text);
        return parse_config(ss);
    };
    CHECK_THROWS_WITH_AS(parse("bogus = 1\n"), doctest::Contains("unknown key"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse("n = twelve\n"), doctest::Contains("line 1"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse("n = 64\nq = oops\n"), doctest::Contains("line 2"),
                         std::invalid_argument);
    CHECK_THROWS_AS(parse("n = 12\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("j = 32\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("q = 64\nn = 16\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("precoder = dft\ndetector = swh-log\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse("detector = turbo\n"), std::invalid_argument);
}

TEST_CASE("noise variance pins") {
    LinkConfig cfg;
    cfg.j = 4;
    CHECK(cfg.sigma2_for(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    cfg.j = 16;
    CHECK(cfg.sigma2_for(10.0) == doctest::Approx(0.05).epsilon(1e-14));
}

TEST_CASE("mutual information estimator pins") {
    const std::size_t n = 5000;
    CHECK(bitwise_mutual_information(LlrBlock(n, 0.0), BitVec(n, 0)) ==
          doctest::Approx(0.0).epsilon(1e-12));

    BitVec bits(n);
    LlrBlock strong(n);
    FrameRng rng(41, 0);
    for (std::size_t i = 0; i < n; ++i) {
        bits[i] = rng.bit();
        strong[i] = bits[i] ? -50.0 : 50.0;
    }
    CHECK(bitwise_mutual_information(strong, bits) == doctest::Approx(1.0).epsilon(1e-9));

    // Consistent Gaussian LLRs should land on the closed-form curve.
    const double sigma = 2.0;
    LlrBlock la(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double sgn = bits[i] ? -1.0 : 1.0;
        la[i] = sgn * (sigma * sigma / 2.0) + sigma * rng.gauss();
    }
    CHECK(bitwise_mutual_information(la, bits) ==
          doctest::Approx(j_function(sigma)).epsilon(0.05));
}

TEST_CASE("j function and inverse") {
    CHECK(j_function(1e-6) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(j_function(40.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(j_function(2.0) > j_function(1.0));
    for (double s : {0.5, 1.0, 2.0, 4.0})
        CHECK(j_inverse(j_function(s)) == doctest::Approx(s).epsilon(1e-3));
}

TEST_CASE("link runtime shapes and frame synthesis") {
    const LinkConfig cfg = small_config();
    const LinkRuntime rt(cfg);
    CHECK(rt.coded_bits() == 32);
    CHECK(rt.info_bits() == 14);
    CHECK(rt.lambda().size() == 16);

    const FrameData fd = rt.make_frame(cfg.sigma2_for(7.0), 3);
    CHECK(fd.info.size() == 14);
    CHECK(fd.coded.size() == 32);
    CHECK(fd.coded_perm.size() == 32);
    CHECK(fd.y.size() == 16);
    CHECK(fd.perm.size() == 32);

    const FrameData fd2 = rt.make_frame(cfg.sigma2_for(7.0), 3);
    CHECK(fd.info == fd2.info);
    CHECK(fd.perm == fd2.perm);
    CHECK(std::equal(fd.y.begin(), fd.y.end(), fd2.y.begin()));
}

TEST_CASE("monte carlo is deterministic and thread count independent") {
    LinkConfig cfg = small_config();
    const LinkRuntime rt(cfg);
    const FerRecord a = run_fer_point(rt, 7.0);
    const FerRecord b = run_fer_point(rt, 7.0);
    CHECK(a.frames == b.frames);
    CHECK(a.frame_errors == b.frame_errors);
    CHECK(a.bit_errors == b.bit_errors);
    CHECK(a.mean_turbo == doctest::Approx(b.mean_turbo));

    cfg.threads = 3;
    const LinkRuntime rt3(cfg);
    const FerRecord c = run_fer_point(rt3, 7.0);
    CHECK(a.frames == c.frames);
    CHECK(a.frame_errors == c.frame_errors);
    CHECK(a.bit_errors == c.bit_errors);

    CHECK(a.frames >= std::min<std::size_t>(cfg.max_frames, 1));
    CHECK(a.mean_turbo <= cfg.turbo_iters + 1);
}

TEST_CASE("kernel backend does not change simulation results") {
    if (!kernels::avx2_supported()) return;
    struct Guard {
        kernels::Backend prev = kernels::active_backend();
        ~Guard() { kernels::set_backend(prev); }
    } guard;
    LinkConfig cfg = small_config();
    cfg.max_frames = 40;
    cfg.detector = DetectorKind::Epic;
    const LinkRuntime rt(cfg);
    kernels::set_backend(kernels::Backend::Scalar);
    const FerRecord a = run_fer_point(rt, 6.0);
    kernels::set_backend(kernels::Backend::Avx2);
    const FerRecord b = run_fer_point(rt, 6.0);
    CHECK(a.frame_errors == b.frame_errors);
    CHECK(a.bit_errors == b.bit_errors);
}

TEST_CASE("oversized candidate sets are rejected at construction") {
    LinkConfig cfg;
    cfg.n = 256;
    cfg.q = 8;
    cfg.j = 64;
    cfg.detector = DetectorKind::SwhLog;
    cfg.ebn0_db = {10.0};
    CHECK_THROWS_AS(LinkRuntime{cfg}, CapabilityError);
}

TEST_CASE("analytic operation counts: representative rows") {
    // Enumeration detector, group size 4 and 8.
    CHECK(analytic_ops(DetectorKind::SwhLog, PrecoderKind::Swh, 4, 4, 4, 0).adds == 138);
    CHECK(analytic_ops(DetectorKind::SwhLog, PrecoderKind::Swh, 4, 4, 4, 0).mults == 30);
    CHECK(analytic_ops(DetectorKind::SwhMaxLog, PrecoderKind::Swh, 4, 4, 4, 0).adds == 74);
    CHECK(analytic_ops(DetectorKind::SwhMaxLog, PrecoderKind::Swh, 4, 4, 4, 0).mults == 20);
    CHECK(analytic_ops(DetectorKind::SwhLog, PrecoderKind::Swh, 8, 8, 16, 0).adds == 917554);
    CHECK(analytic_ops(DetectorKind::SwhMaxLog, PrecoderKind::Swh, 8, 8, 64, 0).adds ==
          134217842);

    // EP equalizer at n = 256 with the default self-iteration counts.
    CHECK(analytic_ops(DetectorKind::Epic, PrecoderKind::Swh, 256, 8, 4, 2).adds == 144);
    CHECK(analytic_ops(DetectorKind::Epic, PrecoderKind::Swh, 256, 8, 4, 2).mults == 129);
    CHECK(analytic_ops(DetectorKind::Epic, PrecoderKind::Sdft, 256, 8, 4, 2).mults == 165);
    CHECK(analytic_ops(DetectorKind::Epic, PrecoderKind::Dft, 256, 256, 4, 2).adds == 204);
    CHECK(analytic_ops(DetectorKind::Epic, PrecoderKind::Dft, 256, 256, 4, 2).mults == 225);
    CHECK(analytic_ops(DetectorKind::Epic, PrecoderKind::Dft, 256, 256, 64, 6).mults == 3885);

    CHECK_THROWS_AS(analytic_ops(DetectorKind::SwhExact, PrecoderKind::Swh, 4, 4, 4, 0),
                    std::invalid_argument);
}

TEST_CASE("measured counts equal the closed forms") {
    for (const auto& [det, prec, n, q, j, ns] :
         {std::tuple{DetectorKind::SwhLog, PrecoderKind::Swh, std::size_t{4},
                     std::size_t{4}, 4, 0},
          std::tuple{DetectorKind::SwhMaxLog, PrecoderKind::Swh, std::size_t{8},
                     std::size_t{8}, 4, 0},
          std::tuple{DetectorKind::Epic, PrecoderKind::Swh, std::size_t{64},
                     std::size_t{8}, 4, 2},
          std::tuple{DetectorKind::Epic, PrecoderKind::Sdft, std::size_t{64},
                     std::size_t{8}, 16, 5},
          std::tuple{DetectorKind::Epic, PrecoderKind::Dft, std::size_t{64},
                     std::size_t{64}, 4, 2}}) {
        const ComplexityRow row = complexity_row(det, prec, n, q, j, ns, true);
        REQUIRE(row.measured_ok);
        CHECK(row.measured.adds == row.analytic.adds);
        CHECK(row.measured.mults == row.analytic.mults);
    }

    const ComplexityRow over =
        complexity_row(DetectorKind::SwhLog, PrecoderKind::Swh, 8, 8, 64, 0, true);
    CHECK_FALSE(over.measured_ok);
    CHECK(over.analytic.adds == 335544434);
}

TEST_CASE("csv schemas") {
    std::stringstream fer;
    write_fer_csv(fer, {});
    CHECK(first_line(fer.str()) ==
          "scheme,detector,q,j,ebn0_db,frames,frame_errors,fer,ber,mean_ti");

    std::stringstream cx;
    write_complexity_csv(cx, {});
    CHECK(first_line(cx.str()) ==
          "scheme,detector,q,j,ns,adds_analytic,mults_analytic,adds_measured,"
          "mults_measured");

    std::stringstream ex;
    write_exit_csv(ex, {});
    CHECK(first_line(ex.str()) == "ti,ia_det,ie_det,ia_dec,ie_dec");

    std::stringstream dc;
    write_decoder_curve_csv(dc, {});
    CHECK(first_line(dc.str()) == "ia,ie");
}

TEST_CASE("transfer trajectory bookkeeping") {
    LinkConfig cfg = small_config();
    cfg.turbo_iters = 2;
    const LinkRuntime rt(cfg);
    const auto traj = exit_trajectory(rt, 8.0, 10);
    REQUIRE(traj.size() == 3);
    for (const auto& p : traj) {
        CHECK(p.ia_det >= 0.0);
        CHECK(p.ie_det <= 1.0);
        CHECK(p.ia_dec >= 0.0);
        CHECK(p.ie_dec <= 1.0);
    }
    CHECK(traj[0].ia_det == doctest::Approx(0.0).epsilon(1e-12));

    const auto curve = decoder_exit_curve(120, {0.1, 0.95}, 40, 5);
    REQUIRE(curve.size() == 2);
    CHECK(curve[0].ia == doctest::Approx(0.1));
    CHECK(curve[1].ie > curve[0].ie);
}
