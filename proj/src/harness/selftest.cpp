#include "fdlink/harness/selftest.hpp"

#include <cmath>
#include <complex>
#include <ostream>
#include <vector>

#include "fdlink/channel.hpp"
#include "fdlink/constellation.hpp"
#include "fdlink/epic_detector.hpp"
#include "fdlink/fec.hpp"
#include "fdlink/map_detector.hpp"
#include "fdlink/rng.hpp"
#include "fdlink/transforms.hpp"

namespace fdlink {

namespace {

double lse(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b <= -1e290) return a;
    return a + std::log1p(std::exp(b - a));
}

bool check_transforms() {
    ComplexBlock two{cplx{1, 0}, cplx{1, 0}};
    fwht(two);
    if (std::abs(two[0] - std::sqrt(2.0)) > 1e-12 || std::abs(two[1]) > 1e-12)
        return false;

    FrameRng rng(7, 0);
    ComplexBlock v(8);
    for (auto& x : v) x = {rng.gauss(), rng.gauss()};
    ComplexBlock w = v;
    fwht(w);
    fwht(w);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (std::abs(w[i] - v[i]) > 1e-12) return false;

    const Fft fft(8);
    ComplexBlock imp(8, cplx{0, 0});
    imp[0] = 1.0;
    fft.forward(imp);
    for (const auto& x : imp)
        if (std::abs(x - cplx{1.0 / std::sqrt(8.0), 0.0}) > 1e-12) return false;

    ComplexBlock r = v;
    fft.forward(r);
    fft.inverse(r);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (std::abs(r[i] - v[i]) > 1e-12) return false;
    return true;
}

bool check_constellation() {
    const Constellation qpsk = Constellation::make(4);
    if (std::fabs(qpsk.kappa() - 1.0 / std::sqrt(2.0)) > 1e-15) return false;
    const uint8_t zero = 0;
    const cplx s = qpsk.qam_map(&zero, &zero);
    if (std::abs(s - cplx{qpsk.kappa(), qpsk.kappa()}) > 1e-15) return false;
    for (int j : {4, 16, 64}) {
        const Constellation c = Constellation::make(j);
        double e = 0.0;
        for (double l : c.levels()) e += l * l;
        if (std::fabs(e / c.pam_levels() - 0.5) > 1e-12) return false;
    }
    return true;
}

bool check_cost_identity() {
    const Constellation c = Constellation::make(4);
    const auto db = AmplitudeIndexDb::build(2, 4);
    FrameRng rng(11, 0);
    const double sigma2 = 0.3;
    std::vector<double> y(2), gains(2), geff(2);
    for (int i = 0; i < 2; ++i) {
        y[i] = rng.gauss();
        gains[i] = 0.5 + rng.u01();
        geff[i] = gains[i] * c.kappa();
    }
    const CTable ct = build_c_table(y, geff, db.s_levels(), -1.0 / sigma2);
    for (std::size_t z = 0; z < db.rows(); ++z) {
        ComplexBlock d(2);
        for (std::size_t q = 0; q < 2; ++q)
            d[q] = c.levels()[db.level_index(q, z)];
        fwht(d);
        double ref = 0.0, got = 0.0;
        for (std::size_t q = 0; q < 2; ++q) {
            const double r = y[q] - gains[q] * d[q].real();
            ref -= r * r / sigma2;
            got += ct.row(q)[db.s_index(q, z)];
        }
        if (std::fabs(ref - got) > 1e-10) return false;
    }
    return true;
}

bool check_lmmse_dense() {
    const std::size_t n = 8;
    const Fft fft(n);
    FrameRng rng(3, 1);
    ComplexBlock y(n), lambda(n), d_a(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = {rng.gauss(), rng.gauss()};
        lambda[i] = {rng.gauss(), rng.gauss()};
        d_a[i] = {0.3 * rng.gauss(), 0.3 * rng.gauss()};
    }
    const double v_a = 0.4, sigma2 = 0.25;
    const FdLmmseResult fast =
        fd_lmmse(PrecoderKind::Sdft, &fft, y, lambda, d_a, v_a, sigma2);

    // Dense reference: G = diag(lambda) F, per-symbol matched-filter gain.
    std::vector<ComplexBlock> g(n, ComplexBlock(n));
    for (std::size_t col = 0; col < n; ++col) {
        ComplexBlock e(n, cplx{0, 0});
        e[col] = 1.0;
        fft.forward(e);
        for (std::size_t k = 0; k < n; ++k) g[k][col] = lambda[k] * e[k];
    }
    ComplexBlock r(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{0, 0};
        for (std::size_t col = 0; col < n; ++col) acc += g[k][col] * d_a[col];
        r[k] = y[k] - acc;
    }
    for (std::size_t col = 0; col < n; ++col) {
        double lam = 0.0;
        cplx corr{0, 0};
        for (std::size_t k = 0; k < n; ++k) {
            const double den = std::norm(lambda[k]) * v_a + sigma2;
            lam += std::norm(g[k][col]) / den;
            corr += std::conj(g[k][col]) * r[k] / den;
        }
        const cplx ref = d_a[col] + corr / lam;
        if (std::abs(ref - fast.d_e[col]) > 1e-9) return false;
        if (std::fabs((1.0 / lam - v_a) - fast.v_e) > 1e-9) return false;
    }
    return true;
}

bool check_bcjr_exhaustive() {
    const std::size_t nb = 6;
    const RscCode rsc;
    const BcjrDecoder dec(MaxStar::Exact);
    FrameRng rng(5, 2);
    const std::size_t nc = RscCode::coded_length(nb);
    LlrBlock in(nc);
    for (auto& v : in) v = 2.0 * rng.gauss();
    const BcjrResult got = dec.decode(in);
    for (std::size_t pos = 0; pos < nc; ++pos) {
        double l0 = -1e300, l1 = -1e300;
        for (std::size_t word = 0; word < (1u << nb); ++word) {
            BitVec info(nb);
            for (std::size_t i = 0; i < nb; ++i) info[i] = (word >> i) & 1u;
            const BitVec coded = rsc.encode(info);
            double lw = 0.0;
            for (std::size_t i = 0; i < nc; ++i)
                if (coded[i]) lw -= in[i];
            (coded[pos] ? l1 : l0) = lse(coded[pos] ? l1 : l0, lw);
        }
        if (std::fabs((l0 - l1) - got.app_coded[pos]) > 1e-9) return false;
    }
    return true;
}

bool check_grouped_averaging() {
    FrameRng rng(13, 4);
    const std::size_t n = 64, groups = 8;
    std::vector<double> v(n);
    for (auto& x : v) x = rng.u01();
    double global = 0.0;
    for (double x : v) global += x;
    global /= n;
    double mse = 0.0, mse_s = 0.0;
    for (double x : v) mse += (x - global) * (x - global);
    for (std::size_t p = 0; p < groups; ++p) {
        double gm = 0.0;
        for (std::size_t i = p; i < n; i += groups) gm += v[i];
        gm /= (n / groups);
        for (std::size_t i = p; i < n; i += groups) mse_s += (v[i] - gm) * (v[i] - gm);
    }
    return mse_s <= mse + 1e-12;
}

}  // namespace

int run_selftest(std::ostream& os) {
    int failures = 0;
    const auto check = [&](const char* name, bool ok) {
        os << (ok ? "ok   " : "FAIL ") << name << '\n';
        if (!ok) ++failures;
    };
    check("transform identities", check_transforms());
    check("constellation normalization", check_constellation());
    check("detector cost-table identity", check_cost_identity());
    check("one-tap equalizer vs dense reference", check_lmmse_dense());
    check("decoder vs exhaustive marginals", check_bcjr_exhaustive());
    check("grouped variance averaging inequality", check_grouped_averaging());
    os << (failures ? "selftest: FAILED\n" : "selftest: all checks passed\n");
    return failures ? 1 : 0;
}

}  // namespace fdlink
