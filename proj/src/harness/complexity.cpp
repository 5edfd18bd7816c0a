#include "fdlink/harness/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "fdlink/harness/simulate.hpp"

namespace fdlink {

namespace {

uint64_t ipow(uint64_t base, uint64_t e) {
    uint64_t r = 1;
    while (e--) r *= base;
    return r;
}

uint64_t lg(std::size_t v) { return ilog2(v); }

}  // namespace

OpFormula analytic_ops(DetectorKind det, PrecoderKind prec, std::size_t n,
                       std::size_t q, int j, int n_self) {
    const auto ju = static_cast<uint64_t>(j);
    const auto m = static_cast<uint64_t>(std::lround(std::sqrt(static_cast<double>(j))));
    const uint64_t log2j = lg(j);
    switch (det) {
        case DetectorKind::SwhLog: {
            const uint64_t w = q * (m - 1) + 1;
            const uint64_t z = ipow(m, q);
            return {(3 * log2j + 2) * z + 2 * w, 6 * w};
        }
        case DetectorKind::SwhMaxLog: {
            const uint64_t w = q * (m - 1) + 1;
            const uint64_t z = ipow(m, q);
            return {(log2j + 2) * z + 2 * w, 4 * w};
        }
        case DetectorKind::Epic:
        case DetectorKind::Vamp: {
            const uint64_t si = static_cast<uint64_t>(n_self) + 1;
            const uint64_t tlog = 4 * (prec == PrecoderKind::Dft ? lg(n) : lg(q));
            const uint64_t adds = si * (tlog + log2j + 7 * ju + 6);
            const uint64_t mults =
                si * ((prec == PrecoderKind::Swh ? 0 : tlog) + 8 * ju + 11);
            return {adds, mults};
        }
        case DetectorKind::SwhExact:
            throw std::invalid_argument("analytic_ops: no closed form for the exact flavor");
    }
    throw std::logic_error("unreachable");
}

ComplexityRow complexity_row(DetectorKind det, PrecoderKind prec, std::size_t n,
                             std::size_t q, int j, int n_self, bool measure) {
    ComplexityRow row;
    row.precoder = prec;
    row.detector = det;
    row.q = prec == PrecoderKind::Dft ? n : q;
    row.j = j;
    const bool ep = det == DetectorKind::Epic || det == DetectorKind::Vamp;
    row.n_self = ep ? (n_self >= 0 ? n_self : EpSchedule::defaults(j).n_self) : 0;
    row.analytic = analytic_ops(det, prec, n, row.q, j, row.n_self);
    // The per-symbol enumeration cost does not depend on the number of
    // groups, so the instrumented run uses the smallest block that still
    // carries the channel taps for the enumeration detectors and the full
    // block for the EP equalizer.
    row.n = ep ? n : std::max<std::size_t>(row.q, 8);
    if (!measure) return row;

    LinkConfig cfg;
    cfg.n = row.n;
    cfg.q = row.q;
    cfg.j = j;
    cfg.precoder = prec;
    cfg.detector = det;
    cfg.self_iters = row.n_self;
    cfg.ebn0_db = {};
    cfg.seed = 12345;
    try {
        const LinkRuntime rt(cfg);
        const double sigma2 = cfg.sigma2_for(5.0);
        const FrameData fd = rt.make_frame(sigma2, 0);
        OpCounter ops;
        const LlrBlock la(rt.coded_bits(), 0.0);
        rt.detect(fd.y, sigma2, la, 0, &ops);
        if (ops.adds % row.n != 0 || ops.mults % row.n != 0)
            throw std::logic_error("complexity: measured count not divisible per symbol");
        row.measured = {ops.adds / row.n, ops.mults / row.n};
        row.measured_ok = true;
    } catch (const CapabilityError&) {
        row.measured_ok = false;
    }
    return row;
}

std::vector<ComplexityRow> complexity_preset(std::size_t n, bool measure) {
    std::vector<ComplexityRow> rows;
    const int orders[3] = {4, 16, 64};
    for (int j : orders) {
        rows.push_back(complexity_row(DetectorKind::SwhLog, PrecoderKind::Swh, n, 4, j, -1, measure));
        rows.push_back(complexity_row(DetectorKind::SwhLog, PrecoderKind::Swh, n, 8, j, -1, measure));
    }
    for (int j : orders) {
        rows.push_back(complexity_row(DetectorKind::SwhMaxLog, PrecoderKind::Swh, n, 4, j, -1, measure));
        rows.push_back(complexity_row(DetectorKind::SwhMaxLog, PrecoderKind::Swh, n, 8, j, -1, measure));
    }
    for (int j : orders)
        rows.push_back(complexity_row(DetectorKind::Epic, PrecoderKind::Swh, n, 8, j, -1, measure));
    for (int j : orders)
        rows.push_back(complexity_row(DetectorKind::Epic, PrecoderKind::Sdft, n, 8, j, -1, measure));
    for (int j : orders)
        rows.push_back(complexity_row(DetectorKind::Epic, PrecoderKind::Dft, n, n, j, -1, measure));
    return rows;
}

void write_complexity_csv(std::ostream& os, const std::vector<ComplexityRow>& rows) {
    os << "scheme,detector,q,j,ns,adds_analytic,mults_analytic,adds_measured,mults_measured\n";
    for (const ComplexityRow& r : rows) {
        os << to_string(r.precoder) << ',' << to_string(r.detector) << ',' << r.q << ','
           << r.j << ',' << r.n_self << ',' << r.analytic.adds << ',' << r.analytic.mults
           << ',';
        if (r.measured_ok)
            os << r.measured.adds << ',' << r.measured.mults;
        else
            os << ',';
        os << '\n';
    }
}

}  // namespace fdlink
