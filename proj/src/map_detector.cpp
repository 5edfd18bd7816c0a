#include "fdlink/map_detector.hpp"

#include <cmath>
#include <stdexcept>

#include "fdlink/fc_table.hpp"
#include "fdlink/kernels.hpp"
#include "kernels/kernels_impl.hpp"

namespace fdlink {

namespace {

constexpr double kNegInf = -1e300;
constexpr double kDegenerateTone = 1e-12;

}  // namespace

AmplitudeIndexDb AmplitudeIndexDb::build(std::size_t q, int j, bool half_store,
                                         std::size_t max_rows) {
    const Constellation con = Constellation::make(j);
    if (q == 0 || (q & (q - 1)) != 0)
        throw std::invalid_argument("amplitude db: group size must be a power of two");
    const int m = con.pam_levels();
    std::size_t z_count = 1;
    for (std::size_t i = 0; i < q; ++i) {
        z_count *= static_cast<std::size_t>(m);
        if (z_count > max_rows)
            throw CapabilityError("amplitude db: " + std::to_string(m) + "^" +
                                  std::to_string(q) + " rows exceed the budget of " +
                                  std::to_string(max_rows));
    }

    AmplitudeIndexDb db;
    db.q_ = q;
    db.j_ = j;
    db.m_ = m;
    db.bits_per_pam_ = con.bits_per_pam();
    db.z_count_ = z_count;
    db.width_ = q * static_cast<std::size_t>(m - 1) + 1;
    db.half_ = half_store;
    db.stored_ = half_store ? z_count / 2 : z_count;
    for (std::size_t qq = 0; qq < q; ++qq)
        db.msb_mask_ |= 1u << (qq * static_cast<unsigned>(db.bits_per_pam_));

    db.s_levels_.resize(db.width_);
    const double sq = std::sqrt(static_cast<double>(q));
    const int span = static_cast<int>(q) * (m - 1);
    for (std::size_t i = 0; i < db.width_; ++i)
        db.s_levels_[i] = (2.0 * static_cast<double>(i) - span) / sq;

    db.s_idx_.resize(q * db.stored_);
    db.g_idx_.resize(q * db.stored_);
    db.masks_.resize(db.stored_);
    std::vector<int> digits(q), u(q);
    for (std::size_t z = 0; z < db.stored_; ++z) {
        std::size_t rest = z;
        for (std::size_t qq = 0; qq < q; ++qq) {
            digits[qq] = static_cast<int>(rest % m);
            rest /= m;
            u[qq] = 2 * digits[qq] - (m - 1);
        }
        // Unnormalized Walsh-Hadamard butterflies in integer arithmetic.
        for (std::size_t h = 1; h < q; h <<= 1) {
            for (std::size_t k = 0; k < q; k += 2 * h) {
                for (std::size_t i = 0; i < h; ++i) {
                    const int a = u[k + i];
                    const int b = u[k + i + h];
                    u[k + i] = a + b;
                    u[k + i + h] = a - b;
                }
            }
        }
        uint32_t mask = 0;
        for (std::size_t qq = 0; qq < q; ++qq) {
            const int shifted = u[qq] + span;
            if (shifted < 0 || shifted % 2 != 0 ||
                static_cast<std::size_t>(shifted / 2) >= db.width_)
                throw std::logic_error("amplitude db: index out of range");
            db.s_idx_[qq * db.stored_ + z] = shifted / 2;
            db.g_idx_[qq * db.stored_ + z] = digits[qq];
            for (int b = 0; b < db.bits_per_pam_; ++b)
                if (con.label_bit(digits[qq], b))
                    mask |= 1u << (qq * static_cast<unsigned>(db.bits_per_pam_) + b);
        }
        db.masks_[z] = mask;
    }
    return db;
}

int32_t AmplitudeIndexDb::s_index(std::size_t q, std::size_t z) const {
    if (!half_ || z < stored_) return s_idx_[q * stored_ + z];
    return static_cast<int32_t>(width_ - 1) - s_idx_[q * stored_ + (z_count_ - 1 - z)];
}

int32_t AmplitudeIndexDb::level_index(std::size_t q, std::size_t z) const {
    if (!half_ || z < stored_) return g_idx_[q * stored_ + z];
    return (m_ - 1) - g_idx_[q * stored_ + (z_count_ - 1 - z)];
}

uint32_t AmplitudeIndexDb::mask(std::size_t z) const {
    if (!half_ || z < stored_) return masks_[z];
    // Negating every coordinate flips exactly the sign bit of each label.
    return masks_[z_count_ - 1 - z] ^ msb_mask_;
}

PhaseCorrected phase_correct(const GroupView& g) {
    PhaseCorrected pc;
    const std::size_t q = g.y.size();
    pc.y_i.resize(q);
    pc.y_q.resize(q);
    pc.gains.resize(q);
    for (std::size_t i = 0; i < q; ++i) {
        const double a = std::abs(g.lambda[i]);
        if (a < kDegenerateTone)
            throw std::invalid_argument("phase_correct: degenerate channel tone");
        const cplx r = std::conj(g.lambda[i]) * g.y[i] / a;
        pc.y_i[i] = r.real();
        pc.y_q[i] = r.imag();
        pc.gains[i] = a;
    }
    return pc;
}

CTable build_c_table(const std::vector<double>& y_rail,
                     const std::vector<double>& g_eff,
                     const std::vector<double>& s_levels, double coef,
                     OpCounter* ops) {
    const std::size_t q = y_rail.size();
    if (g_eff.size() != q) throw std::invalid_argument("c_table: gain length mismatch");
    CTable ct;
    ct.width = s_levels.size();
    ct.v.resize(q * ct.width);
    if (ops) {
        // Literal arithmetic: one subtraction plus the gain product, the
        // square and (folded into coef) the noise normalization.
        const bool three = coef != -1.0;
        for (std::size_t i = 0; i < q; ++i) {
            double* row = ct.row(i);
            for (std::size_t k = 0; k < ct.width; ++k) {
                const double t = y_rail[i] - g_eff[i] * s_levels[k];
                row[k] = (t * t) * coef;
                ops->add(1);
                ops->mul(three ? 3 : 2);
            }
        }
    } else {
        for (std::size_t i = 0; i < q; ++i)
            kernels::api().ctable_fill(ct.row(i), s_levels.data(), ct.width, y_rail[i],
                                       g_eff[i], coef);
    }
    return ct;
}

namespace {

struct RailPrep {
    std::vector<double> g_eff;
    std::vector<double> ap;  // q rows of m per-level prior log-weights
};

RailPrep prep_rail(const AmplitudeIndexDb& db, const Constellation& c,
                   const std::vector<double>& gains, const LlrBlock& la_rail,
                   double la_scale) {
    const std::size_t q = db.group_size();
    const int m = db.pam_levels();
    const int bp = db.bits_per_pam();
    if (gains.size() != q) throw std::invalid_argument("detector: gain length mismatch");
    if (la_rail.size() != q * static_cast<std::size_t>(bp))
        throw std::invalid_argument("detector: prior length mismatch");
    RailPrep r;
    r.g_eff.resize(q);
    for (std::size_t i = 0; i < q; ++i) r.g_eff[i] = gains[i] * c.kappa();
    r.ap.assign(q * static_cast<std::size_t>(m), 0.0);
    for (std::size_t i = 0; i < q; ++i) {
        for (int g = 0; g < m; ++g) {
            double s = 0.0;
            for (int b = 0; b < bp; ++b)
                if (c.label_bit(g, b)) s -= la_scale * la_rail[i * bp + b];
            r.ap[i * m + g] = s;
        }
    }
    return r;
}

enum class Fold { Max, Lse };

void scan_fast(const AmplitudeIndexDb& db, const CTable& ct, const RailPrep& prep,
               Fold fold, double* acc) {
    kernels::ScanArgs args{};
    args.s_idx = db.s_planes();
    args.g_idx = db.g_planes();
    args.masks = db.masks();
    args.ctab = ct.v.data();
    args.ap = prep.ap.data();
    args.z_count = db.rows();
    args.q = static_cast<int>(db.group_size());
    args.m = db.pam_levels();
    args.bits_per_pam = db.bits_per_pam();
    args.ct_stride = ct.width;
    args.fc = fc_table().data();
    args.fc_scale = fc_table().scale();
    args.acc = acc;
    if (fold == Fold::Max)
        kernels::api().scan_maxlog(args);
    else
        kernels::api().scan_lse(args);
}

/// Half-stored databases cannot expose contiguous planes, and instrumented
/// runs need operation counts; both replay the fast path's arithmetic through
/// the mirroring accessors and the shared fold helpers, so the results stay
/// bit-identical to the kernel scan.  Counting follows the per-bit model of
/// the closed forms: one cost add plus one add per label bit for the metric,
/// then two adds per bucket update when folding with the correction table.
void scan_accessor(const AmplitudeIndexDb& db, const CTable& ct, const RailPrep& prep,
                   Fold fold, double* acc, OpCounter* ops) {
    const std::size_t q = db.group_size();
    const int m = db.pam_levels();
    const int bp = db.bits_per_pam();
    const int positions = static_cast<int>(q) * bp;
    const FcTable& fc = fc_table();
    for (std::size_t z = 0; z < db.rows(); ++z) {
        double t = 0.0;
        for (std::size_t i = 0; i < q; ++i) {
            t += ct.row(i)[db.s_index(i, z)];
            t += prep.ap[i * m + db.level_index(i, z)];
            if (ops) ops->add(1 + static_cast<uint64_t>(bp));
        }
        if (fold == Fold::Max) {
            kernels::detail::fold_max(acc, db.mask(z), positions, t);
        } else {
            kernels::detail::fold_lse(acc, db.mask(z), positions, t, fc.data(),
                                      fc.scale());
            if (ops) ops->add(2 * static_cast<uint64_t>(positions));
        }
    }
}

LlrBlock folded_extrinsic(const AmplitudeIndexDb& db, const Constellation& c,
                          const std::vector<double>& y_rail,
                          const std::vector<double>& gains, double sigma2,
                          const LlrBlock& la_rail, Fold fold, OpCounter* ops) {
    const std::size_t q = db.group_size();
    const int bp = db.bits_per_pam();
    const int positions = static_cast<int>(q) * bp;
    const bool deferred = fold == Fold::Max;  // noise division moved after the fold
    const double inv_sigma2 = 1.0 / sigma2;
    const RailPrep prep = prep_rail(db, c, gains, la_rail, deferred ? sigma2 : 1.0);
    const CTable ct = build_c_table(y_rail, prep.g_eff, db.s_levels(),
                                    deferred ? -1.0 : -inv_sigma2, ops);
    std::vector<double> acc(2 * static_cast<std::size_t>(positions), kNegInf);
    if (ops || db.half_store())
        scan_accessor(db, ct, prep, fold, acc.data(), ops);
    else
        scan_fast(db, ct, prep, fold, acc.data());
    LlrBlock le(positions);
    for (int pos = 0; pos < positions; ++pos) {
        const double d = acc[2 * pos] - acc[2 * pos + 1];
        le[pos] = clip_llr((deferred ? d * inv_sigma2 : d) - la_rail[pos]);
    }
    return le;
}

}  // namespace

LlrBlock log_map_extrinsic(const AmplitudeIndexDb& db, const Constellation& c,
                           const std::vector<double>& y_rail,
                           const std::vector<double>& gains, double sigma2,
                           const LlrBlock& la_rail, OpCounter* ops) {
    return folded_extrinsic(db, c, y_rail, gains, sigma2, la_rail, Fold::Lse, ops);
}

LlrBlock max_log_map_extrinsic(const AmplitudeIndexDb& db, const Constellation& c,
                               const std::vector<double>& y_rail,
                               const std::vector<double>& gains, double sigma2,
                               const LlrBlock& la_rail, OpCounter* ops) {
    return folded_extrinsic(db, c, y_rail, gains, sigma2, la_rail, Fold::Max, ops);
}

LlrBlock exact_map_extrinsic(const AmplitudeIndexDb& db, const Constellation& c,
                             const std::vector<double>& y_rail,
                             const std::vector<double>& gains, double sigma2,
                             const LlrBlock& la_rail, OpCounter* ops) {
    const std::size_t q = db.group_size();
    const int m = db.pam_levels();
    const int bp = db.bits_per_pam();
    const RailPrep prep = prep_rail(db, c, gains, la_rail, 1.0);
    const CTable ct =
        build_c_table(y_rail, prep.g_eff, db.s_levels(), -1.0 / sigma2, ops);

    // Exponent pass with a running maximum for a stable shift.
    std::vector<double> t(db.rows());
    double tmax = kNegInf;
    for (std::size_t z = 0; z < db.rows(); ++z) {
        double s = 0.0;
        for (std::size_t i = 0; i < q; ++i) {
            s += ct.row(i)[db.s_index(i, z)];
            s += prep.ap[i * m + db.level_index(i, z)];
            if (ops) ops->add(1 + static_cast<uint64_t>(bp));
        }
        t[z] = s;
        if (s > tmax) tmax = s;
    }
    // Amplitude-level weight buckets; exact marginalization over each rail.
    std::vector<double> bucket(q * static_cast<std::size_t>(m), 0.0);
    for (std::size_t z = 0; z < db.rows(); ++z) {
        const double w = std::exp(t[z] - tmax);
        for (std::size_t i = 0; i < q; ++i)
            bucket[i * m + db.level_index(i, z)] += w;
    }
    LlrBlock le(q * static_cast<std::size_t>(bp));
    for (std::size_t i = 0; i < q; ++i) {
        for (int b = 0; b < bp; ++b) {
            double num = 0.0, den = 0.0;
            for (int g = 0; g < m; ++g) {
                if (c.label_bit(g, b))
                    den += bucket[i * m + g];
                else
                    num += bucket[i * m + g];
            }
            const int pos = static_cast<int>(i) * bp + b;
            le[pos] = clip_llr(std::log(num / den) - la_rail[pos]);
        }
    }
    return le;
}

LlrBlock detect_frame_map(MapVariant variant, const PrecoderSpec& spec,
                          const ChannelState& st, const ComplexBlock& y,
                          const LlrBlock& la, const Constellation& c,
                          const AmplitudeIndexDb& db, OpCounter* ops) {
    if (spec.kind != PrecoderKind::Swh)
        throw std::invalid_argument("map detector: requires Walsh-Hadamard precoding");
    if (db.group_size() != spec.q || db.order() != c.order())
        throw std::invalid_argument("map detector: database does not match configuration");
    const std::size_t n = spec.n;
    const int bp = c.bits_per_pam();
    const std::size_t nc = n * static_cast<std::size_t>(2 * bp);
    if (la.size() != nc) throw std::invalid_argument("map detector: prior length mismatch");
    const std::size_t half = nc / 2;

    LlrBlock le(nc);
    const auto groups = split_groups(spec, y, st.lambda);
    LlrBlock la_rail(spec.q * static_cast<std::size_t>(bp));
    for (const GroupView& g : groups) {
        const PhaseCorrected pc = phase_correct(g);
        for (int rail = 0; rail < 2; ++rail) {
            const std::size_t base = rail == 0 ? 0 : half;
            for (std::size_t q = 0; q < spec.q; ++q) {
                const std::size_t sym = g.p + q * spec.p;
                for (int b = 0; b < bp; ++b)
                    la_rail[q * bp + b] = la[base + sym * bp + b];
            }
            const std::vector<double>& obs = rail == 0 ? pc.y_i : pc.y_q;
            LlrBlock out;
            switch (variant) {
                case MapVariant::Exact:
                    out = exact_map_extrinsic(db, c, obs, pc.gains, st.sigma2, la_rail, ops);
                    break;
                case MapVariant::LogMap:
                    out = log_map_extrinsic(db, c, obs, pc.gains, st.sigma2, la_rail, ops);
                    break;
                case MapVariant::MaxLogMap:
                    out = max_log_map_extrinsic(db, c, obs, pc.gains, st.sigma2, la_rail, ops);
                    break;
            }
            for (std::size_t q = 0; q < spec.q; ++q) {
                const std::size_t sym = g.p + q * spec.p;
                for (int b = 0; b < bp; ++b)
                    le[base + sym * bp + b] = out[q * bp + b];
            }
        }
    }
    return le;
}

}  // namespace fdlink
