#include "fdlink/harness/simulate.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace fdlink {

namespace {

constexpr std::size_t kChunkFrames = 512;

bool is_map_kind(DetectorKind k) {
    return k == DetectorKind::SwhExact || k == DetectorKind::SwhLog ||
           k == DetectorKind::SwhMaxLog;
}

}  // namespace

LinkRuntime::LinkRuntime(const LinkConfig& cfg)
    : cfg_(cfg),
      con_(Constellation::make(cfg.j)),
      spec_(PrecoderSpec::make(cfg.precoder, cfg.n, cfg.q)),
      sched_(EpSchedule::defaults(cfg.j)),
      bcjr_(MaxStar::Table) {
    cfg_.validate();
    lambda_ = to_fd(proakis_c(), cfg_.n);
    if (cfg_.self_iters >= 0) sched_.n_self = cfg_.self_iters;
    if (cfg_.beta_scale >= 0.0) sched_.beta_scale = cfg_.beta_scale;
    if (cfg_.beta_decay >= 0.0) sched_.beta_decay = cfg_.beta_decay;
    if (is_map_kind(cfg_.detector))
        db_ = std::make_unique<AmplitudeIndexDb>(AmplitudeIndexDb::build(spec_.q, cfg_.j));
    nc_ = cfg_.n * static_cast<std::size_t>(cfg_.bits_per_symbol());
    nb_ = nc_ / 2 - RscCode::kTailBits;
}

FrameData LinkRuntime::make_frame(double sigma2, uint64_t frame_index) const {
    FrameRng rng(cfg_.seed, frame_index);
    FrameData fd;
    fd.info.resize(nb_);
    for (auto& b : fd.info) b = rng.bit();
    const Interleaver il = Interleaver::random(nc_, rng);
    fd.perm = il.perm();
    fd.coded = rsc_.encode(fd.info);
    fd.coded_perm = il.interleave(fd.coded);

    const int bp = con_.bits_per_pam();
    const std::size_t half = nc_ / 2;
    ComplexBlock d(cfg_.n);
    for (std::size_t sym = 0; sym < cfg_.n; ++sym)
        d[sym] = con_.qam_map(fd.coded_perm.data() + sym * bp,
                              fd.coded_perm.data() + half + sym * bp);
    const ComplexBlock x = precode(spec_, d);
    const ChannelState st{lambda_, sigma2};
    fd.y = transmit(x, st, rng);
    return fd;
}

LlrBlock LinkRuntime::detect(const ComplexBlock& y, double sigma2, const LlrBlock& la,
                             int tau, OpCounter* ops) const {
    const ChannelState st{lambda_, sigma2};
    switch (cfg_.detector) {
        case DetectorKind::SwhExact:
            return detect_frame_map(MapVariant::Exact, spec_, st, y, la, con_, *db_, ops);
        case DetectorKind::SwhLog:
            return detect_frame_map(MapVariant::LogMap, spec_, st, y, la, con_, *db_, ops);
        case DetectorKind::SwhMaxLog:
            return detect_frame_map(MapVariant::MaxLogMap, spec_, st, y, la, con_, *db_,
                                    ops);
        case DetectorKind::Epic:
            return detect_frame_epic(EpicVariant::Epic, spec_, st, y, la, con_, sched_,
                                     tau, ops);
        case DetectorKind::Vamp:
            return detect_frame_epic(EpicVariant::Vamp, spec_, st, y, la, con_, sched_,
                                     tau, ops);
    }
    throw std::logic_error("unreachable detector kind");
}

FrameOutcome LinkRuntime::run_frame(double sigma2, uint64_t frame_index) const {
    const FrameData fd = make_frame(sigma2, frame_index);
    const Interleaver il{std::vector<uint32_t>(fd.perm)};

    FrameOutcome out;
    LlrBlock la(nc_, 0.0);
    BitVec info_hat(nb_);
    for (int tau = 0; tau <= cfg_.turbo_iters; ++tau) {
        const LlrBlock le = detect(fd.y, sigma2, la, tau);
        const LlrBlock dec_in = il.deinterleave(le);
        const BcjrResult dec = bcjr_.decode(dec_in);
        out.turbo_used = static_cast<uint32_t>(tau + 1);

        for (std::size_t i = 0; i < nb_; ++i) info_hat[i] = dec.app_info[i] < 0.0;
        // Genie-aided early termination: stop once the tentative decode is
        // error-free, otherwise run the full schedule.  Decoder-consistency
        // tests are useless here since the soft-output hard decisions of a
        // convolutional code almost always re-encode to themselves.
        bool correct = true;
        for (std::size_t i = 0; i < nb_ && correct; ++i)
            correct = info_hat[i] == fd.info[i];
        if (correct || tau == cfg_.turbo_iters) break;

        LlrBlock ext(nc_);
        for (std::size_t i = 0; i < nc_; ++i)
            ext[i] = clip_llr(dec.app_coded[i] - dec_in[i]);
        la = il.interleave(ext);
    }
    for (std::size_t i = 0; i < nb_; ++i)
        if (info_hat[i] != fd.info[i]) ++out.bit_errors;
    out.frame_error = out.bit_errors != 0;
    out.info_hat = std::move(info_hat);
    return out;
}

FerRecord run_fer_point(const LinkRuntime& rt, double ebn0_db) {
    const LinkConfig& cfg = rt.config();
    const double sigma2 = cfg.sigma2_for(ebn0_db);

    FerRecord rec;
    rec.precoder = cfg.precoder;
    rec.detector = cfg.detector;
    rec.q = rt.precoder().q;
    rec.j = cfg.j;
    rec.ebn0_db = ebn0_db;

    uint64_t turbo_sum = 0;
    std::vector<FrameOutcome> chunk;
    while (rec.frames < cfg.max_frames && rec.frame_errors < cfg.min_frame_errors) {
        const std::size_t count = std::min(kChunkFrames, cfg.max_frames - rec.frames);
        chunk.assign(count, FrameOutcome{});
        const uint64_t base = rec.frames;
        const int nthreads = cfg.threads;
        if (nthreads <= 1) {
            for (std::size_t i = 0; i < count; ++i)
                chunk[i] = rt.run_frame(sigma2, base + i);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(nthreads);
            for (int t = 0; t < nthreads; ++t) {
                pool.emplace_back([&, t] {
                    for (std::size_t i = static_cast<std::size_t>(t); i < count;
                         i += static_cast<std::size_t>(nthreads))
                        chunk[i] = rt.run_frame(sigma2, base + i);
                });
            }
            for (auto& th : pool) th.join();
        }
        for (const FrameOutcome& fo : chunk) {
            rec.frames += 1;
            rec.frame_errors += fo.frame_error ? 1 : 0;
            rec.bit_errors += fo.bit_errors;
            turbo_sum += fo.turbo_used;
        }
    }
    rec.info_bits = static_cast<uint64_t>(rec.frames) * rt.info_bits();
    rec.mean_turbo = rec.frames ? static_cast<double>(turbo_sum) / rec.frames : 0.0;
    return rec;
}

std::vector<FerRecord> run_sweep(const LinkRuntime& rt) {
    std::vector<FerRecord> out;
    for (double e : rt.config().ebn0_db) out.push_back(run_fer_point(rt, e));
    return out;
}

void write_fer_csv(std::ostream& os, const std::vector<FerRecord>& records) {
    os << "scheme,detector,q,j,ebn0_db,frames,frame_errors,fer,ber,mean_ti\n";
    char buf[64];
    for (const FerRecord& r : records) {
        os << to_string(r.precoder) << ',' << to_string(r.detector) << ',' << r.q << ','
           << r.j << ',';
        std::snprintf(buf, sizeof buf, "%g", r.ebn0_db);
        os << buf << ',' << r.frames << ',' << r.frame_errors << ',';
        std::snprintf(buf, sizeof buf, "%.6g", r.fer());
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.6g", r.ber());
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.4f", r.mean_turbo);
        os << buf << '\n';
    }
}

}  // namespace fdlink
