#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "fdlink/channel.hpp"
#include "fdlink/constellation.hpp"
#include "fdlink/epic_detector.hpp"
#include "fdlink/fec.hpp"
#include "fdlink/harness/config.hpp"
#include "fdlink/map_detector.hpp"
#include "fdlink/op_count.hpp"

namespace fdlink {

struct FerRecord {
    PrecoderKind precoder;
    DetectorKind detector;
    std::size_t q = 0;
    int j = 0;
    double ebn0_db = 0.0;
    std::size_t frames = 0;
    std::size_t frame_errors = 0;
    uint64_t bit_errors = 0;
    uint64_t info_bits = 0;
    double mean_turbo = 0.0;

    double fer() const { return frames ? static_cast<double>(frame_errors) / frames : 0.0; }
    double ber() const { return info_bits ? static_cast<double>(bit_errors) / info_bits : 0.0; }
};

struct FrameOutcome {
    uint32_t bit_errors = 0;
    bool frame_error = false;
    uint32_t turbo_used = 0;
    BitVec info_hat;  ///< final hard decisions
};

/// Transmit-side record of one frame, used by the analysis paths.
struct FrameData {
    BitVec info;
    BitVec coded;        ///< encoder output order
    BitVec coded_perm;   ///< interleaved order seen by the detector
    ComplexBlock y;
    std::vector<uint32_t> perm;
};

/// Instantiated link: constellation, precoder, channel response, detector
/// state and decoder for one configuration.  Frame evaluation is const and
/// thread-safe; every frame derives its randomness from (seed, index) alone.
class LinkRuntime {
  public:
    explicit LinkRuntime(const LinkConfig& cfg);

    const LinkConfig& config() const { return cfg_; }
    const Constellation& constellation() const { return con_; }
    const PrecoderSpec& precoder() const { return spec_; }
    const ComplexBlock& lambda() const { return lambda_; }
    std::size_t info_bits() const { return nb_; }
    std::size_t coded_bits() const { return nc_; }
    const EpSchedule& schedule() const { return sched_; }

    FrameData make_frame(double sigma2, uint64_t frame_index) const;

    LlrBlock detect(const ComplexBlock& y, double sigma2, const LlrBlock& la, int tau,
                    OpCounter* ops = nullptr) const;

    /// Full receiver on one frame: turbo loop with early exit once the
    /// decoder's hard decisions form a consistent codeword.
    FrameOutcome run_frame(double sigma2, uint64_t frame_index) const;

  private:
    LinkConfig cfg_;
    Constellation con_;
    PrecoderSpec spec_;
    ComplexBlock lambda_;
    EpSchedule sched_;
    std::unique_ptr<AmplitudeIndexDb> db_;
    RscCode rsc_;
    BcjrDecoder bcjr_;
    std::size_t nb_ = 0;
    std::size_t nc_ = 0;
};

/// Monte-Carlo at one grid point, honoring the configured stop rules.
/// Frames are processed in fixed-size chunks so the result does not depend
/// on the thread count.
FerRecord run_fer_point(const LinkRuntime& rt, double ebn0_db);

std::vector<FerRecord> run_sweep(const LinkRuntime& rt);

void write_fer_csv(std::ostream& os, const std::vector<FerRecord>& records);

}  // namespace fdlink
