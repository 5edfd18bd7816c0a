#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fdlink/precode.hpp"

namespace fdlink {

enum class DetectorKind { SwhExact, SwhLog, SwhMaxLog, Epic, Vamp };

const char* to_string(DetectorKind k);
DetectorKind detector_from_string(const std::string& s);
PrecoderKind precoder_from_string(const std::string& s);

/// One simulation setup: modulation, precoder, detector, schedules and
/// stopping rules.  Fields left at their sentinel (-1) pick the per-order
/// defaults when the link is instantiated.
struct LinkConfig {
    std::size_t n = 256;
    std::size_t q = 8;
    int j = 4;
    PrecoderKind precoder = PrecoderKind::Swh;
    DetectorKind detector = DetectorKind::SwhLog;
    int turbo_iters = 9;      ///< turbo passes beyond the first; tau runs 0..turbo_iters
    int self_iters = -1;      ///< EP self-iteration parameter; -1 = default for j
    double beta_scale = -1.0;
    double beta_decay = -1.0;
    std::vector<double> ebn0_db;
    uint64_t seed = 1;
    std::size_t min_frame_errors = 500;
    std::size_t max_frames = 200000;
    int threads = 1;

    /// Code-rate-aware noise variance for a grid point, nominal rate 1/2.
    double sigma2_for(double ebn0_db_point) const;

    /// Bits per QAM symbol.
    int bits_per_symbol() const;

    /// Throws std::invalid_argument on inconsistent combinations.
    void validate() const;
};

/// Parses the flat key/value format: one `key = value` per line, `#` starts
/// a comment.  Unknown keys are rejected.
LinkConfig parse_config(std::istream& in);
LinkConfig parse_config_file(const std::string& path);

}  // namespace fdlink
