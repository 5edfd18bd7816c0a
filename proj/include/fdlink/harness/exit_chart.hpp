#pragma once

#include <iosfwd>
#include <vector>

#include "fdlink/harness/simulate.hpp"

namespace fdlink {

/// Bitwise mutual information estimate between transmitted bits and their
/// LLRs: I = 1 - E[log2(1 + exp(-(1-2c) L))].
double bitwise_mutual_information(const LlrBlock& llrs, const BitVec& bits);

/// Mutual information of a consistent Gaussian LLR N(sigma^2/2, sigma^2)
/// conditioned on the zero bit; evaluated by quadrature.
double j_function(double sigma);

/// Inverse of j_function by bisection on sigma.
double j_inverse(double i);

struct ExitPoint {
    int ti = 0;
    double ia_det = 0.0;
    double ie_det = 0.0;
    double ia_dec = 0.0;
    double ie_dec = 0.0;
};

/// Per-pass detector/decoder transfer trajectory at one SNR, averaged over
/// frames; the turbo loop runs all passes (no early exit).
std::vector<ExitPoint> exit_trajectory(const LinkRuntime& rt, double ebn0_db,
                                       std::size_t frames);

struct DecCurvePoint {
    double ia = 0.0;
    double ie = 0.0;
};

/// Decoder extrinsic transfer: consistent Gaussian priors on the coded bits
/// of random terminated codewords, one point per requested input MI.
std::vector<DecCurvePoint> decoder_exit_curve(std::size_t n_info,
                                              const std::vector<double>& ia_grid,
                                              std::size_t frames, uint64_t seed);

/// FER over a fixed number of frames, for grid probing.
double probe_fer(const LinkRuntime& rt, double ebn0_db, std::size_t frames);

/// Lowest grid point whose probed FER drops below 0.5; falls back to the
/// last grid point.
double pick_exit_ebn0(const LinkRuntime& rt, std::size_t probe_frames = 200);

void write_exit_csv(std::ostream& os, const std::vector<ExitPoint>& rows);
void write_decoder_curve_csv(std::ostream& os, const std::vector<DecCurvePoint>& rows);

}  // namespace fdlink
