#pragma once

#include <vector>

#include "fdlink/rng.hpp"
#include "fdlink/types.hpp"

namespace fdlink {

/// Proakis C: the five-tap severe-ISI test channel [0.23 0.46 0.69 0.46 0.23].
std::vector<double> proakis_c();

/// One-sided frequency response of a cyclic-prefixed channel: the length-n
/// unnormalized DFT of the zero-padded tap vector.
ComplexBlock to_fd(const std::vector<double>& taps, std::size_t n);

struct ChannelState {
    ComplexBlock lambda;  ///< per-tone gains
    double sigma2;        ///< complex noise variance per tone
};

ChannelState make_channel_state(const std::vector<double>& taps, std::size_t n,
                                double sigma2);

/// y = lambda .* x + w with circularly symmetric Gaussian noise of variance
/// sigma2 per tone (sigma2/2 per real component); draws real then imaginary
/// part for each tone in order.
ComplexBlock transmit(const ComplexBlock& x, const ChannelState& st, FrameRng& rng);

}  // namespace fdlink
