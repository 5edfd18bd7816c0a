#pragma once

#include <vector>

#include "fdlink/channel.hpp"
#include "fdlink/constellation.hpp"
#include "fdlink/op_count.hpp"
#include "fdlink/precode.hpp"
#include "fdlink/transforms.hpp"
#include "fdlink/types.hpp"

namespace fdlink {

/// Self-iteration count and damping schedule of the EP equalizer.
///
/// One detector call runs n_self+1 self-iterations; the damping factor for
/// turbo pass tau and self-iteration s is beta_scale * beta_decay^(tau+s).
struct EpSchedule {
    int n_self;
    double beta_scale;
    double beta_decay;

    static EpSchedule defaults(int j);
    double beta(int tau, int s) const;
};

/// Normalized prior PMF over the J constellation points from the symbol's
/// bit LLRs (in-phase bits first); point (gi, gq) sits at index gi*m + gq.
std::vector<double> prior_pmf(const Constellation& c, const LlrBlock& la_sym);

/// Normalized posterior PMF: prior reweighted by the Gaussian likelihood
/// exp(-|d - d_e|^2 / v_e).  Reference enumeration over all J points.
std::vector<double> posterior_pmf(const Constellation& c, cplx d_e, double v_e,
                                  const LlrBlock& la_sym);

struct SymbolMoments {
    cplx mean;
    double var;
};

/// Mean and variance of a PMF laid out as posterior_pmf.
SymbolMoments pmf_moments(const Constellation& c, const std::vector<double>& pmf);

double average_variance(const std::vector<double>& vars);

struct EpDivideResult {
    cplx mean;
    double var;
    bool fell_back;
};

/// Gaussian division of the posterior by the cavity: moments of
/// N(d; mu, gamma_bar) / N(d; d_e, v_e).  Falls back to the previous
/// extrinsic when the division is ill-posed (gamma_bar >= v_e); the variance
/// is floored at v_min.
EpDivideResult ep_divide(cplx mu, double gamma_bar, cplx d_e, double v_e,
                         cplx prev_mean, double prev_var, double v_min = 1e-10);

inline cplx damp(cplx fresh, cplx prev, double beta) {
    return (1.0 - beta) * fresh + beta * prev;
}
inline double damp(double fresh, double prev, double beta) {
    return (1.0 - beta) * fresh + beta * prev;
}

struct FdLmmseResult {
    ComplexBlock d_e;
    double v_e;
};

/// One-tap frequency-domain LMMSE extrinsic for one precoded group.
///
/// kind selects the group transform (Walsh-Hadamard or DFT); fft must match
/// the block length for the DFT kinds and may be null for Swh.  Inputs are
/// the group's received tones, channel gains, symbol-domain prior mean d_a
/// and scalar prior variance v_a.  The equalizer output variance v_e is
/// strictly positive for sigma2 > 0.
FdLmmseResult fd_lmmse(PrecoderKind kind, const Fft* fft, const ComplexBlock& y,
                       const ComplexBlock& lambda, const ComplexBlock& d_a,
                       double v_a, double sigma2, OpCounter* ops = nullptr);

/// Extrinsic bit LLRs of one symbol from its per-rail posterior weights
/// (m raw weights per rail, any common scale).
LlrBlock dem_extrinsic_llrs(const Constellation& c, const std::vector<double>& w_i,
                            const std::vector<double>& w_q, const LlrBlock& la_sym);

enum class EpicVariant {
    Epic,  ///< damps the divided extrinsic (d*, v*) across self-iterations
    Vamp,  ///< damps the posterior mean and equalizer variance instead
};

/// Full-frame EP detection pass producing extrinsic LLRs in coded-bit order
/// (in-phase halves first).  tau is the zero-based turbo pass index driving
/// the damping schedule.
LlrBlock detect_frame_epic(EpicVariant variant, const PrecoderSpec& spec,
                           const ChannelState& st, const ComplexBlock& y,
                           const LlrBlock& la, const Constellation& c,
                           const EpSchedule& sched, int tau,
                           OpCounter* ops = nullptr);

}  // namespace fdlink
