#pragma once

#include <cstdint>
#include <vector>

#include "fdlink/fc_table.hpp"
#include "fdlink/rng.hpp"
#include "fdlink/types.hpp"

namespace fdlink {

/// Rate-1/2 recursive systematic convolutional code with feedback polynomial
/// 7 (octal, 1+D+D^2) and feedforward 5 (octal, 1+D^2); four trellis states.
///
/// Frames are terminated: two tail input bits drive the register back to
/// zero, so a block of n_info bits encodes to 2*(n_info+2) coded bits with
/// systematic and parity bits interleaved pairwise (s0 p0 s1 p1 ...).
class RscCode {
  public:
    static constexpr int kStates = 4;
    static constexpr int kTailBits = 2;

    /// Coded length for a given number of info bits.
    static std::size_t coded_length(std::size_t n_info) { return 2 * (n_info + kTailBits); }

    /// Info length that fills n_coded coded bits; throws if n_coded is odd or
    /// too short.
    static std::size_t info_length(std::size_t n_coded);

    BitVec encode(const BitVec& info) const;
};

/// Frame interleaver over coded bits: out[i] = in[perm[i]].
class Interleaver {
  public:
    explicit Interleaver(std::vector<uint32_t> perm);

    /// Uniformly random permutation drawn from the frame stream.
    static Interleaver random(std::size_t n, FrameRng& rng);
    static Interleaver identity(std::size_t n);

    std::size_t size() const { return perm_.size(); }
    const std::vector<uint32_t>& perm() const { return perm_; }

    LlrBlock interleave(const LlrBlock& x) const;
    LlrBlock deinterleave(const LlrBlock& x) const;
    BitVec interleave(const BitVec& x) const;

  private:
    std::vector<uint32_t> perm_;
    std::vector<uint32_t> inv_;
};

struct BcjrResult {
    LlrBlock app_coded;  ///< posterior LLRs for every coded bit
    LlrBlock app_info;   ///< posterior LLRs for the info bits (tail excluded)
};

/// Max-star flavor used inside the forward/backward recursions.
enum class MaxStar {
    Table,  ///< max + nearest-neighbor corrective lookup (default)
    Exact,  ///< max + log1p(exp(-|d|))
};

/// Log-domain BCJR for the terminated RSC trellis.
///
/// Input and output LLRs follow ln p(c=0)/p(c=1).  The decoder consumes one
/// LLR per coded bit (detector extrinsic, deinterleaved) and emits posterior
/// LLRs; callers form extrinsic feedback by subtracting the input.
class BcjrDecoder {
  public:
    explicit BcjrDecoder(MaxStar mode = MaxStar::Table);

    BcjrResult decode(const LlrBlock& coded_llr) const;

  private:
    double fold(double a, double b) const;

    MaxStar mode_;
    const FcTable* fc_;
};

}  // namespace fdlink
