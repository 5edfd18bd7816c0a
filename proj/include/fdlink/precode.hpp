#pragma once

#include <cstddef>
#include <vector>

#include "fdlink/types.hpp"

namespace fdlink {

enum class PrecoderKind { Dft, Sdft, Swh };

/// Frequency-domain precoder A acting on a length-n symbol block.
///
/// Sdft and Swh are block transforms F_Q (x) I_P and W_Q (x) I_P: group p
/// collects the q = 0..Q-1 tones at indices p + q*P and applies a size-Q DFT
/// or Walsh-Hadamard matrix to them.  Dft is the dense F_N map, i.e. the
/// degenerate grouping Q = N, P = 1.
struct PrecoderSpec {
    PrecoderKind kind;
    std::size_t n;
    std::size_t q;
    std::size_t p;

    /// Validates sizes; for Dft the group size is forced to n.
    static PrecoderSpec make(PrecoderKind kind, std::size_t n, std::size_t q);
};

const char* to_string(PrecoderKind k);

/// Tone indices of group p in increasing order.
std::vector<std::size_t> group_indices(const PrecoderSpec& spec, std::size_t p);

/// x = A d.
ComplexBlock precode(const PrecoderSpec& spec, const ComplexBlock& d);

/// d = A^H x; exact inverse of precode for these unitary maps.
ComplexBlock deprecode(const PrecoderSpec& spec, const ComplexBlock& x);

/// One group of received tones and channel gains.
struct GroupView {
    std::size_t p;
    std::vector<std::size_t> idx;
    ComplexBlock y;
    ComplexBlock lambda;
};

/// Gathers the observation and channel diagonal into per-group views.
std::vector<GroupView> split_groups(const PrecoderSpec& spec, const ComplexBlock& y,
                                    const ComplexBlock& lambda);

}  // namespace fdlink
