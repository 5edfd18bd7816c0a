#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "fdlink/channel.hpp"
#include "fdlink/constellation.hpp"
#include "fdlink/op_count.hpp"
#include "fdlink/precode.hpp"
#include "fdlink/types.hpp"

namespace fdlink {

/// Candidate-amplitude database for one group rail of a Walsh-Hadamard
/// precoded block.
///
/// Every length-Q vector z of PAM level indices maps, through the
/// unnormalized Walsh-Hadamard transform of its integer levels, to one
/// cost-table column index per coordinate:
///   s_index(q,z) = (u_q + Q*(m-1))/2   with u = Wh(2g - (m-1)), m = sqrt(J).
/// The index set is exact in integer arithmetic.  Rows are enumerated with
/// digit q of z as the q-th base-m digit (digit 0 least significant), which
/// makes row Z-1-z the elementwise negation of row z; the optional
/// half-storage mode keeps only the first half and mirrors on access.
class AmplitudeIndexDb {
  public:
    /// Enumeration budget guard: m^q rows must not exceed max_rows.
    static AmplitudeIndexDb build(std::size_t q, int j, bool half_store = false,
                                  std::size_t max_rows = std::size_t{1} << 20);

    std::size_t group_size() const { return q_; }
    int order() const { return j_; }
    int pam_levels() const { return m_; }
    int bits_per_pam() const { return bits_per_pam_; }
    std::size_t rows() const { return z_count_; }
    std::size_t width() const { return width_; }
    bool half_store() const { return half_; }
    const std::vector<double>& s_levels() const { return s_levels_; }

    int32_t s_index(std::size_t q, std::size_t z) const;
    int32_t level_index(std::size_t q, std::size_t z) const;
    uint32_t mask(std::size_t z) const;

    /// Raw plane pointers for the kernel scan; only valid with full storage.
    const int32_t* s_planes() const { return s_idx_.data(); }
    const int32_t* g_planes() const { return g_idx_.data(); }
    const uint32_t* masks() const { return masks_.data(); }

  private:
    std::size_t q_ = 0;
    int j_ = 0;
    int m_ = 0;
    int bits_per_pam_ = 0;
    std::size_t z_count_ = 0;
    std::size_t width_ = 0;
    bool half_ = false;
    std::size_t stored_ = 0;
    uint32_t msb_mask_ = 0;
    std::vector<double> s_levels_;
    std::vector<int32_t> s_idx_;   // plane-major: [q * stored_ + z]
    std::vector<int32_t> g_idx_;
    std::vector<uint32_t> masks_;
};

/// Phase-corrected observation of one group: y' = (conj(lambda)/|lambda|) y,
/// split into rails, plus the per-tone magnitudes.
struct PhaseCorrected {
    std::vector<double> y_i;
    std::vector<double> y_q;
    std::vector<double> gains;
};

/// Throws when any tone magnitude is below the degenerate threshold 1e-12.
PhaseCorrected phase_correct(const GroupView& g);

/// Per-coordinate cost table, rows q of db.width() entries:
/// c[q][i] = coef * (y[q] - g_eff[q]*s[i])^2 with coef < 0.
struct CTable {
    std::size_t width = 0;
    std::vector<double> v;

    double* row(std::size_t q) { return v.data() + q * width; }
    const double* row(std::size_t q) const { return v.data() + q * width; }
};

CTable build_c_table(const std::vector<double>& y_rail,
                     const std::vector<double>& g_eff,
                     const std::vector<double>& s_levels, double coef,
                     OpCounter* ops = nullptr);

/// One group rail, all three marginalization flavors.  Inputs are the
/// phase-corrected rail observation, the per-tone gains (not yet scaled by
/// kappa), the noise variance and the rail's a-priori LLRs in position order
/// pos = q*bits_per_pam + b.  Outputs are clipped extrinsic LLRs.
LlrBlock exact_map_extrinsic(const AmplitudeIndexDb& db, const Constellation& c,
                             const std::vector<double>& y_rail,
                             const std::vector<double>& gains, double sigma2,
                             const LlrBlock& la_rail, OpCounter* ops = nullptr);

LlrBlock log_map_extrinsic(const AmplitudeIndexDb& db, const Constellation& c,
                           const std::vector<double>& y_rail,
                           const std::vector<double>& gains, double sigma2,
                           const LlrBlock& la_rail, OpCounter* ops = nullptr);

LlrBlock max_log_map_extrinsic(const AmplitudeIndexDb& db, const Constellation& c,
                               const std::vector<double>& y_rail,
                               const std::vector<double>& gains, double sigma2,
                               const LlrBlock& la_rail, OpCounter* ops = nullptr);

enum class MapVariant { Exact, LogMap, MaxLogMap };

/// Full-frame detection pass: splits the observation into groups, corrects
/// phase, runs the selected per-rail marginalization and assembles extrinsic
/// LLRs in coded-bit order (in-phase halves first).
LlrBlock detect_frame_map(MapVariant variant, const PrecoderSpec& spec,
                          const ChannelState& st, const ComplexBlock& y,
                          const LlrBlock& la, const Constellation& c,
                          const AmplitudeIndexDb& db, OpCounter* ops = nullptr);

}  // namespace fdlink
