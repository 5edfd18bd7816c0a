#pragma once

#include <cstdint>
#include <vector>

#include "fdlink/types.hpp"

namespace fdlink {

/// Square Gray-labeled QAM built from two independent PAM rails.
///
/// Levels are ascending, level g = kappa*(2g - (m-1)) with m = sqrt(J), and
/// kappa = sqrt(3/(2(J-1))) normalizes the average symbol energy to one.
/// Labels form a reflected Gray chain whose first bit is the sign bit
/// (1 on negative levels): for 16-QAM the ascending levels carry
/// 10, 11, 01, 00.  Bit 0 of a label is its most significant bit.
class Constellation {
  public:
    static Constellation make(int j);

    int order() const { return j_; }
    int pam_levels() const { return m_; }
    int bits_per_pam() const { return bits_per_pam_; }
    int bits_per_symbol() const { return 2 * bits_per_pam_; }
    double kappa() const { return kappa_; }
    const std::vector<double>& levels() const { return levels_; }

    /// Label bit b (b=0 is the MSB) of the level with ascending index g.
    int label_bit(int g, int b) const;

    /// Level index addressed by the bits (MSB first).
    int level_of_bits(const uint8_t* bits) const;

    /// One PAM coordinate from its label bits.
    double pam_map(const uint8_t* bits) const;

    /// Full QAM symbol; in-phase rail first.
    cplx qam_map(const uint8_t* bits_i, const uint8_t* bits_q) const;

    /// Label bit b of an exact constellation level; throws when the value is
    /// not one of the m levels.
    int pam_bit(double level, int b) const;

  private:
    int j_ = 0;
    int m_ = 0;
    int bits_per_pam_ = 0;
    double kappa_ = 0.0;
    std::vector<double> levels_;
    std::vector<uint8_t> labels_;       // per ascending level index
    std::vector<int> level_of_label_;   // inverse map
};

}  // namespace fdlink
