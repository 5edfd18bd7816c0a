#include "fdlink/constellation.hpp"

#include <cmath>
#include <stdexcept>

namespace fdlink {

namespace {

unsigned gray(unsigned v) { return v ^ (v >> 1); }

}  // namespace

Constellation Constellation::make(int j) {
    if (j != 4 && j != 16 && j != 64)
        throw std::invalid_argument("constellation: order must be 4, 16 or 64");
    Constellation c;
    c.j_ = j;
    c.m_ = static_cast<int>(std::lround(std::sqrt(static_cast<double>(j))));
    c.bits_per_pam_ = ilog2(static_cast<std::size_t>(c.m_));
    c.kappa_ = std::sqrt(3.0 / (2.0 * (j - 1)));
    c.levels_.resize(c.m_);
    c.labels_.resize(c.m_);
    c.level_of_label_.resize(c.m_);
    for (int g = 0; g < c.m_; ++g) {
        c.levels_[g] = c.kappa_ * (2 * g - (c.m_ - 1));
        c.labels_[g] = static_cast<uint8_t>(gray(static_cast<unsigned>(c.m_ - 1 - g)));
        c.level_of_label_[c.labels_[g]] = g;
    }
    return c;
}

int Constellation::label_bit(int g, int b) const {
    return (labels_[g] >> (bits_per_pam_ - 1 - b)) & 1;
}

int Constellation::level_of_bits(const uint8_t* bits) const {
    unsigned v = 0;
    for (int b = 0; b < bits_per_pam_; ++b) v = (v << 1) | (bits[b] & 1u);
    return level_of_label_[v];
}

double Constellation::pam_map(const uint8_t* bits) const {
    return levels_[level_of_bits(bits)];
}

cplx Constellation::qam_map(const uint8_t* bits_i, const uint8_t* bits_q) const {
    return {pam_map(bits_i), pam_map(bits_q)};
}

int Constellation::pam_bit(double level, int b) const {
    for (int g = 0; g < m_; ++g)
        if (std::fabs(level - levels_[g]) < 1e-9) return label_bit(g, b);
    throw std::invalid_argument("pam_bit: value is not a constellation level");
}

}  // namespace fdlink
