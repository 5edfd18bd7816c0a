#pragma once

#include <array>

namespace fdlink {

/// 256-entry table of f_c(x) = ln(1 + exp(-x)) sampled on [0, 10).
///
/// Lookup is nearest-neighbor on a uniform grid; arguments at or beyond 10
/// return zero.  Shared by the max-star folds of the detector and decoder.
class FcTable {
  public:
    static constexpr int kEntries = 256;
    static constexpr double kRange = 10.0;

    FcTable();

    double scale() const { return kEntries / kRange; }
    const double* data() const { return v_.data(); }

    double lookup(double d) const {
        if (d >= kRange) return 0.0;  // beyond the table, incl. fold sentinels
        const auto idx = static_cast<int>(d * scale() + 0.5);
        return idx < kEntries ? v_[idx] : 0.0;
    }

  private:
    std::array<double, kEntries> v_;
};

/// Process-wide shared instance.
const FcTable& fc_table();

}  // namespace fdlink
