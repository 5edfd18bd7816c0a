#pragma once

#include <cstdint>

namespace fdlink {

/// Tally of real additions and multiplications along a counted code path.
/// Functions take an optional pointer; null means "run the fast path".
struct OpCounter {
    uint64_t adds = 0;
    uint64_t mults = 0;

    void add(uint64_t n = 1) { adds += n; }
    void mul(uint64_t n = 1) { mults += n; }

    OpCounter& operator+=(const OpCounter& o) {
        adds += o.adds;
        mults += o.mults;
        return *this;
    }
};

}  // namespace fdlink
