#include "fdlink/fc_table.hpp"

#include <cmath>

namespace fdlink {

FcTable::FcTable() {
    for (int i = 0; i < kEntries; ++i) {
        const double x = static_cast<double>(i) * (kRange / kEntries);
        v_[i] = std::log1p(std::exp(-x));
    }
}

const FcTable& fc_table() {
    static const FcTable t;
    return t;
}

}  // namespace fdlink
