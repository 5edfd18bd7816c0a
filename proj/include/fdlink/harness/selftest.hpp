#pragma once

#include <iosfwd>

namespace fdlink {

/// Compact built-in verification: transform identities, constellation
/// normalization, the detector cost-table identity, the one-tap equalizer
/// against a dense reference, the decoder against exhaustive marginals and
/// the grouped-averaging inequality.  Prints one line per check; returns 0
/// when everything passes.
int run_selftest(std::ostream& os);

}  // namespace fdlink
