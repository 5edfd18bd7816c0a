#pragma once

#include <iosfwd>
#include <vector>

#include "fdlink/harness/config.hpp"
#include "fdlink/op_count.hpp"

namespace fdlink {

struct OpFormula {
    uint64_t adds = 0;
    uint64_t mults = 0;
};

/// Closed-form per-symbol, per-detector-call operation counts.
/// n_self is the EP self-iteration parameter and is ignored for the
/// enumeration detectors.
OpFormula analytic_ops(DetectorKind det, PrecoderKind prec, std::size_t n,
                       std::size_t q, int j, int n_self);

struct ComplexityRow {
    PrecoderKind precoder;
    DetectorKind detector;
    std::size_t n = 0;
    std::size_t q = 0;
    int j = 0;
    int n_self = 0;
    OpFormula analytic;
    bool measured_ok = false;
    OpFormula measured;
};

/// Builds one row; when measure is set, runs the instrumented detector on a
/// synthetic frame and normalizes per symbol.  Enumeration detectors whose
/// candidate set exceeds the database budget report analytic numbers only.
ComplexityRow complexity_row(DetectorKind det, PrecoderKind prec, std::size_t n,
                             std::size_t q, int j, int n_self, bool measure);

/// The reference sweep: both enumeration flavors at Q = 4 and 8, and the EP
/// equalizer over all three precoders, each at QAM orders 4/16/64 with the
/// default self-iteration counts.
std::vector<ComplexityRow> complexity_preset(std::size_t n = 256, bool measure = true);

void write_complexity_csv(std::ostream& os, const std::vector<ComplexityRow>& rows);

}  // namespace fdlink
