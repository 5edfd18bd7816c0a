#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdlink {

using cplx = std::complex<double>;
using ComplexBlock = std::vector<cplx>;
using LlrBlock = std::vector<double>;
using BitVec = std::vector<uint8_t>;

/// Symmetric clip applied to every LLR that crosses a module boundary.
inline constexpr double kLlrClip = 60.0;

inline double clip_llr(double l) {
    if (l > kLlrClip) return kLlrClip;
    if (l < -kLlrClip) return -kLlrClip;
    return l;
}

/// Raised when a request is structurally valid but exceeds a hard resource
/// bound (e.g. detector state enumeration too large to materialize).
class CapabilityError : public std::runtime_error {
  public:
    explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline unsigned ilog2(std::size_t n) {
    unsigned b = 0;
    while ((std::size_t{1} << b) < n) ++b;
    return b;
}

}  // namespace fdlink
