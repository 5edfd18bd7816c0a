#pragma once

#include <cstddef>
#include <vector>

#include "fdlink/types.hpp"

namespace fdlink {

/// Orthonormal Walsh-Hadamard transform (Sylvester ordering), in place.
/// Self-inverse; length must be a power of two.
void fwht(ComplexBlock& x);

/// Unnormalized Walsh-Hadamard butterflies, in place (no 1/sqrt(n) factor).
void fwht_unnormalized(ComplexBlock& x);

/// Orthonormal radix-2 FFT with precomputed twiddle and bit-reversal tables.
/// Both directions carry 1/sqrt(n), so forward and inverse are adjoint
/// unitary maps of each other.
class Fft {
  public:
    explicit Fft(std::size_t n);

    std::size_t size() const { return n_; }
    void forward(ComplexBlock& x) const;
    void inverse(ComplexBlock& x) const;

  private:
    void run(ComplexBlock& x, const ComplexBlock& tw) const;

    std::size_t n_;
    double scale_;
    std::vector<std::size_t> rev_;
    ComplexBlock tw_fwd_;
    ComplexBlock tw_inv_;
};

}  // namespace fdlink
