#include "fdlink/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "fdlink/transforms.hpp"

namespace fdlink {

std::vector<double> proakis_c() { return {0.23, 0.46, 0.69, 0.46, 0.23}; }

ComplexBlock to_fd(const std::vector<double>& taps, std::size_t n) {
    if (taps.size() > n) throw std::invalid_argument("to_fd: more taps than tones");
    ComplexBlock padded(n, cplx{0.0, 0.0});
    for (std::size_t l = 0; l < taps.size(); ++l) padded[l] = taps[l];
    const Fft fft(n);
    fft.forward(padded);
    const double s = std::sqrt(static_cast<double>(n));
    for (auto& v : padded) v *= s;
    return padded;
}

ChannelState make_channel_state(const std::vector<double>& taps, std::size_t n,
                                double sigma2) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("channel: sigma2 must be positive");
    return {to_fd(taps, n), sigma2};
}

ComplexBlock transmit(const ComplexBlock& x, const ChannelState& st, FrameRng& rng) {
    if (x.size() != st.lambda.size()) throw std::invalid_argument("transmit: length mismatch");
    const double s = std::sqrt(st.sigma2 / 2.0);
    ComplexBlock y(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double wr = s * rng.gauss();
        const double wi = s * rng.gauss();
        y[k] = st.lambda[k] * x[k] + cplx{wr, wi};
    }
    return y;
}

}  // namespace fdlink
