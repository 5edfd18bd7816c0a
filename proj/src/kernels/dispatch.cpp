#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "fdlink/kernels.hpp"

namespace fdlink::kernels {

#if defined(FDLINK_ENABLE_AVX2)
const Api* avx2_api_impl();
#endif

bool avx2_supported() {
#if defined(FDLINK_ENABLE_AVX2)
    return __builtin_cpu_supports("avx2") > 0;
#else
    return false;
#endif
}

const Api* avx2_api() {
#if defined(FDLINK_ENABLE_AVX2)
    return avx2_supported() ? avx2_api_impl() : nullptr;
#else
    return nullptr;
#endif
}

namespace {

const Api* pick_initial() {
    if (const char* env = std::getenv("FDLINK_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return &scalar_api();
        if (std::strcmp(env, "avx2") == 0) {
            if (const Api* a = avx2_api()) return a;
            throw std::invalid_argument("FDLINK_KERNELS=avx2 but AVX2 is unavailable");
        }
        throw std::invalid_argument(std::string("unknown FDLINK_KERNELS value: ") + env);
    }
    if (const Api* a = avx2_api()) return a;
    return &scalar_api();
}

const Api*& current_slot() {
    static const Api* cur = pick_initial();
    return cur;
}

}  // namespace

void set_backend(Backend b) {
    if (b == Backend::Scalar) {
        current_slot() = &scalar_api();
        return;
    }
    const Api* a = avx2_api();
    if (!a) throw std::invalid_argument("AVX2 kernels unavailable on this machine");
    current_slot() = a;
}

Backend active_backend() {
    return current_slot() == &scalar_api() ? Backend::Scalar : Backend::Avx2;
}

const Api& api() { return *current_slot(); }

}  // namespace fdlink::kernels
