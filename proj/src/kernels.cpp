#include "cavsim/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace cavsim::kernels {

#if defined(CAVSIM_BUILD_AVX2)
const Ops* avx2_ops_impl();
#endif

bool avx2_supported() {
#if defined(CAVSIM_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops* avx2_ops() {
#if defined(CAVSIM_BUILD_AVX2)
    if (avx2_supported()) return avx2_ops_impl();
#endif
    return nullptr;
}

namespace {

const Ops* select_from_env() {
    if (const char* env = std::getenv("CAVSIM_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
        if (std::strcmp(env, "avx2") == 0 && avx2_ops()) return avx2_ops();
    }
    if (const Ops* v = avx2_ops()) return v;
    return &scalar_ops();
}

const Ops*& forced() {
    static const Ops* ptr = nullptr;
    return ptr;
}

}  // namespace

const Ops& active() {
    if (forced()) return *forced();
    static const Ops* selected = select_from_env();
    return *selected;
}

void force(const Ops* ops) { forced() = ops; }

}  // namespace cavsim::kernels
