#include "hetpanel/kernels/kernels.hpp"

#include "hetpanel/core/error.hpp"

namespace hetpanel::kernels {

#if defined(HETPANEL_HAVE_AVX2_TU)
const Ops& avx2_ops();  // defined in kernels_avx2.cpp
#endif

namespace {

bool cpu_has_avx2() {
#if defined(HETPANEL_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(_M_X64))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

struct State {
    const Ops* active;
    Backend backend;
    State() {
        if (cpu_has_avx2()) {
#if defined(HETPANEL_HAVE_AVX2_TU)
            active = &avx2_ops();
            backend = Backend::avx2;
            return;
#endif
        }
        active = &scalar_ops();
        backend = Backend::scalar;
    }
};

State& state() {
    static State s;
    return s;
}

}  // namespace

const Ops& ops() { return *state().active; }

bool backend_available(Backend b) {
    if (b == Backend::scalar) return true;
    return cpu_has_avx2();
}

void force_backend(Backend b) {
    if (!backend_available(b)) throw ConfigError("kernel backend not available on this CPU");
    if (b == Backend::scalar) {
        state().active = &scalar_ops();
    } else {
#if defined(HETPANEL_HAVE_AVX2_TU)
        state().active = &avx2_ops();
#endif
    }
    state().backend = b;
}

void reset_backend() { state() = State(); }

std::string active_backend_name() {
    return state().backend == Backend::avx2 ? "avx2" : "scalar";
}

}  // namespace hetpanel::kernels
