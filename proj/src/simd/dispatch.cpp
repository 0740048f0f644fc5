#include "cvqkd/simd.hpp"

namespace cvqkd::simd {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

struct Dispatch {
    const detail::KernelTable* table;
    Backend backend;

    Dispatch() { select_auto(); }

    void select_auto() {
        const detail::KernelTable* avx2 = detail::avx2_table();
        if (avx2 != nullptr && cpu_has_avx2()) {
            table = avx2;
            backend = Backend::Avx2;
        } else {
            table = &detail::scalar_table();
            backend = Backend::Scalar;
        }
    }

    bool select(Backend b) {
        if (b == Backend::Scalar) {
            table = &detail::scalar_table();
            backend = Backend::Scalar;
            return true;
        }
        const detail::KernelTable* avx2 = detail::avx2_table();
        if (avx2 != nullptr && cpu_has_avx2()) {
            table = avx2;
            backend = Backend::Avx2;
            return true;
        }
        return false;
    }
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

}  // namespace

Backend active_backend() { return dispatch().backend; }

const char* backend_name() {
    return dispatch().backend == Backend::Avx2 ? "avx2" : "scalar";
}

bool set_backend(Backend b) { return dispatch().select(b); }

void set_backend_auto() { dispatch().select_auto(); }

void fir_real_taps(const cd* x, std::size_t n_out, const double* taps,
                   std::size_t n_taps, cd* y) {
    dispatch().table->fir_real_taps(x, n_out, taps, n_taps, y);
}

void fir_real_taps_strided(const cd* x, std::size_t n_out, std::size_t stride,
                           const double* taps, std::size_t n_taps, cd* y) {
    dispatch().table->fir_real_taps_strided(x, n_out, stride, taps, n_taps, y);
}

void cmul(const cd* a, const cd* b, cd* y, std::size_t n) {
    dispatch().table->cmul(a, b, y, n);
}

void cmul_conj(const cd* a, const cd* b, cd* y, std::size_t n) {
    dispatch().table->cmul_conj(a, b, y, n);
}

void scale(cd* x, double s, std::size_t n) { dispatch().table->scale(x, s, n); }

double power_sum(const cd* x, std::size_t n) { return dispatch().table->power_sum(x, n); }

cd dot_conj(const cd* a, const cd* b, std::size_t n) {
    return dispatch().table->dot_conj(a, b, n);
}

}  // namespace cvqkd::simd
