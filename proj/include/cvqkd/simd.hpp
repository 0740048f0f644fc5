#pragma once

// Runtime-dispatched arithmetic kernels for the waveform path. Every kernel
// has a scalar reference implementation and (on x86-64 with AVX2+FMA) a
// vectorized variant; the active backend is chosen once at startup and can
// be forced for equivalence testing. Complex data is interleaved
// std::complex<double>.

#include <complex>
#include <cstddef>

namespace cvqkd::simd {

using cd = std::complex<double>;

enum class Backend { Scalar, Avx2 };

// Backend selected at startup (AVX2 when the CPU supports it).
Backend active_backend();
const char* backend_name();

// Force a backend; returns false (and leaves the selection unchanged) if the
// requested backend is not available on this machine.
bool set_backend(Backend b);
void set_backend_auto();

// Valid-mode FIR with real taps on complex data:
//   y[i] = sum_k taps[k] * x[i + k],  i in [0, n_out)
// Caller guarantees x has n_out + n_taps - 1 readable elements.
void fir_real_taps(const cd* x, std::size_t n_out, const double* taps,
                   std::size_t n_taps, cd* y);

// Strided variant used by polyphase filters: reads x[i*stride + k].
void fir_real_taps_strided(const cd* x, std::size_t n_out, std::size_t stride,
                           const double* taps, std::size_t n_taps, cd* y);

// y[i] = a[i] * b[i]
void cmul(const cd* a, const cd* b, cd* y, std::size_t n);

// y[i] = a[i] * conj(b[i])
void cmul_conj(const cd* a, const cd* b, cd* y, std::size_t n);

// x[i] *= s
void scale(cd* x, double s, std::size_t n);

// sum_i |x[i]|^2
double power_sum(const cd* x, std::size_t n);

// sum_i a[i] * conj(b[i])
cd dot_conj(const cd* a, const cd* b, std::size_t n);

namespace detail {

struct KernelTable {
    void (*fir_real_taps)(const cd*, std::size_t, const double*, std::size_t, cd*);
    void (*fir_real_taps_strided)(const cd*, std::size_t, std::size_t, const double*,
                                  std::size_t, cd*);
    void (*cmul)(const cd*, const cd*, cd*, std::size_t);
    void (*cmul_conj)(const cd*, const cd*, cd*, std::size_t);
    void (*scale)(cd*, double, std::size_t);
    double (*power_sum)(const cd*, std::size_t);
    cd (*dot_conj)(const cd*, const cd*, std::size_t);
};

const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when unavailable

}  // namespace detail

}  // namespace cvqkd::simd
