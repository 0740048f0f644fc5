#include "cvqkd/simd.hpp"

namespace cvqkd::simd::detail {

namespace {

void fir_real_taps_scalar(const cd* x, std::size_t n_out, const double* taps,
                          std::size_t n_taps, cd* y) {
    for (std::size_t i = 0; i < n_out; ++i) {
        double re = 0.0, im = 0.0;
        const cd* xi = x + i;
        for (std::size_t k = 0; k < n_taps; ++k) {
            re += taps[k] * xi[k].real();
            im += taps[k] * xi[k].imag();
        }
        y[i] = {re, im};
    }
}

void fir_real_taps_strided_scalar(const cd* x, std::size_t n_out, std::size_t stride,
                                  const double* taps, std::size_t n_taps, cd* y) {
    for (std::size_t i = 0; i < n_out; ++i) {
        double re = 0.0, im = 0.0;
        const cd* xi = x + i * stride;
        for (std::size_t k = 0; k < n_taps; ++k) {
            re += taps[k] * xi[k].real();
            im += taps[k] * xi[k].imag();
        }
        y[i] = {re, im};
    }
}

void cmul_scalar(const cd* a, const cd* b, cd* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = a[i] * b[i];
}

void cmul_conj_scalar(const cd* a, const cd* b, cd* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double re = a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        const double im = a[i].imag() * b[i].real() - a[i].real() * b[i].imag();
        y[i] = {re, im};
    }
}

void scale_scalar(cd* x, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= s;
}

double power_sum_scalar(const cd* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return acc;
}

cd dot_conj_scalar(const cd* a, const cd* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].imag() * b[i].real() - a[i].real() * b[i].imag();
    }
    return {re, im};
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table = {
        fir_real_taps_scalar, fir_real_taps_strided_scalar, cmul_scalar,
        cmul_conj_scalar,     scale_scalar,                 power_sum_scalar,
        dot_conj_scalar,
    };
    return table;
}

}  // namespace cvqkd::simd::detail
