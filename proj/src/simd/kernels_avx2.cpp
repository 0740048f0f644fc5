// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma and must only be reached through the dispatch table after a
// cpuid check. Complex doubles are processed as interleaved re/im lanes,
// two complex values per 256-bit register.

#include "cvqkd/simd.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace cvqkd::simd::detail {

namespace {

void fir_real_taps_avx2(const cd* x, std::size_t n_out, const double* taps,
                        std::size_t n_taps, cd* y) {
    const double* xd = reinterpret_cast<const double*>(x);
    std::size_t i = 0;
    // Four complex outputs per iteration, interleaved accumulate.
    for (; i + 4 <= n_out; i += 4) {
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        const double* xi = xd + 2 * i;
        for (std::size_t k = 0; k < n_taps; ++k) {
            const __m256d t = _mm256_set1_pd(taps[k]);
            acc0 = _mm256_fmadd_pd(t, _mm256_loadu_pd(xi + 2 * k), acc0);
            acc1 = _mm256_fmadd_pd(t, _mm256_loadu_pd(xi + 2 * k + 4), acc1);
        }
        _mm256_storeu_pd(reinterpret_cast<double*>(y + i), acc0);
        _mm256_storeu_pd(reinterpret_cast<double*>(y + i + 2), acc1);
    }
    for (; i < n_out; ++i) {
        double re = 0.0, im = 0.0;
        const cd* xi = x + i;
        for (std::size_t k = 0; k < n_taps; ++k) {
            re += taps[k] * xi[k].real();
            im += taps[k] * xi[k].imag();
        }
        y[i] = {re, im};
    }
}

void fir_real_taps_strided_avx2(const cd* x, std::size_t n_out, std::size_t stride,
                                const double* taps, std::size_t n_taps, cd* y) {
    // Output points read disjoint strided windows; vectorize along taps.
    for (std::size_t i = 0; i < n_out; ++i) {
        const double* xi = reinterpret_cast<const double*>(x + i * stride);
        __m256d acc = _mm256_setzero_pd();
        std::size_t k = 0;
        for (; k + 2 <= n_taps; k += 2) {
            const __m256d t =
                _mm256_set_pd(taps[k + 1], taps[k + 1], taps[k], taps[k]);
            acc = _mm256_fmadd_pd(t, _mm256_loadu_pd(xi + 2 * k), acc);
        }
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, acc);
        double re = lanes[0] + lanes[2];
        double im = lanes[1] + lanes[3];
        for (; k < n_taps; ++k) {
            re += taps[k] * xi[2 * k];
            im += taps[k] * xi[2 * k + 1];
        }
        y[i] = {re, im};
    }
}

void cmul_avx2(const cd* a, const cd* b, cd* y, std::size_t n) {
    const double* ad = reinterpret_cast<const double*>(a);
    const double* bd = reinterpret_cast<const double*>(b);
    double* yd = reinterpret_cast<double*>(y);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(ad + 2 * i);
        const __m256d vb = _mm256_loadu_pd(bd + 2 * i);
        const __m256d b_re = _mm256_movedup_pd(vb);
        const __m256d b_im = _mm256_permute_pd(vb, 0xF);
        const __m256d a_sw = _mm256_permute_pd(va, 0x5);
        // (a_re*b_re - a_im*b_im, a_im*b_re + a_re*b_im)
        const __m256d r = _mm256_fmaddsub_pd(va, b_re, _mm256_mul_pd(a_sw, b_im));
        _mm256_storeu_pd(yd + 2 * i, r);
    }
    for (; i < n; ++i) y[i] = a[i] * b[i];
}

void cmul_conj_avx2(const cd* a, const cd* b, cd* y, std::size_t n) {
    const double* ad = reinterpret_cast<const double*>(a);
    const double* bd = reinterpret_cast<const double*>(b);
    double* yd = reinterpret_cast<double*>(y);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(ad + 2 * i);
        const __m256d vb = _mm256_loadu_pd(bd + 2 * i);
        const __m256d b_re = _mm256_movedup_pd(vb);
        const __m256d b_im = _mm256_permute_pd(vb, 0xF);
        const __m256d a_sw = _mm256_permute_pd(va, 0x5);
        // (a_re*b_re + a_im*b_im, a_im*b_re - a_re*b_im)
        const __m256d r = _mm256_fmsubadd_pd(va, b_re, _mm256_mul_pd(a_sw, b_im));
        _mm256_storeu_pd(yd + 2 * i, r);
    }
    for (; i < n; ++i) {
        const double re = a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        const double im = a[i].imag() * b[i].real() - a[i].real() * b[i].imag();
        y[i] = {re, im};
    }
}

void scale_avx2(cd* x, double s, std::size_t n) {
    double* xd = reinterpret_cast<double*>(x);
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        _mm256_storeu_pd(xd + 2 * i, _mm256_mul_pd(vs, _mm256_loadu_pd(xd + 2 * i)));
    }
    for (; i < n; ++i) x[i] *= s;
}

double power_sum_avx2(const cd* x, std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d v = _mm256_loadu_pd(xd + 2 * i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double out = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i)
        out += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return out;
}

cd dot_conj_avx2(const cd* a, const cd* b, std::size_t n) {
    const double* ad = reinterpret_cast<const double*>(a);
    const double* bd = reinterpret_cast<const double*>(b);
    __m256d acc_re = _mm256_setzero_pd();  // pairwise products a.*b
    __m256d acc_im = _mm256_setzero_pd();  // pairwise products a.*swap(b)
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(ad + 2 * i);
        const __m256d vb = _mm256_loadu_pd(bd + 2 * i);
        acc_re = _mm256_fmadd_pd(va, vb, acc_re);
        acc_im = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0x5), acc_im);
    }
    alignas(32) double re4[4], im4[4];
    _mm256_store_pd(re4, acc_re);
    _mm256_store_pd(im4, acc_im);
    // re: a_re*b_re + a_im*b_im ; im: a_im*b_re - a_re*b_im
    double re = re4[0] + re4[1] + re4[2] + re4[3];
    double im = (im4[1] - im4[0]) + (im4[3] - im4[2]);
    for (; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].imag() * b[i].real() - a[i].real() * b[i].imag();
    }
    return {re, im};
}

}  // namespace

const KernelTable* avx2_table() {
    static const KernelTable table = {
        fir_real_taps_avx2, fir_real_taps_strided_avx2, cmul_avx2,
        cmul_conj_avx2,     scale_avx2,                 power_sum_avx2,
        dot_conj_avx2,
    };
    return &table;
}

}  // namespace cvqkd::simd::detail

#else

namespace cvqkd::simd::detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace cvqkd::simd::detail

#endif
