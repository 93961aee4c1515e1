// AVX2 variants of the complex array kernels. This translation unit is the
// only one compiled with -mavx2; dispatch guards every call behind a CPUID
// check. Layout: interleaved re/im, two complex values per 256-bit lane.

#include "cpsc/kernels.hpp"

#if defined(CPSC_HAVE_AVX2_TU)

#include <immintrin.h>

namespace cpsc::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// (sum of even lanes, sum of odd lanes) -> complex
inline cd hsum_complex(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);  // [re, im]
    alignas(16) double out[2];
    _mm_store_pd(out, lo);
    return {out[0], out[1]};
}

const __m256d kConjMask = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);

}  // namespace

double squared_norm(const cd* a, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2, p += 4) {
        __m256d v = _mm256_loadu_pd(p);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double re = a[i].real(), im = a[i].imag();
        s += re * re + im * im;
    }
    return s;
}

double squared_norm_diff(const cd* a, const cd* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2, pa += 4, pb += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(pa), _mm256_loadu_pd(pb));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double re = a[i].real() - b[i].real();
        const double im = a[i].imag() - b[i].imag();
        s += re * re + im * im;
    }
    return s;
}

namespace {

// accumulate a*b over full lanes; caller handles the tail
inline __m256d mul_acc_unconj(__m256d acc, __m256d va, __m256d vb) {
    __m256d br = _mm256_movedup_pd(vb);          // [br0, br0, br1, br1]
    __m256d bi = _mm256_permute_pd(vb, 0xF);     // [bi0, bi0, bi1, bi1]
    __m256d as = _mm256_permute_pd(va, 0x5);     // [ai0, ar0, ai1, ar1]
    // addsub(a*br, as*bi) = [ar*br - ai*bi, ai*br + ar*bi]
    return _mm256_add_pd(acc, _mm256_addsub_pd(_mm256_mul_pd(va, br),
                                               _mm256_mul_pd(as, bi)));
}

}  // namespace

cd dot_unconj(const cd* a, const cd* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2, pa += 4, pb += 4)
        acc = mul_acc_unconj(acc, _mm256_loadu_pd(pa), _mm256_loadu_pd(pb));
    cd s = hsum_complex(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

cd dot_conj(const cd* a, const cd* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2, pa += 4, pb += 4) {
        __m256d va = _mm256_xor_pd(_mm256_loadu_pd(pa), kConjMask);
        acc = mul_acc_unconj(acc, va, _mm256_loadu_pd(pb));
    }
    cd s = hsum_complex(acc);
    for (; i < n; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

void axpy(cd* y, const cd* x, cd alpha, std::size_t n) {
    double* py = reinterpret_cast<double*>(y);
    const double* px = reinterpret_cast<const double*>(x);
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2, px += 4, py += 4) {
        __m256d vx = _mm256_loadu_pd(px);
        __m256d xs = _mm256_permute_pd(vx, 0x5);
        // [xr*ar - xi*ai, xi*ar + xr*ai]
        __m256d prod = _mm256_addsub_pd(_mm256_mul_pd(vx, ar), _mm256_mul_pd(xs, ai));
        _mm256_storeu_pd(py, _mm256_add_pd(_mm256_loadu_pd(py), prod));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace cpsc::kernels::avx2

#endif  // CPSC_HAVE_AVX2_TU
