#include "cpsc/kernels.hpp"

namespace cpsc::kernels::scalar {

double squared_norm(const cd* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double re = a[i].real(), im = a[i].imag();
        acc += re * re + im * im;
    }
    return acc;
}

double squared_norm_diff(const cd* a, const cd* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double re = a[i].real() - b[i].real();
        const double im = a[i].imag() - b[i].imag();
        acc += re * re + im * im;
    }
    return acc;
}

cd dot_unconj(const cd* a, const cd* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
    }
    return {re, im};
}

cd dot_conj(const cd* a, const cd* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

void axpy(cd* y, const cd* x, cd alpha, std::size_t n) {
    const double ar = alpha.real(), ai = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += cd(ar * xr - ai * xi, ar * xi + ai * xr);
    }
}

}  // namespace cpsc::kernels::scalar
