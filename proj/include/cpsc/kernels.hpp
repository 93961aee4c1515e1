#pragma once

#include <cstddef>

#include "cpsc/types.hpp"

// Hot-loop primitives on interleaved complex<double> arrays.
//
// Every kernel has a scalar reference implementation and, on x86 with AVX2,
// a vectorized variant. The active variant is chosen once at startup from
// CPUID and can be overridden (see set_backend). Vector variants are
// equivalence-tested against the scalar ones; accumulation order differs,
// so agreement is to rounding, not bit-exact.

namespace cpsc::kernels {

enum class Backend { Scalar, Avx2 };

/// Backend currently routed to by the dispatching entry points.
Backend active_backend();

/// Force a backend. Returns false (and leaves the active backend alone)
/// if the requested one is not available on this machine.
bool set_backend(Backend b);

const char* backend_name(Backend b);

/// True if the CPU (and this build) support the AVX2 variants.
bool avx2_available();

// Dispatching entry points.
double squared_norm(const cd* a, std::size_t n);
double squared_norm_diff(const cd* a, const cd* b, std::size_t n);
cd dot_unconj(const cd* a, const cd* b, std::size_t n);  // sum a[i]*b[i]
cd dot_conj(const cd* a, const cd* b, std::size_t n);    // sum conj(a[i])*b[i]
void axpy(cd* y, const cd* x, cd alpha, std::size_t n);  // y += alpha*x

namespace scalar {
double squared_norm(const cd* a, std::size_t n);
double squared_norm_diff(const cd* a, const cd* b, std::size_t n);
cd dot_unconj(const cd* a, const cd* b, std::size_t n);
cd dot_conj(const cd* a, const cd* b, std::size_t n);
void axpy(cd* y, const cd* x, cd alpha, std::size_t n);
}  // namespace scalar

#if defined(CPSC_HAVE_AVX2_TU)
namespace avx2 {
double squared_norm(const cd* a, std::size_t n);
double squared_norm_diff(const cd* a, const cd* b, std::size_t n);
cd dot_unconj(const cd* a, const cd* b, std::size_t n);
cd dot_conj(const cd* a, const cd* b, std::size_t n);
void axpy(cd* y, const cd* x, cd alpha, std::size_t n);
}  // namespace avx2
#endif

}  // namespace cpsc::kernels
