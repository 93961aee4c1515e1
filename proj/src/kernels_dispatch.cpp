#include "cpsc/kernels.hpp"

namespace cpsc::kernels {

namespace {

struct Table {
    double (*squared_norm)(const cd*, std::size_t);
    double (*squared_norm_diff)(const cd*, const cd*, std::size_t);
    cd (*dot_unconj)(const cd*, const cd*, std::size_t);
    cd (*dot_conj)(const cd*, const cd*, std::size_t);
    void (*axpy)(cd*, const cd*, cd, std::size_t);
};

constexpr Table kScalar = {scalar::squared_norm, scalar::squared_norm_diff,
                           scalar::dot_unconj, scalar::dot_conj, scalar::axpy};

#if defined(CPSC_HAVE_AVX2_TU)
constexpr Table kAvx2 = {avx2::squared_norm, avx2::squared_norm_diff,
                         avx2::dot_unconj, avx2::dot_conj, avx2::axpy};
#endif

bool detect_avx2() {
#if defined(CPSC_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

struct State {
    bool avx2_ok = detect_avx2();
    Backend active = Backend::Scalar;
    const Table* table = &kScalar;

    State() {
#if defined(CPSC_HAVE_AVX2_TU)
        if (avx2_ok) {
            active = Backend::Avx2;
            table = &kAvx2;
        }
#endif
    }
};

State& state() {
    static State s;
    return s;
}

}  // namespace

Backend active_backend() { return state().active; }

bool avx2_available() { return state().avx2_ok; }

bool set_backend(Backend b) {
    State& s = state();
    if (b == Backend::Scalar) {
        s.active = Backend::Scalar;
        s.table = &kScalar;
        return true;
    }
#if defined(CPSC_HAVE_AVX2_TU)
    if (b == Backend::Avx2 && s.avx2_ok) {
        s.active = Backend::Avx2;
        s.table = &kAvx2;
        return true;
    }
#endif
    return false;
}

const char* backend_name(Backend b) {
    return b == Backend::Avx2 ? "avx2" : "scalar";
}

double squared_norm(const cd* a, std::size_t n) { return state().table->squared_norm(a, n); }
double squared_norm_diff(const cd* a, const cd* b, std::size_t n) {
    return state().table->squared_norm_diff(a, b, n);
}
cd dot_unconj(const cd* a, const cd* b, std::size_t n) { return state().table->dot_unconj(a, b, n); }
cd dot_conj(const cd* a, const cd* b, std::size_t n) { return state().table->dot_conj(a, b, n); }
void axpy(cd* y, const cd* x, cd alpha, std::size_t n) { state().table->axpy(y, x, alpha, n); }

}  // namespace cpsc::kernels
