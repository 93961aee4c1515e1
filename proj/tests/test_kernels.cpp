#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "cpsc/kernels.hpp"
#include "oracles.hpp"

using cpsc::cd;
using cpsc::cvec;
namespace k = cpsc::kernels;

namespace {

// long-double accumulation as the reference
double ref_squared_norm(const cvec& x) {
    long double acc = 0.0L;
    for (const cd& v : x) acc += (long double)v.real() * v.real() + (long double)v.imag() * v.imag();
    return static_cast<double>(acc);
}

cd ref_dot_unconj(const cvec& a, const cvec& b) {
    std::complex<long double> acc = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += std::complex<long double>(a[i]) * std::complex<long double>(b[i]);
    return cd(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
}

cd ref_dot_conj(const cvec& a, const cvec& b) {
    std::complex<long double> acc = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += std::conj(std::complex<long double>(a[i])) * std::complex<long double>(b[i]);
    return cd(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
}

struct BackendGuard {
    ~BackendGuard() { k::set_backend(k::avx2_available() ? k::Backend::Avx2 : k::Backend::Scalar); }
};

}  // namespace

TEST_CASE("scalar kernels match long-double references") {
    std::mt19937_64 rng(77);
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{2}, std::size_t{3},
                          std::size_t{4}, std::size_t{5}, std::size_t{7}, std::size_t{8},
                          std::size_t{15}, std::size_t{16}, std::size_t{31}, std::size_t{33},
                          std::size_t{64}, std::size_t{65}}) {
        const cvec a = oracles::random_complex(n, rng);
        const cvec b = oracles::random_complex(n, rng);
        const double scale = std::max(1.0, ref_squared_norm(a));

        CHECK(k::scalar::squared_norm(a.data(), n) ==
              doctest::Approx(ref_squared_norm(a)).epsilon(1e-13));

        cvec diff(n);
        for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];
        CHECK(k::scalar::squared_norm_diff(a.data(), b.data(), n) ==
              doctest::Approx(ref_squared_norm(diff)).epsilon(1e-12));

        CHECK(std::abs(k::scalar::dot_unconj(a.data(), b.data(), n) - ref_dot_unconj(a, b)) <=
              1e-12 * scale);
        CHECK(std::abs(k::scalar::dot_conj(a.data(), b.data(), n) - ref_dot_conj(a, b)) <=
              1e-12 * scale);

        cvec y = b;
        const cd alpha(0.37, -1.21);
        k::scalar::axpy(y.data(), a.data(), alpha, n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(y[i] - (b[i] + alpha * a[i])) <= 1e-13 * std::max(1.0, std::abs(y[i])));
    }
}

TEST_CASE("dot_conj of a vector with itself equals its squared norm") {
    std::mt19937_64 rng(5);
    const cvec a = oracles::random_complex(33, rng);
    const cd d = k::scalar::dot_conj(a.data(), a.data(), a.size());
    CHECK(d.real() == doctest::Approx(k::scalar::squared_norm(a.data(), a.size())).epsilon(1e-13));
    CHECK(std::abs(d.imag()) <= 1e-12);
}

#ifdef CPSC_HAVE_AVX2_TU
TEST_CASE("avx2 kernels match scalar kernels at all alignments and tails") {
    if (!k::avx2_available()) return;  // host without AVX2: nothing to compare
    std::mt19937_64 rng(901);
    for (std::size_t n = 0; n <= 65; ++n) {
        const cvec a = oracles::random_complex(n, rng);
        const cvec b = oracles::random_complex(n, rng);
        const double scale = std::max(1.0, ref_squared_norm(a));

        CHECK(k::avx2::squared_norm(a.data(), n) ==
              doctest::Approx(k::scalar::squared_norm(a.data(), n)).epsilon(1e-12));
        CHECK(k::avx2::squared_norm_diff(a.data(), b.data(), n) ==
              doctest::Approx(k::scalar::squared_norm_diff(a.data(), b.data(), n)).epsilon(1e-12));
        CHECK(std::abs(k::avx2::dot_unconj(a.data(), b.data(), n) -
                       k::scalar::dot_unconj(a.data(), b.data(), n)) <= 1e-12 * scale);
        CHECK(std::abs(k::avx2::dot_conj(a.data(), b.data(), n) -
                       k::scalar::dot_conj(a.data(), b.data(), n)) <= 1e-12 * scale);

        cvec y1 = b, y2 = b;
        const cd alpha(-0.93, 0.42);
        k::scalar::axpy(y1.data(), a.data(), alpha, n);
        k::avx2::axpy(y2.data(), a.data(), alpha, n);
        CHECK(oracles::max_abs_diff(y1, y2) <= 1e-12 * scale);
    }
}
#endif

TEST_CASE("backend selection is honoured by the dispatch layer") {
    BackendGuard guard;
    REQUIRE(k::set_backend(k::Backend::Scalar));
    CHECK(k::active_backend() == k::Backend::Scalar);
    CHECK(std::string(k::backend_name(k::active_backend())) == "scalar");

    std::mt19937_64 rng(42);
    const cvec a = oracles::random_complex(19, rng);
    const double via_scalar = k::squared_norm(a.data(), a.size());
    CHECK(via_scalar == doctest::Approx(k::scalar::squared_norm(a.data(), a.size())));

    if (k::avx2_available()) {
        REQUIRE(k::set_backend(k::Backend::Avx2));
        CHECK(k::active_backend() == k::Backend::Avx2);
        CHECK(std::string(k::backend_name(k::active_backend())) == "avx2");
        CHECK(k::squared_norm(a.data(), a.size()) ==
              doctest::Approx(via_scalar).epsilon(1e-13));
    } else {
        CHECK_FALSE(k::set_backend(k::Backend::Avx2));
        CHECK(k::active_backend() == k::Backend::Scalar);
    }
}

TEST_CASE("kernels handle empty input") {
    CHECK(k::squared_norm(nullptr, 0) == 0.0);
    CHECK(k::squared_norm_diff(nullptr, nullptr, 0) == 0.0);
    CHECK(k::dot_unconj(nullptr, nullptr, 0) == cd(0.0, 0.0));
    CHECK(k::dot_conj(nullptr, nullptr, 0) == cd(0.0, 0.0));
}
