#include "cpsc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "cpsc/kernels.hpp"

namespace cpsc::numerics {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

cvec cyclic_shift(const cvec& x, long shift) {
    const long n = static_cast<long>(x.size());
    if (n == 0) return {};
    long s = shift % n;
    if (s < 0) s += n;
    cvec out(x.size());
    for (long i = 0; i < n; ++i) out[(i + s) % n] = x[i];
    return out;
}

CirculantMatrix::CirculantMatrix(cvec generator) : gen_(std::move(generator)) {
    if (gen_.empty()) throw std::invalid_argument("circulant: empty generator");
}

cd CirculantMatrix::at(std::size_t i, std::size_t j) const {
    const std::size_t n = gen_.size();
    if (i >= n || j >= n) throw std::out_of_range("circulant: index");
    return gen_[(i + n - j) % n];
}

cvec CirculantMatrix::multiply(const cvec& v) const {
    const std::size_t n = gen_.size();
    if (v.size() != n) throw std::invalid_argument("circulant: size mismatch");
    cvec y(n, cd(0.0, 0.0));
    // column j is the generator delayed by j: two contiguous runs
    for (std::size_t j = 0; j < n; ++j) {
        if (v[j] == cd(0.0, 0.0)) continue;
        kernels::axpy(y.data(), gen_.data() + (n - j), v[j], j);
        kernels::axpy(y.data() + j, gen_.data(), v[j], n - j);
    }
    return y;
}

cvec CirculantMatrix::multiply_conj_transpose(const cvec& v) const {
    const std::size_t n = gen_.size();
    cvec h(n);
    for (std::size_t k = 0; k < n; ++k) h[k] = std::conj(gen_[(n - k) % n]);
    return CirculantMatrix(std::move(h)).multiply(v);
}

CMatrix CirculantMatrix::dense() const {
    const std::size_t n = gen_.size();
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = gen_[(i + n - j) % n];
    return m;
}

cvec CirculantMatrix::eigenvalues() const { return dft_plain(gen_); }

namespace {

// Forward-DFT coefficient matrix for size n, entries e^{-j2pi kn/N} taken
// from one period table so the exact symmetries survive rounding.
const CMatrix& dft_matrix(std::size_t n) {
    thread_local std::map<std::size_t, std::unique_ptr<CMatrix>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return *it->second;
    cvec w(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double ang = -2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
        w[j] = cd(std::cos(ang), std::sin(ang));
    }
    auto m = std::make_unique<CMatrix>(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t t = 0; t < n; ++t) (*m)(k, t) = w[(k * t) % n];
    return *cache.emplace(n, std::move(m)).first->second;
}

}  // namespace

cvec dft_plain(const cvec& x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    const CMatrix& m = dft_matrix(n);
    cvec out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = kernels::dot_unconj(m.row(k), x.data(), n);
    return out;
}

cvec idft_plain(const cvec& x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    const CMatrix& m = dft_matrix(n);
    cvec out(n);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = kernels::dot_conj(m.row(k), x.data(), n) * inv;
    return out;
}

cvec dft_unitary(const cvec& x) {
    cvec out = dft_plain(x);
    const double s = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (cd& v : out) v *= s;
    return out;
}

cvec idft_unitary(const cvec& x) {
    cvec out = idft_plain(x);
    const double s = std::sqrt(static_cast<double>(x.size()));
    for (cd& v : out) v *= s;
    return out;
}

namespace {

double off_diagonal_norm(const CMatrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) acc += std::norm(a(i, j));
    return std::sqrt(acc);
}

}  // namespace

EigResult hermitian_eig(const CMatrix& input) {
    const std::size_t n = input.rows();
    if (n == 0 || input.cols() != n) throw std::invalid_argument("hermitian_eig: not square");

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(input(i, j)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(input(i, j) - std::conj(input(j, i))) > 1e-8 * (1.0 + scale))
                throw std::invalid_argument("hermitian_eig: input not Hermitian");

    CMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (input(i, j) + std::conj(input(j, i)));

    CMatrix v = CMatrix::identity(n);
    const double tol = 1e-14 * (1.0 + scale) * static_cast<double>(n);

    for (int sweep = 0; sweep < 100 && off_diagonal_norm(a) > tol; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cd apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= 1e-300) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                const cd phase = apq / r;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double sgn = tau >= 0.0 ? 1.0 : -1.0;
                const double t = sgn / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // A <- J^H (A J), J the (p,q) plane rotation with phase
                for (std::size_t i = 0; i < n; ++i) {
                    const cd ap = a(i, p), aq = a(i, q);
                    a(i, p) = c * ap - s * std::conj(phase) * aq;
                    a(i, q) = s * phase * ap + c * aq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const cd ap = a(p, j), aq = a(q, j);
                    a(p, j) = c * ap - s * phase * aq;
                    a(q, j) = s * std::conj(phase) * ap + c * aq;
                }
                a(p, q) = a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();

                for (std::size_t i = 0; i < n; ++i) {
                    const cd vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * std::conj(phase) * vq;
                    v(i, q) = s * phase * vp + c * vq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() > a(y, y).real();
    });

    EigResult res;
    res.eigenvalues.resize(n);
    res.u = CMatrix(n, n);
    for (std::size_t l = 0; l < n; ++l) {
        res.eigenvalues[l] = a(order[l], order[l]).real();
        for (std::size_t i = 0; i < n; ++i) res.u(l, i) = std::conj(v(i, order[l]));
    }
    return res;
}

CMatrix gram(const CMatrix& b) {
    const std::size_t rows = b.rows(), cols = b.cols();
    CMatrix g(cols, cols);
    for (std::size_t i = 0; i < cols; ++i) {
        for (std::size_t j = i; j < cols; ++j) {
            cd acc = 0.0;
            for (std::size_t k = 0; k < rows; ++k) acc += std::conj(b(k, i)) * b(k, j);
            g(i, j) = acc;
            g(j, i) = std::conj(acc);
        }
    }
    return g;
}

}  // namespace cpsc::numerics
