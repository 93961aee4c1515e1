#include "cpsc/detection.hpp"

#include <algorithm>
#include <cmath>

#include "cpsc/kernels.hpp"
#include "cpsc/numerics.hpp"

namespace cpsc::detection {

namespace {

int bits_for_order(int m_order) {
    int b = 0;
    for (int v = m_order; v > 1; v >>= 1) ++b;
    return b;
}

// Lexicographic base-M counter over symbol position indices, mutating the
// symbol vector in place. Enumeration order defines the ML tie-break.
struct CandidateEnum {
    CandidateEnum(std::size_t n, int m_order)
        : m(m_order), points(transceiver::constellation(m_order)), digits(n, 0),
          symbols(n, points[0]) {}

    bool next() {
        for (std::size_t i = digits.size(); i-- > 0;) {
            if (++digits[i] < m) {
                symbols[i] = points[static_cast<std::size_t>(digits[i])];
                return true;
            }
            digits[i] = 0;
            symbols[i] = points[0];
        }
        return false;
    }

    std::vector<std::uint8_t> bits() const {
        const int bps = bits_for_order(m);
        std::vector<std::uint8_t> out(digits.size() * static_cast<std::size_t>(bps));
        for (std::size_t s = 0; s < digits.size(); ++s) {
            const std::uint32_t word = transceiver::gray_code(static_cast<std::uint32_t>(digits[s]));
            for (int b = 0; b < bps; ++b)
                out[s * bps + b] = static_cast<std::uint8_t>((word >> (bps - 1 - b)) & 1u);
        }
        return out;
    }

    int m;
    cvec points;
    std::vector<int> digits;
    cvec symbols;
};

double residual_metric(const cvec& y, const CMatrix& g_rows, const cvec& x, cvec& scratch) {
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i)
        scratch[i] = kernels::dot_unconj(g_rows.row(i), x.data(), n);
    return kernels::squared_norm_diff(y.data(), scratch.data(), n);
}

void check_capacity(double total) {
    if (total > static_cast<double>(1u << 20))
        throw CapacityError("detector: candidate space exceeds 2^20");
}

}  // namespace

DetectionResult ml_detect(const cvec& y, const cvec& g_eq, int m_order) {
    const std::size_t n = y.size();
    if (g_eq.size() != n || n == 0) throw std::invalid_argument("ml_detect: length mismatch");
    check_capacity(std::pow(static_cast<double>(m_order), static_cast<double>(n)));

    const CMatrix g_rows = numerics::CirculantMatrix(g_eq).dense();
    CandidateEnum cand(n, m_order);
    cvec scratch(n);

    DetectionResult res;
    double best = 0.0;
    std::vector<int> best_digits;
    do {
        const double metric = residual_metric(y, g_rows, cand.symbols, scratch);
        ++res.candidates;
        if (res.candidates == 1 || metric < best) {
            best = metric;
            best_digits = cand.digits;
        }
    } while (cand.next());

    CandidateEnum rebuilt(n, m_order);
    rebuilt.digits = best_digits;
    for (std::size_t i = 0; i < n; ++i)
        rebuilt.symbols[i] = rebuilt.points[static_cast<std::size_t>(best_digits[i])];
    res.bits = rebuilt.bits();
    res.symbols = rebuilt.symbols;
    res.metric = best;
    return res;
}

cvec fd_equalize(const cvec& y, const cvec& g_eq, double n0, Equalizer eq) {
    const std::size_t n = y.size();
    if (g_eq.size() != n || n == 0) throw std::invalid_argument("fd_equalize: length mismatch");
    if (n0 < 0.0) throw std::invalid_argument("fd_equalize: n0 >= 0");

    const cvec lambda = numerics::dft_plain(g_eq);
    cvec yf = numerics::dft_plain(y);
    double max_mag = 0.0;
    for (const cd& v : lambda) max_mag = std::max(max_mag, std::abs(v));
    const double floor_mag = 1e-12 * std::max(1.0, max_mag);

    if (eq == Equalizer::Zf || n0 == 0.0) {
        for (std::size_t k = 0; k < n; ++k) {
            if (std::abs(lambda[k]) < floor_mag)
                throw SingularityError("fd_equalize: channel bin below threshold");
            yf[k] /= lambda[k];
        }
    } else {
        for (std::size_t k = 0; k < n; ++k)
            yf[k] *= std::conj(lambda[k]) / (std::norm(lambda[k]) + n0);
    }
    return numerics::idft_plain(yf);
}

DetectionResult linear_detect(const cvec& y, const cvec& g_eq, double n0,
                              Equalizer eq, int m_order) {
    DetectionResult res;
    const cvec x_eq = fd_equalize(y, g_eq, n0, eq);
    res.bits = transceiver::psk_demodulate(x_eq, m_order);
    res.symbols = transceiver::psk_modulate(res.bits, m_order);
    res.candidates = 1;
    return res;
}

DetectionResult im_ml_detect(const cvec& y, const std::vector<cvec>& g_eq_per_perm,
                             const transceiver::PermutationCode& code, int m_order) {
    const std::size_t n = y.size();
    if (g_eq_per_perm.size() != code.size())
        throw std::invalid_argument("im_ml_detect: one CIR per codebook entry required");
    check_capacity(static_cast<double>(code.size()) *
                   std::pow(static_cast<double>(m_order), static_cast<double>(n)));
    const bool anchored = code.bits() >= 1;

    DetectionResult res;
    double best = 0.0;
    long best_k = -1;
    std::vector<int> best_digits;
    cvec scratch(n);

    for (std::size_t k = 0; k < code.size(); ++k) {
        if (g_eq_per_perm[k].size() != n)
            throw std::invalid_argument("im_ml_detect: CIR length mismatch");
        const CMatrix g_rows = numerics::CirculantMatrix(g_eq_per_perm[k]).dense();
        CandidateEnum cand(n, m_order);
        do {
            cvec block = cand.symbols;
            if (anchored) block = transceiver::apply_anchor(block, m_order);
            const double metric = residual_metric(y, g_rows, block, scratch);
            ++res.candidates;
            if (res.candidates == 1 || metric < best) {
                best = metric;
                best_k = static_cast<long>(k);
                best_digits = cand.digits;
            }
        } while (cand.next());
    }

    CandidateEnum rebuilt(n, m_order);
    rebuilt.digits = best_digits;
    for (std::size_t i = 0; i < n; ++i)
        rebuilt.symbols[i] = rebuilt.points[static_cast<std::size_t>(best_digits[i])];
    res.metric = best;
    res.im_index = best_k;
    res.symbols = rebuilt.symbols;
    res.bits = code.decode(static_cast<std::size_t>(best_k));
    const auto data_bits = rebuilt.bits();
    res.bits.insert(res.bits.end(), data_bits.begin(), data_bits.end());
    return res;
}

DetectionResult im_lc_detect(const cvec& y, const std::vector<cvec>& g_eq_per_perm,
                             const transceiver::PermutationCode& code, int m_order,
                             double n0) {
    const std::size_t n = y.size();
    if (g_eq_per_perm.size() != code.size())
        throw std::invalid_argument("im_lc_detect: one CIR per codebook entry required");
    const bool anchored = code.bits() >= 1;

    DetectionResult res;
    double best = 0.0;
    long best_k = -1;
    std::vector<std::uint8_t> best_bits;
    cvec best_symbols;

    for (std::size_t k = 0; k < code.size(); ++k) {
        const cvec& g_k = g_eq_per_perm[k];
        if (g_k.size() != n) throw std::invalid_argument("im_lc_detect: CIR length mismatch");
        cvec x_eq = fd_equalize(y, g_k, n0, Equalizer::Mmse);
        if (anchored) x_eq = transceiver::remove_anchor(x_eq, m_order);
        const auto bits = transceiver::psk_demodulate(x_eq, m_order);
        cvec rebuilt = transceiver::psk_modulate(bits, m_order);
        cvec tx = anchored ? transceiver::apply_anchor(rebuilt, m_order) : rebuilt;
        const cvec z = numerics::CirculantMatrix(tx).multiply(g_k);
        const double metric = kernels::squared_norm_diff(y.data(), z.data(), n);
        ++res.candidates;
        if (res.candidates == 1 || metric < best) {
            best = metric;
            best_k = static_cast<long>(k);
            best_bits = bits;
            best_symbols = std::move(rebuilt);
        }
    }

    res.metric = best;
    res.im_index = best_k;
    res.symbols = best_symbols;
    res.bits = code.decode(static_cast<std::size_t>(best_k));
    res.bits.insert(res.bits.end(), best_bits.begin(), best_bits.end());
    return res;
}

}  // namespace cpsc::detection
