#include "cpsc/transceiver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cpsc/numerics.hpp"

namespace cpsc::transceiver {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

int bits_for_order(int m_order) {
    if (m_order < 2 || (m_order & (m_order - 1)) != 0)
        throw std::invalid_argument("psk: order must be a power of two >= 2");
    int b = 0;
    for (int v = m_order; v > 1; v >>= 1) ++b;
    return b;
}

}  // namespace

cvec constellation(int m_order) {
    bits_for_order(m_order);
    cvec pts(static_cast<std::size_t>(m_order));
    for (int i = 0; i < m_order; ++i) {
        const double ang = kTwoPi * i / m_order;
        pts[i] = cd(std::cos(ang), std::sin(ang));
    }
    return pts;
}

std::uint32_t gray_code(std::uint32_t n) { return n ^ (n >> 1); }

std::uint32_t gray_decode(std::uint32_t v) {
    v ^= v >> 16;
    v ^= v >> 8;
    v ^= v >> 4;
    v ^= v >> 2;
    v ^= v >> 1;
    return v;
}

cvec psk_modulate(const std::vector<std::uint8_t>& bits, int m_order) {
    const int bps = bits_for_order(m_order);
    if (bits.size() % static_cast<std::size_t>(bps) != 0)
        throw std::invalid_argument("psk_modulate: bit count not a multiple of log2(M)");
    const cvec pts = constellation(m_order);
    cvec out(bits.size() / bps);
    for (std::size_t s = 0; s < out.size(); ++s) {
        std::uint32_t word = 0;
        for (int b = 0; b < bps; ++b) word = (word << 1) | (bits[s * bps + b] & 1u);
        out[s] = pts[gray_decode(word)];
    }
    return out;
}

std::vector<std::uint8_t> psk_demodulate(const cvec& symbols, int m_order) {
    const int bps = bits_for_order(m_order);
    std::vector<std::uint8_t> bits(symbols.size() * bps);
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        // nearest point on the unit circle = nearest phase
        long k = std::lround(std::arg(symbols[s]) * m_order / kTwoPi);
        k %= m_order;
        if (k < 0) k += m_order;
        const std::uint32_t word = gray_code(static_cast<std::uint32_t>(k));
        for (int b = 0; b < bps; ++b)
            bits[s * bps + b] = static_cast<std::uint8_t>((word >> (bps - 1 - b)) & 1u);
    }
    return bits;
}

cvec add_cp(const cvec& x, int cp_len) {
    if (cp_len < 1 || static_cast<std::size_t>(cp_len) >= x.size())
        throw std::invalid_argument("add_cp: need 0 < cp_len < block length");
    cvec out;
    out.reserve(x.size() + cp_len);
    out.insert(out.end(), x.end() - cp_len, x.end());
    out.insert(out.end(), x.begin(), x.end());
    return out;
}

cvec remove_cp(const cvec& x_cp, int cp_len) {
    if (cp_len < 1 || static_cast<std::size_t>(cp_len) >= x_cp.size())
        throw std::invalid_argument("remove_cp: need 0 < cp_len < prefixed length");
    return cvec(x_cp.begin() + cp_len, x_cp.end());
}

std::vector<std::vector<double>> ris_phase_profile(const cvec& x_cp,
                                                   const std::vector<int>& delays,
                                                   int cp_len) {
    for (const cd& v : x_cp)
        if (std::abs(std::abs(v) - 1.0) > 1e-9)
            throw std::invalid_argument("ris_phase_profile: block must be unit modulus");
    const cvec x = remove_cp(x_cp, cp_len);
    std::vector<std::vector<double>> out;
    out.reserve(delays.size());
    for (int d : delays) {
        const cvec shifted_cp = add_cp(numerics::cyclic_shift(x, d), cp_len);
        std::vector<double> theta(x_cp.size());
        for (std::size_t i = 0; i < x_cp.size(); ++i) {
            double t = std::arg(shifted_cp[i]) - std::arg(x_cp[i]);
            t = std::fmod(t, kTwoPi);
            if (t < 0.0) t += kTwoPi;
            theta[i] = t;
        }
        out.push_back(std::move(theta));
    }
    return out;
}

cvec apply_phase_profile(const cvec& x_cp, const std::vector<double>& theta) {
    if (theta.size() != x_cp.size())
        throw std::invalid_argument("apply_phase_profile: length mismatch");
    cvec out(x_cp.size());
    for (std::size_t i = 0; i < x_cp.size(); ++i)
        out[i] = x_cp[i] * cd(std::cos(theta[i]), std::sin(theta[i]));
    return out;
}

cvec apply_anchor(const cvec& x, int m_order) {
    if (x.empty()) throw std::invalid_argument("apply_anchor: empty block");
    bits_for_order(m_order);
    cvec out = x;
    const double ang = kPi / m_order;
    out[0] *= cd(std::cos(ang), std::sin(ang));
    return out;
}

cvec remove_anchor(const cvec& x, int m_order) {
    if (x.empty()) throw std::invalid_argument("remove_anchor: empty block");
    bits_for_order(m_order);
    cvec out = x;
    const double ang = -kPi / m_order;
    out[0] *= cd(std::cos(ang), std::sin(ang));
    return out;
}

PermutationCode PermutationCode::make(int r) {
    if (r < 0) throw std::invalid_argument("permutation code: r >= 0");
    if (r > 8) throw CapacityError("permutation code: r > 8 unsupported");
    PermutationCode code;
    code.r_ = r;
    double fact = 1.0;
    for (int i = 2; i <= r; ++i) fact *= i;
    code.bits_ = static_cast<int>(std::floor(std::log2(fact) + 1e-12));
    const std::size_t want = std::size_t{1} << code.bits_;

    std::vector<int> perm(static_cast<std::size_t>(r));
    std::iota(perm.begin(), perm.end(), 1);
    do {
        code.table_.push_back(perm);
    } while (code.table_.size() < want && std::next_permutation(perm.begin(), perm.end()));
    return code;
}

std::size_t PermutationCode::encode(const std::vector<std::uint8_t>& im_bits) const {
    if (im_bits.size() != static_cast<std::size_t>(bits_))
        throw std::invalid_argument("permutation code: wrong bit count");
    std::size_t idx = 0;
    for (std::uint8_t b : im_bits) idx = (idx << 1) | (b & 1u);
    return idx;
}

std::vector<std::uint8_t> PermutationCode::decode(std::size_t index) const {
    if (index >= table_.size()) throw std::out_of_range("permutation code: index");
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(bits_));
    for (int b = 0; b < bits_; ++b)
        bits[b] = static_cast<std::uint8_t>((index >> (bits_ - 1 - b)) & 1u);
    return bits;
}

cvec synthesize_received(const cvec& x, const cvec& g_eq, double n0,
                         std::mt19937_64& rng) {
    if (x.size() != g_eq.size())
        throw std::invalid_argument("synthesize_received: block/CIR length mismatch");
    if (n0 < 0.0) throw std::invalid_argument("synthesize_received: n0 >= 0");
    cvec y = numerics::CirculantMatrix(x).multiply(g_eq);
    if (n0 > 0.0) {
        const double sigma = std::sqrt(n0 / 2.0);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (cd& v : y) {
            const double re = sigma * gauss(rng);
            const double im = sigma * gauss(rng);
            v += cd(re, im);
        }
    }
    return y;
}

double spectral_efficiency(const SystemConfig& cfg) {
    return static_cast<double>(cfg.bits_per_block()) / static_cast<double>(cfg.n + cfg.cp_len);
}

std::vector<std::uint8_t> random_bits(std::size_t count, std::mt19937_64& rng) {
    std::vector<std::uint8_t> bits(count);
    std::uniform_int_distribution<int> bit(0, 1);
    for (std::size_t i = 0; i < count; ++i) bits[i] = static_cast<std::uint8_t>(bit(rng));
    return bits;
}

}  // namespace cpsc::transceiver
