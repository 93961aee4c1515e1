#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "cpsc/config.hpp"
#include "cpsc/types.hpp"

namespace cpsc::transceiver {

/// Unit-energy M-PSK points in position order: point[i] = e^{j 2 pi i / M}.
/// Adjacent positions differ in one bit (Gray labels, M=4 order 00,01,11,10).
cvec constellation(int m_order);

std::uint32_t gray_code(std::uint32_t n);
std::uint32_t gray_decode(std::uint32_t v);

/// Bits (MSB first per symbol) to PSK symbols. Size must divide evenly.
cvec psk_modulate(const std::vector<std::uint8_t>& bits, int m_order);
/// Nearest-point slicer and Gray demapping.
std::vector<std::uint8_t> psk_demodulate(const cvec& symbols, int m_order);

/// Prepend the last cp_len samples. Requires 0 < cp_len < x.size().
cvec add_cp(const cvec& x, int cp_len);
cvec remove_cp(const cvec& x_cp, int cp_len);

/// Per-group surface phases that turn the reflected prefixed block into the
/// prefixed cyclic shift of the data part: theta[n] = arg(shifted_cp[n]) -
/// arg(x_cp[n]), folded to [0, 2 pi). Requires |x_cp[n]| = 1 (PSK blocks).
std::vector<std::vector<double>> ris_phase_profile(const cvec& x_cp,
                                                   const std::vector<int>& delays,
                                                   int cp_len);
cvec apply_phase_profile(const cvec& x_cp, const std::vector<double>& theta);

/// Rotate the first symbol by e^{j pi / M}, detaching constant blocks from
/// their cyclic shifts so delay patterns stay identifiable.
cvec apply_anchor(const cvec& x, int m_order);
cvec remove_anchor(const cvec& x, int m_order);

/// Index-modulation codebook: the first 2^floor(log2(r!)) permutations of
/// {1..r} in lexicographic order, addressed by the IM bit word (MSB first).
class PermutationCode {
  public:
    static PermutationCode make(int r);

    int r() const { return r_; }
    int bits() const { return bits_; }
    std::size_t size() const { return table_.size(); }
    const std::vector<int>& permutation(std::size_t index) const { return table_[index]; }

    std::size_t encode(const std::vector<std::uint8_t>& im_bits) const;
    std::vector<std::uint8_t> decode(std::size_t index) const;

  private:
    int r_ = 0;
    int bits_ = 0;
    std::vector<std::vector<int>> table_;
};

/// y = cir(x) g_eq + noise, noise CN(0, n0) per entry (skipped when n0 = 0).
cvec synthesize_received(const cvec& x, const cvec& g_eq, double n0,
                         std::mt19937_64& rng);

/// Bits per channel use, (im bits + data bits) / (n + cp_len).
double spectral_efficiency(const SystemConfig& cfg);

std::vector<std::uint8_t> random_bits(std::size_t count, std::mt19937_64& rng);

}  // namespace cpsc::transceiver
