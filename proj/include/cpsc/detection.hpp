#pragma once

#include <cstdint>
#include <vector>

#include "cpsc/transceiver.hpp"
#include "cpsc/types.hpp"

namespace cpsc::detection {

struct DetectionResult {
    std::vector<std::uint8_t> bits;  // IM bits first (if any), then data bits
    cvec symbols;                    // decided data block (no anchor)
    long im_index = -1;              // decided codebook entry, -1 for non-IM
    double metric = 0.0;
    std::uint64_t candidates = 0;    // metric evaluations performed
};

/// Exhaustive joint search over all M^N blocks, metric ||y - cir(g) x||^2.
/// Ties break toward the lexicographically first candidate. Guarded at
/// 2^20 candidates (CapacityError).
DetectionResult ml_detect(const cvec& y, const cvec& g_eq, int m_order);

enum class Equalizer { Zf, Mmse };

/// Single-tap frequency-domain equalization. ZF throws SingularityError
/// when a channel bin magnitude falls below 1e-12 (relative to the peak);
/// MMSE with n0 = 0 coincides with ZF.
cvec fd_equalize(const cvec& y, const cvec& g_eq, double n0, Equalizer eq);

/// Equalize, slice, demap.
DetectionResult linear_detect(const cvec& y, const cvec& g_eq, double n0,
                              Equalizer eq, int m_order);

/// Joint ML over (delay permutation, anchored data block). g_eq_per_perm
/// holds the equivalent CIR of every codebook entry. Guarded at 2^20
/// total candidates.
DetectionResult im_ml_detect(const cvec& y, const std::vector<cvec>& g_eq_per_perm,
                             const transceiver::PermutationCode& code, int m_order);

/// Two-stage low-complexity IM detector: per codebook entry, MMSE-equalize,
/// slice, re-anchor, then score ||y - cir(g_k) x_k||^2; pick the smallest.
DetectionResult im_lc_detect(const cvec& y, const std::vector<cvec>& g_eq_per_perm,
                             const transceiver::PermutationCode& code, int m_order,
                             double n0);

}  // namespace cpsc::detection
