#pragma once

#include <random>
#include <vector>

#include "cpsc/config.hpp"
#include "cpsc/types.hpp"

namespace cpsc::channel {

/// Exponential power-delay profile, w[l] proportional to exp(-decay*l),
/// normalized to unit sum.
std::vector<double> power_delay_profile(int taps, double decay);

/// Per-link average tap powers after distance loss. Link 0 is the direct
/// path (d0^-pl_direct); links 1..R are group cascades and carry the
/// n_g^2 beamforming gain times d1^-a * d2^-b.
struct LinkProfile {
    std::vector<double> omega;  // mean square gain per tap
    std::vector<int> m;         // Nakagami shape per tap
};
std::vector<LinkProfile> link_profiles(const SystemConfig& cfg);

/// Gaussian surrogate for a Nakagami-m tap of mean square Omega:
/// mean magnitude (1-1/m)^(1/4)*sqrt(Omega), complex variance
/// Omega*(1-sqrt(1-1/m)). Preserves E|g|^2 and E|g|^4 exactly.
struct TapGaussian {
    double mu_abs;    // |mean|
    double omega_s;   // variance of the complex scatter part
};
TapGaussian tap_gaussian(int m, double omega);

/// One tap draw: mean direction uniform on the circle, then independent
/// real/imag Gaussians of variance omega_s/2 around the rotated mean.
cd draw_tap(int m, double omega, std::mt19937_64& rng);

/// CIRs of every link for one realization, in link order.
struct ChannelRealization {
    std::vector<cvec> links;
};
ChannelRealization draw_channel(const SystemConfig& cfg, std::mt19937_64& rng);

/// Length-n equivalent CIR: link r's taps start at delays[r]. Delays must
/// keep the blocks disjoint and inside the block length.
cvec assemble_equivalent_cir(const SystemConfig& cfg, const ChannelRealization& ch,
                             const std::vector<int>& delays);

/// The core taps only, stacked in link order (length total_core_taps()).
cvec core_vector(const ChannelRealization& ch);

}  // namespace cpsc::channel
