#pragma once

#include <vector>

#include "cpsc/types.hpp"

namespace cpsc::estimation {

/// Zadoff-Chu pilot block x_p[n] = e^{j pi root n^2 / n_len}. n_len must be
/// even and positive and gcd(root, n_len) = 1, which makes cir(x_p) unitary
/// up to sqrt(n_len): X_p^H X_p = n_len I.
cvec zadoff_chu_pilot(int n_len, int root);

struct ChannelEstimate {
    cvec g_hat;          // length-n equivalent CIR estimate
    double sigma_e_sq;   // per-entry error variance, mse / n
};

/// Least-squares estimate of the equivalent CIR from one pilot block.
/// When the pilot satisfies the flat-spectrum identity the estimate is
/// (1/N) X_p^H y with no inversion; otherwise spectral division. Throws
/// SingularityError if any pilot spectral bin vanishes.
ChannelEstimate ls_estimate(const cvec& y, const cvec& pilot, double n0);

/// Closed-form LS MSE: n0 * sum_k 1/d_p(k), d_p the DFT of the pilot's
/// cyclic autocorrelation. Equals n0 exactly for Zadoff-Chu pilots.
double theoretical_mse(const cvec& pilot, double n0);

/// Zero every entry outside the known delay support.
void mask_support(ChannelEstimate& est, const std::vector<int>& support);

}  // namespace cpsc::estimation
