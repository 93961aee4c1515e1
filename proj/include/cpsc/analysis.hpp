#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "cpsc/config.hpp"
#include "cpsc/types.hpp"

namespace cpsc::analysis {

/// Gaussian tail Q(x) = P(N(0,1) > x).
double q_func(double x);

/// Two-term exponential fit to Q(x): e^{-x^2/2}/12 + e^{-2x^2/3}/4.
/// Upper-bounds Q for x >= 0.67 or so; below that it dips under Q
/// (chiani_q(0) = 1/3 < 1/2).
double chiani_q(double x);

/// Gaussian-surrogate statistics of the stacked core taps, in link order.
struct TapStatistics {
    std::vector<double> omega;    // E|g|^2 per tap
    std::vector<double> omega_s;  // scatter variance per tap
    std::vector<double> mu_abs;   // |mean| per tap
    std::vector<int> m;
};
TapStatistics build_tap_statistics(const SystemConfig& cfg);

/// Eigen-domain description of one candidate pair: the distance Gram
/// matrix A = C^H C (C the difference of placed candidate columns) as
/// A = U^H diag(d) U, with the surrogate statistics rotated onto the
/// eigenbasis rows.
struct PairSpectrum {
    std::vector<double> d;       // eigenvalues, descending, clamped at 0
    std::vector<double> gamma;   // sum_l' |U(l,l')|^2 omega_s(l')
    std::vector<double> mu_sq;   // |sum_l' U(l,l') mu(l')|^2
    int rank = 0;                // eigenvalues above 1e-9 * d[0]
};

/// pos_a / pos_b give the in-block position of every core tap under the
/// transmitted and hypothesized delay patterns (equal for non-IM pairs).
PairSpectrum build_pair_spectrum(const cvec& xa, const cvec& xb,
                                 const std::vector<int>& pos_a,
                                 const std::vector<int>& pos_b,
                                 const TapStatistics& stats);

/// Column l is candidate a's block delayed by pos_a[l] minus candidate b's
/// delayed by pos_b[l]; the noiseless decision difference is this times the
/// stacked core taps.
CMatrix pair_difference(const cvec& xa, const cvec& xb,
                        const std::vector<int>& pos_a, const std::vector<int>& pos_b);

/// Q-form pairwise error probability for one channel draw. sigma_e_sq > 0
/// adds the estimation-noise term to the denominator.
double conditional_pep(const cvec& xa, const cvec& xb, const cvec& g_eq,
                       double n0, double sigma_e_sq = 0.0);

/// Closed-form average of the Chiani-approximated conditional PEP over the
/// surrogate tap model, via the per-eigenchannel MGF product.
double unconditional_pep(const PairSpectrum& ps, double n0);

/// MGF of |g~(l)|^2 at t < 0: exp(t mu_sq / (1 - t gamma)) / (1 - t gamma).
double tap_mgf(double t, double gamma, double mu_sq);

/// Monte Carlo average of the *same* integrand unconditional_pep integrates
/// (Chiani form, independent per-eigenchannel draws). Agrees with
/// unconditional_pep up to sampling error; checks the eigen/MGF chain.
double mc_pep_model(const PairSpectrum& ps, double n0, std::uint64_t draws,
                    std::mt19937_64& rng);

/// Monte Carlo average of the exact Q-form conditional PEP over full
/// channel realizations from the simulator model. Gaps versus
/// unconditional_pep measure the analysis approximations themselves.
double mc_pep_channel(const cvec& xa, const cvec& xb,
                      const std::vector<int>& pos_a, const std::vector<int>& pos_b,
                      const SystemConfig& cfg, double n0, std::uint64_t draws,
                      std::mt19937_64& rng);

/// Union bound over all candidate-block pairs (and delay patterns for IM),
/// weighted by bit multiplicities: may exceed 1 at low SNR. Guarded at
/// 2^12 candidate words.
class BoundEvaluator {
  public:
    explicit BoundEvaluator(const SystemConfig& cfg);

    double evaluate(double n0) const;

    int min_rank() const { return min_rank_; }
    const std::map<int, std::uint64_t>& rank_histogram() const { return histogram_; }
    std::size_t pair_count() const { return pair_count_; }

  private:
    struct WeightedSpectrum {
        PairSpectrum ps;
        double weight;  // summed bit errors over both orderings
    };
    std::vector<WeightedSpectrum> spectra_;
    int bits_per_word_ = 0;
    std::size_t word_count_ = 0;
    std::size_t pair_count_ = 0;
    int min_rank_ = 0;
    std::map<int, std::uint64_t> histogram_;
};

struct RankScan {
    std::map<int, std::uint64_t> histogram;
    int min_rank = 0;
    std::size_t pairs = 0;
};
RankScan rank_scan(const SystemConfig& cfg);

}  // namespace cpsc::analysis
