#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cpsc/config.hpp"

namespace cpsc::harness {

struct RunOptions {
    int threads = 1;
    bool timing = false;  // when false the wall_time_s column is written as 0
};

struct BerRecord {
    std::string scheme;
    std::string detector;
    double snr_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;
};

/// Monte Carlo BER for every (detector, SNR) cell. All detectors of a run
/// share per-trial channel/bit/noise draws; each stops at the first batch
/// boundary where its own stopping rule (min_trials or min_bit_errors) is
/// met. Identical output for any thread count.
std::vector<BerRecord> run_ber_sweep(const SystemConfig& cfg, const RunOptions& opt);
void write_ber_csv(std::ostream& os, const std::vector<BerRecord>& records);

struct MseRecord {
    double inv_n0 = 0.0;
    double mse_empirical = 0.0;
    double mse_theoretical = 0.0;
};

/// Pilot-based estimator MSE versus 1/N0. The grid reuses snr_db as
/// 10 log10(1/N0); min_trials realizations per point.
std::vector<MseRecord> run_mse_sweep(const SystemConfig& cfg, const RunOptions& opt);
void write_mse_csv(std::ostream& os, const std::vector<MseRecord>& records);

struct BoundRecord {
    std::string scheme;
    double snr_db = 0.0;
    double union_bound = 0.0;
};

std::vector<BoundRecord> run_bound_sweep(const SystemConfig& cfg);
void write_bound_csv(std::ostream& os, const std::vector<BoundRecord>& records);

struct PepRecord {
    double snr_db = 0.0;
    double cond_pep = 0.0;         // at one seeded channel draw
    double cond_mc = 0.0;          // noise Monte Carlo at that draw
    double uncond_pep = 0.0;       // closed form
    double uncond_mc_model = 0.0;  // same integrand, sampled
    double uncond_mc_channel = 0.0;// exact Q over channel draws
};

/// Candidate blocks are addressed by their lexicographic data-word index.
std::vector<PepRecord> run_pep(const SystemConfig& cfg, std::uint64_t idx_a,
                               std::uint64_t idx_b, std::uint64_t draws);
void write_pep_csv(std::ostream& os, const std::vector<PepRecord>& records);

struct RankRecord {
    int rank = 0;
    std::uint64_t count = 0;
};

std::vector<RankRecord> run_rank_scan(const SystemConfig& cfg, int* min_rank);
void write_rank_csv(std::ostream& os, const std::vector<RankRecord>& records);

/// Shortest round-trip decimal form (to_chars), used by every CSV writer
/// so replays are byte-identical.
std::string format_double(double v);

/// gnuplot companion for a CSV produced by `kind` (ber/mse/bound/pep/rankscan).
std::string plot_script(const std::string& kind, const std::string& csv_path);

}  // namespace cpsc::harness
