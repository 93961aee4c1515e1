#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpsc/types.hpp"

namespace cpsc {

enum class Scheme { Cpsc, CpscRis, CpscRisIm };
enum class CsiMode { Perfect, Estimated };
enum class DetectorId { Ml, Zf, Mmse, ImMl, ImLc };

std::string to_string(Scheme s);
std::string to_string(CsiMode c);
std::string to_string(DetectorId d);
Scheme scheme_from_string(const std::string& s);
CsiMode csi_from_string(const std::string& s);
DetectorId detector_from_string(const std::string& s);

/// Full description of one scenario. Loaded from JSON (see load_config)
/// or built in code; validate() checks the parameter inequalities.
struct SystemConfig {
    int n = 8;           // block length
    int m_order = 2;     // PSK order
    int r = 2;           // reflector groups (0 = direct link only)
    int n_g = 8;         // elements per group
    int cp_len = 2;      // cyclic prefix length
    int delta = 2;       // base cyclic delay unit

    std::vector<int> link_taps;                // length r+1; default cp_len each
    std::vector<std::vector<int>> nakagami_m;  // per link, per tap; default 2
    double pdp_decay = 1.0;                    // exponential power-delay slope

    double d0 = 50.0;  // direct-link distance
    double d1 = 5.0;   // transmitter to surface
    double d2 = 50.0;  // surface to receiver
    double pl_exp_direct = 2.5;
    double pl_exp_tx_ris = 2.0;
    double pl_exp_ris_rx = 2.0;

    std::vector<double> snr_db;  // Eb/N0 grid, dB
    std::vector<DetectorId> detectors;
    Scheme scheme = Scheme::CpscRis;
    CsiMode csi = CsiMode::Perfect;

    std::uint64_t master_seed = 1;
    std::uint64_t min_trials = 100000;
    std::uint64_t min_bit_errors = 200;

    int zc_root = 1;               // Zadoff-Chu root for pilot blocks
    bool denoise_estimate = false; // zero the off-support entries of the estimate

    // ---- derived quantities ----
    int bits_per_symbol() const;              // log2 M
    int im_bits() const;                      // floor(log2 r!) when scheme is IM, else 0
    int bits_per_block() const;               // im_bits + n * bits_per_symbol
    double energy_per_bit() const;            // (n + cp_len) / bits_per_block
    int total_core_taps() const;              // sum of link_taps
    int link_offset(int link) const;          // start of link's taps in the core stack
    std::vector<int> core_positions() const;  // tap position of each core entry in the length-n CIR
    std::vector<int> core_positions(const std::vector<int>& delays) const;
    std::vector<int> link_delays() const;     // base delay of every link (identity permutation)
    std::vector<int> link_delays(const std::vector<int>& perm) const;

    /// Throws ConfigError naming the violated inequality.
    void validate() const;

    /// Fills link_taps / nakagami_m defaults for the current r; called by
    /// load_config and the factory helpers.
    void apply_defaults();
};

/// Scenario used throughout the tests: N=8 BPSK, R=2 groups of 8 elements,
/// 2 taps per link, Nakagami m=2, delta = cp_len = 2.
SystemConfig default_config();

/// Parse a JSON scenario file. Unknown keys and type mismatches are
/// ConfigErrors; absent keys fall back to default_config() values.
SystemConfig load_config(const std::string& path);
SystemConfig parse_config(const std::string& json_text);

/// "min:step:max" (inclusive, step > 0) or a single value.
std::vector<double> parse_snr_range(const std::string& spec);

}  // namespace cpsc
