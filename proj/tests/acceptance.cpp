// Acceptance gate: ten release criteria, one PASS/FAIL line each.
// Exit status is the number of failed criteria. argv[1] must point at the
// cpscris binary (criterion 10 exercises the CLI end to end).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cpsc/analysis.hpp"
#include "cpsc/channel.hpp"
#include "cpsc/config.hpp"
#include "cpsc/detection.hpp"
#include "cpsc/estimation.hpp"
#include "cpsc/harness.hpp"
#include "cpsc/numerics.hpp"
#include "cpsc/transceiver.hpp"
#include "cpsc/types.hpp"

using namespace cpsc;
namespace an = cpsc::analysis;
namespace ch = cpsc::channel;
namespace det = cpsc::detection;
namespace est = cpsc::estimation;
namespace hn = cpsc::harness;
namespace num = cpsc::numerics;
namespace tx = cpsc::transceiver;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (!pass) detail << "; ";
            pass = false;
            detail << what;
        }
    }
};

int g_failures = 0;

void report(int index, const std::string& name, const Outcome& o) {
    std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " criterion " << index << ": " << name;
    const std::string d = o.detail.str();
    if (!d.empty()) std::cout << " (" << d << ")";
    std::cout << "\n" << std::flush;
    if (!o.pass) ++g_failures;
}

std::string fmt(double v) { return hn::format_double(v); }

double ber_sigma(const hn::BerRecord& r, int block_bits) {
    const double n = static_cast<double>(r.trials) * block_bits;
    return std::sqrt(std::max(r.ber * (1.0 - r.ber), 1e-300) / n);
}

// ---------------------------------------------------------------------------
// criterion 1: pilot estimator MSE matches the closed form, and Zadoff-Chu
// pilots satisfy the Gram identity across the whole admissible family.
// ---------------------------------------------------------------------------
Outcome criterion_mse() {
    constexpr double kMseRelTol = 0.02;   // empirical vs closed form
    constexpr double kGramTol = 1e-10;    // |X^H X - N I| entrywise
    constexpr double kRuntimeLimit = 60.0;

    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();

    SystemConfig cfg = default_config();
    cfg.n = 16;
    cfg.r = 4;
    cfg.cp_len = 2;
    cfg.delta = 2;
    cfg.csi = CsiMode::Estimated;
    cfg.min_trials = 10000;
    cfg.snr_db = {10, 14, 18, 22, 26, 30};  // grid is 10*log10(1/N0)
    cfg.link_taps.clear();
    cfg.nakagami_m.clear();
    cfg.apply_defaults();
    for (auto& row : cfg.nakagami_m) row.assign(row.size(), 3);
    cfg.validate();

    const auto recs = hn::run_mse_sweep(cfg, hn::RunOptions{});
    double worst = 0.0;
    for (const auto& r : recs) {
        const double n0 = 1.0 / r.inv_n0;
        o.require(std::abs(r.mse_theoretical - n0) <= 1e-12 * n0,
                  "closed form != N0 at 1/N0=" + fmt(r.inv_n0));
        const double rel = std::abs(r.mse_empirical - r.mse_theoretical) / r.mse_theoretical;
        worst = std::max(worst, rel);
        o.require(rel <= kMseRelTol,
                  "MSE off by " + fmt(rel * 100.0) + "% at 1/N0=" + fmt(r.inv_n0));
    }

    double worst_gram = 0.0;
    for (int n = 2; n <= 64; n += 2) {
        for (int root = 1; root < n; ++root) {
            if (std::gcd(root, n) != 1) continue;
            const cvec p = est::zadoff_chu_pilot(n, root);
            const CMatrix g = num::gram(num::CirculantMatrix(p).dense());
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const cd want = (i == j) ? cd(n, 0.0) : cd(0.0, 0.0);
                    worst_gram = std::max(worst_gram, std::abs(g(i, j) - want));
                }
        }
    }
    o.require(worst_gram <= kGramTol, "Gram identity residual " + fmt(worst_gram));

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < kRuntimeLimit, "runtime " + fmt(secs) + "s");
    if (o.pass)
        o.detail << "max rel MSE error " << fmt(worst * 100.0) << "%, max Gram residual "
                 << fmt(worst_gram) << ", " << fmt(secs) << "s";
    return o;
}

// ---------------------------------------------------------------------------
// criterion 2: LS MSE optimality of flat-spectrum pilots, and the trace form
// of the MSE agrees with the spectral form.
// ---------------------------------------------------------------------------
CMatrix gauss_inverse(CMatrix a) {
    const std::size_t n = a.rows();
    CMatrix inv = CMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        if (std::abs(a(pivot, col)) < 1e-12) throw SingularityError("gauss: singular matrix");
        if (pivot != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(col, j), a(pivot, j));
                std::swap(inv(col, j), inv(pivot, j));
            }
        const cd d = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) /= d;
            inv(col, j) /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const cd f = a(r, col);
            if (f == cd(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

Outcome criterion_pilot_optimality() {
    constexpr int kPilotCount = 200;
    constexpr double kFormAgreementTol = 1e-10;  // relative, trace vs spectral
    constexpr double kEqualityWindow = 1e-9;     // MSE this close to N0 implies flat spectrum

    Outcome o;
    const int n = 8;
    const double n0 = 1.0;
    std::mt19937_64 rng(20260825);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);

    int kept = 0;
    double worst_form_gap = 0.0;
    while (kept < kPilotCount) {
        cvec p(n);
        for (cd& v : p) v = std::polar(1.0, phase(rng));
        const cvec lam = num::CirculantMatrix(p).eigenvalues();
        double flatness = 0.0, min_bin = 1e300;
        for (const cd& l : lam) {
            flatness = std::max(flatness, std::abs(std::norm(l) - n));
            min_bin = std::min(min_bin, std::norm(l));
        }
        if (min_bin < 1e-6 * n) continue;  // ill-conditioned draw, both forms unstable
        ++kept;

        const double spectral = est::theoretical_mse(p, n0);
        const CMatrix gram = num::gram(num::CirculantMatrix(p).dense());
        const CMatrix gi = gauss_inverse(gram);
        double trace = 0.0;
        for (int i = 0; i < n; ++i) trace += gi(i, i).real();
        const double trace_form = n0 * trace;

        const double gap = std::abs(trace_form - spectral) / spectral;
        worst_form_gap = std::max(worst_form_gap, gap);
        o.require(gap <= kFormAgreementTol, "trace vs spectral gap " + fmt(gap));
        o.require(spectral >= n0 - 1e-12, "pilot beats the flat-spectrum MSE: " + fmt(spectral));
        if (spectral - n0 < kEqualityWindow)
            o.require(flatness < 1e-6, "equality without a flat spectrum");
        if (!o.pass) break;
    }

    // the flat-spectrum family attains the optimum exactly
    for (int root : {1, 3, 5}) {
        const cvec zc = est::zadoff_chu_pilot(n, root);
        o.require(std::abs(est::theoretical_mse(zc, n0) - n0) <= 1e-12,
                  "flat pilot not at the optimum (root " + std::to_string(root) + ")");
    }
    if (o.pass)
        o.detail << kept << " pilots, all >= N0; max trace/spectral gap " << fmt(worst_form_gap);
    return o;
}

// ---------------------------------------------------------------------------
// criterion 3: the three receive-equation forms coincide, and the surface
// phase profile reproduces prefixed cyclic shifts symbol-for-symbol.
// ---------------------------------------------------------------------------
Outcome criterion_model_identities() {
    constexpr double kTol = 1e-10;
    constexpr int kConfigs = 1000;

    Outcome o;
    std::mt19937_64 rng(9);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = 0.0;

    for (int t = 0; t < kConfigs && o.pass; ++t) {
        const int r = t % 5;
        const int taps = 1 + static_cast<int>(rng() % 2);
        std::vector<int> n_choices;
        for (int n : {4, 6, 8, 10, 12, 14, 16})
            if (n / (r + 1) >= taps) n_choices.push_back(n);
        const int n = n_choices[rng() % n_choices.size()];
        const int max_delta = n / (r + 1);
        const int delta = r == 0 ? taps
                                 : taps + static_cast<int>(rng() % static_cast<std::uint64_t>(
                                                               max_delta - taps + 1));
        const int m_order = (rng() % 2 == 0) ? 2 : 4;

        SystemConfig cfg;
        cfg.n = n;
        cfg.m_order = m_order;
        cfg.r = r;
        cfg.cp_len = taps;
        cfg.delta = delta;
        cfg.scheme = r == 0 ? Scheme::Cpsc : Scheme::CpscRis;
        cfg.detectors = {DetectorId::Ml};
        cfg.snr_db = {20.0};
        cfg.apply_defaults();
        cfg.validate();

        const auto real = ch::draw_channel(cfg, rng);
        const auto delays = cfg.link_delays();
        const cvec g_eq = ch::assemble_equivalent_cir(cfg, real, delays);
        const auto bits =
            tx::random_bits(static_cast<std::size_t>(n * cfg.bits_per_symbol()), rng);
        const cvec x = tx::psk_modulate(bits, m_order);

        // per-link circulants acting on shifted blocks
        cvec y_links(static_cast<std::size_t>(n), cd(0.0, 0.0));
        for (int link = 0; link <= r; ++link) {
            cvec placed(static_cast<std::size_t>(n), cd(0.0, 0.0));
            for (std::size_t l = 0; l < real.links[link].size(); ++l)
                placed[l] = real.links[link][l];
            const cvec shifted = num::cyclic_shift(x, delays[link]);
            const cvec part = num::CirculantMatrix(placed).multiply(shifted);
            for (int i = 0; i < n; ++i) y_links[i] += part[i];
        }
        const cvec y_geq = num::CirculantMatrix(g_eq).multiply(x);
        const cvec y_data = num::CirculantMatrix(x).multiply(g_eq);

        for (int i = 0; i < n; ++i) {
            worst = std::max(worst, std::abs(y_links[i] - y_geq[i]));
            worst = std::max(worst, std::abs(y_geq[i] - y_data[i]));
        }
        o.require(worst <= kTol, "construction mismatch " + fmt(worst) + " at config " +
                                     std::to_string(t));
    }

    // delay layout at N=8, R=3, delta=2: reflected prefixed blocks equal the
    // prefixed shifts, and the equivalent CIR fills positions 0..7
    {
        SystemConfig cfg = default_config();
        cfg.r = 3;
        cfg.link_taps.clear();
        cfg.nakagami_m.clear();
        cfg.apply_defaults();
        cfg.validate();
        const auto bits = tx::random_bits(8, rng);
        const cvec x = tx::psk_modulate(bits, 2);
        const cvec xcp = tx::add_cp(x, 2);
        const std::vector<int> ris_delays = {2, 4, 6};
        const auto thetas = tx::ris_phase_profile(xcp, ris_delays, 2);
        for (std::size_t g = 0; g < ris_delays.size(); ++g) {
            const cvec got = tx::apply_phase_profile(xcp, thetas[g]);
            const cvec want = tx::add_cp(num::cyclic_shift(x, ris_delays[g]), 2);
            for (std::size_t i = 0; i < got.size(); ++i)
                o.require(std::abs(got[i] - want[i]) <= 1e-12,
                          "reflected block mismatch at group " + std::to_string(g));
        }
        const std::vector<int> pos = cfg.core_positions();
        o.require(pos == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7}, "tap layout");
    }

    if (o.pass) o.detail << kConfigs << " configs, max deviation " << fmt(worst);
    return o;
}

// ---------------------------------------------------------------------------
// criteria 4 and 5 share one Monte Carlo sweep (N=8, BPSK, R=2, perfect CSI).
// ---------------------------------------------------------------------------
struct SweepData {
    SystemConfig cfg;
    std::vector<hn::BerRecord> recs;

    const hn::BerRecord& at(const std::string& detector, double snr) const {
        for (const auto& r : recs)
            if (r.detector == detector && r.snr_db == snr) return r;
        throw std::runtime_error("missing record");
    }
};

SweepData run_reference_sweep() {
    SweepData s;
    s.cfg = default_config();
    // 4 dB ladder into the diversity-1 regime; every point stops at 300 bit
    // errors (5.8% relative sigma), the trial cap only binds at the deepest
    // point.
    s.cfg.snr_db = {20, 24, 28, 32, 36, 40, 44, 48, 52};
    s.cfg.min_trials = 24000000;
    s.cfg.min_bit_errors = 300;
    s.cfg.master_seed = 1;
    hn::RunOptions opt;
    opt.threads = 1;
    s.recs = hn::run_ber_sweep(s.cfg, opt);
    return s;
}

Outcome criterion_detector_ordering(const SweepData& s) {
    constexpr double kSigmas = 3.0;
    const std::vector<double> points = {32, 36, 40};

    Outcome o;
    const int bits = s.cfg.bits_per_block();
    for (double snr : points) {
        const auto& ml = s.at("ml", snr);
        const auto& zf = s.at("zf", snr);
        const auto& mmse = s.at("mmse", snr);
        const double margin_zm =
            zf.ber - mmse.ber -
            kSigmas * std::sqrt(std::pow(ber_sigma(zf, bits), 2) +
                                std::pow(ber_sigma(mmse, bits), 2));
        const double margin_mm =
            mmse.ber - ml.ber -
            kSigmas * std::sqrt(std::pow(ber_sigma(mmse, bits), 2) +
                                std::pow(ber_sigma(ml, bits), 2));
        o.require(margin_zm > 0.0, "zf !> mmse at " + fmt(snr) + " dB");
        o.require(margin_mm > 0.0, "mmse !> ml at " + fmt(snr) + " dB");
    }
    if (o.pass) {
        const auto& ml = s.at("ml", 36);
        const auto& zf = s.at("zf", 36);
        const auto& mmse = s.at("mmse", 36);
        o.detail << "at 36 dB: ml " << fmt(ml.ber) << " < mmse " << fmt(mmse.ber) << " < zf "
                 << fmt(zf.ber);
    }
    return o;
}

Outcome criterion_union_bound(const SweepData& s) {
    constexpr double kTightnessCeiling = 3.0;

    Outcome o;
    const an::BoundEvaluator be(s.cfg);
    double top_snr = 0.0, top_ratio = 0.0, top_ber = 0.0;
    for (double snr : s.cfg.snr_db) {
        const double n0 = s.cfg.energy_per_bit() / std::pow(10.0, snr / 10.0);
        const double bound = be.evaluate(n0);
        const auto& ml = s.at("ml", snr);
        o.require(bound >= ml.ber, "bound " + fmt(bound) + " below simulated " + fmt(ml.ber) +
                                       " at " + fmt(snr) + " dB");
        if (snr >= top_snr) {
            top_snr = snr;
            top_ratio = bound / ml.ber;
            top_ber = ml.ber;
        }
    }
    o.require(top_ber <= 1e-3, "highest point BER " + fmt(top_ber) + " not deep enough");
    o.require(top_ratio < kTightnessCeiling,
              "bound/BER ratio " + fmt(top_ratio) + " at " + fmt(top_snr) + " dB");
    if (o.pass)
        o.detail << "bound dominates everywhere; ratio " << fmt(top_ratio) << " at "
                 << fmt(top_snr) << " dB (BER " << fmt(top_ber) << ")";
    return o;
}

// ---------------------------------------------------------------------------
// criterion 6: the closed-form pair error probability matches Monte Carlo
// sampling of its own fading model; the gap to averaging the exact Q form
// over simulator channel draws is reported but not gated (the closed form
// inherits the Chiani approximation under the fade average, a known
// inflation of roughly 2x at high SNR, plus eigen-tap coupling).
// ---------------------------------------------------------------------------
Outcome criterion_pep_oracle() {
    constexpr int kPairs = 20;
    constexpr double kRelTol = 0.10;
    constexpr std::uint64_t kBaseDraws = 1000000;
    constexpr double kBandLo = 1e-4, kBandHi = 1e-1;

    Outcome o;
    SystemConfig cfg = default_config();
    cfg.n = 4;
    cfg.r = 1;
    cfg.delta = 2;
    cfg.link_taps.clear();
    cfg.nakagami_m.clear();
    cfg.apply_defaults();
    cfg.validate();

    const an::TapStatistics stats = an::build_tap_statistics(cfg);
    const auto pos = cfg.core_positions();
    const cvec pts = tx::constellation(2);
    auto block_of = [&](unsigned word) {
        cvec b(4);
        for (int i = 3; i >= 0; --i) {
            b[i] = pts[word & 1u];
            word >>= 1u;
        }
        return b;
    };

    std::mt19937_64 rng(2026);
    double worst_model_gap = 0.0, worst_channel_gap = 0.0;
    int points_checked = 0;

    for (int pair = 0; pair < kPairs && o.pass; ++pair) {
        unsigned wa = rng() % 16u, wb = rng() % 16u;
        while (wb == wa) wb = rng() % 16u;
        const cvec xa = block_of(wa), xb = block_of(wb);
        const an::PairSpectrum ps = an::build_pair_spectrum(xa, xb, pos, pos, stats);

        std::vector<double> band_n0;
        for (double snr = 0.0; snr <= 60.0; snr += 4.0) {
            const double n0 = cfg.energy_per_bit() / std::pow(10.0, snr / 10.0);
            const double pep = an::unconditional_pep(ps, n0);
            if (pep >= kBandLo && pep <= kBandHi) band_n0.push_back(n0);
        }
        o.require(!band_n0.empty(), "no grid point lands in the PEP band");
        if (!o.pass) break;

        std::vector<double> tested = {band_n0.front()};
        if (band_n0.size() > 2) tested.push_back(band_n0[band_n0.size() / 2]);
        if (band_n0.size() > 1) tested.push_back(band_n0.back());

        for (double n0 : tested) {
            const double pep = an::unconditional_pep(ps, n0);
            const std::uint64_t draws = pep < 2e-3 ? 4 * kBaseDraws : kBaseDraws;
            const double mc = an::mc_pep_model(ps, n0, draws, rng);
            const double gap = std::abs(mc - pep) / pep;
            worst_model_gap = std::max(worst_model_gap, gap);
            ++points_checked;
            o.require(gap <= kRelTol, "model MC gap " + fmt(gap * 100.0) + "% at pair " +
                                          std::to_string(wa) + "/" + std::to_string(wb));
        }

        // informational: exact-Q average over full channel draws
        const double n0_mid = tested.size() > 1 ? tested[1] : tested[0];
        const double pep_mid = an::unconditional_pep(ps, n0_mid);
        const double mc_chan = an::mc_pep_channel(xa, xb, pos, pos, cfg, n0_mid, 200000, rng);
        if (mc_chan > 0.0)
            worst_channel_gap = std::max(worst_channel_gap, std::abs(pep_mid - mc_chan) / mc_chan);
    }

    if (o.pass)
        o.detail << points_checked << " band points within " << fmt(worst_model_gap * 100.0)
                 << "%; exact-Q channel-draw average differs by up to "
                 << fmt(worst_channel_gap * 100.0) << "% (approximation gap, reported only)";
    return o;
}

// ---------------------------------------------------------------------------
// criterion 7: distance-matrix rank facts at N=4 BPSK, R=1.
// ---------------------------------------------------------------------------
Outcome criterion_rank_facts() {
    Outcome o;
    SystemConfig cfg = default_config();
    cfg.n = 4;
    cfg.r = 1;
    cfg.delta = 2;
    cfg.link_taps.clear();
    cfg.nakagami_m.clear();
    cfg.apply_defaults();
    cfg.validate();

    const an::TapStatistics stats = an::build_tap_statistics(cfg);
    const auto pos = cfg.core_positions();
    const cvec ones(4, cd(1, 0));
    const cvec neg(4, cd(-1, 0));
    const an::PairSpectrum antipodal = an::build_pair_spectrum(ones, neg, pos, pos, stats);
    o.require(antipodal.rank == 1,
              "antipodal constant pair rank " + std::to_string(antipodal.rank));

    const an::RankScan scan1 = an::rank_scan(cfg);
    const an::RankScan scan2 = an::rank_scan(cfg);
    o.require(scan1.min_rank == 1, "min rank " + std::to_string(scan1.min_rank));
    o.require(scan1.pairs == 120, "pair count " + std::to_string(scan1.pairs));
    o.require(scan1.histogram == scan2.histogram && scan1.min_rank == scan2.min_rank,
              "histogram not deterministic");
    std::uint64_t total = 0;
    for (const auto& [rank, count] : scan1.histogram) total += count;
    o.require(total == scan1.pairs, "histogram total mismatch");

    if (o.pass) {
        o.detail << "min rank 1; histogram";
        for (const auto& [rank, count] : scan1.histogram)
            o.detail << " " << rank << ":" << count;
    }
    return o;
}

// ---------------------------------------------------------------------------
// criterion 8: index-modulation correctness bundle.
// ---------------------------------------------------------------------------
Outcome criterion_im() {
    Outcome o;

    // (a) the anchor separates delay patterns even for constant blocks
    SystemConfig cfg = default_config();
    cfg.scheme = Scheme::CpscRisIm;
    cfg.detectors = {DetectorId::ImMl, DetectorId::ImLc};
    cfg.apply_defaults();
    cfg.validate();

    const auto code = tx::PermutationCode::make(cfg.r);
    o.require(code.size() == 2 && code.bits() == 1, "codebook shape for two groups");
    o.require(code.permutation(0) == std::vector<int>{1, 2} &&
                  code.permutation(1) == std::vector<int>{2, 1},
              "codebook contents");

    std::mt19937_64 rng(4242);
    const auto real = ch::draw_channel(cfg, rng);
    std::vector<cvec> g_set;
    for (std::size_t k = 0; k < code.size(); ++k)
        g_set.push_back(ch::assemble_equivalent_cir(cfg, real, cfg.link_delays(code.permutation(k))));

    const cvec constant(8, cd(1, 0));
    std::mt19937_64 quiet(1);

    // without the anchor the two patterns are indistinguishable on this block
    const cvec y_plain = tx::synthesize_received(constant, g_set[0], 0.0, quiet);
    const cvec y_plain_alt = tx::synthesize_received(constant, g_set[1], 0.0, quiet);
    double plain_gap = 0.0;
    for (int i = 0; i < 8; ++i) plain_gap = std::max(plain_gap, std::abs(y_plain[i] - y_plain_alt[i]));
    o.require(plain_gap <= 1e-12, "constant block already separable without the anchor");

    // with the anchor the wrong pattern scores a strictly positive residual
    const cvec anchored = tx::apply_anchor(constant, 2);
    for (std::size_t k_tx = 0; k_tx < 2; ++k_tx) {
        const cvec y = tx::synthesize_received(anchored, g_set[k_tx], 0.0, quiet);
        const auto r = det::im_ml_detect(y, g_set, code, 2);
        o.require(r.im_index == static_cast<long>(k_tx),
                  "anchored constant block decoded to the wrong pattern");

        // best achievable residual under the other pattern, over all data words
        const std::size_t other = 1 - k_tx;
        double best_other = 1e300;
        for (unsigned w = 0; w < 256; ++w) {
            cvec b(8);
            unsigned v = w;
            for (int i = 7; i >= 0; --i) {
                b[i] = (v & 1u) ? cd(-1, 0) : cd(1, 0);
                v >>= 1u;
            }
            const cvec cand = tx::apply_anchor(b, 2);
            const cvec yc = num::CirculantMatrix(cand).multiply(g_set[other]);
            double m = 0.0;
            for (int i = 0; i < 8; ++i) m += std::norm(y[i] - yc[i]);
            best_other = std::min(best_other, m);
        }
        o.require(best_other > 1e-12, "metric gap vanished: " + fmt(best_other));
    }

    // (b) two-stage detector agrees with joint ML on clean blocks
    int agree = 0;
    const int noiseless_trials = 100;
    for (int t = 0; t < noiseless_trials; ++t) {
        const auto real_t = ch::draw_channel(cfg, rng);
        std::vector<cvec> gs;
        for (std::size_t k = 0; k < code.size(); ++k)
            gs.push_back(
                ch::assemble_equivalent_cir(cfg, real_t, cfg.link_delays(code.permutation(k))));
        const std::size_t k_tx = rng() % code.size();
        const auto bits = tx::random_bits(8, rng);
        const cvec x = tx::apply_anchor(tx::psk_modulate(bits, 2), 2);
        const cvec y = tx::synthesize_received(x, gs[k_tx], 0.0, quiet);
        const auto ml = det::im_ml_detect(y, gs, code, 2);
        const auto lc = det::im_lc_detect(y, gs, code, 2, 0.0);
        if (ml.bits == lc.bits && ml.im_index == static_cast<long>(k_tx)) ++agree;
    }
    o.require(agree == noiseless_trials,
              "noiseless agreement " + std::to_string(agree) + "/100");

    // (c) measured gap between the two detectors at two operating points
    SystemConfig mc = cfg;
    mc.snr_db = {28, 32};
    mc.min_trials = 30000;
    mc.min_bit_errors = 1u << 30;
    const auto recs = hn::run_ber_sweep(mc, hn::RunOptions{});
    std::ostringstream gap_txt;
    for (double snr : mc.snr_db) {
        const hn::BerRecord *ml = nullptr, *lc = nullptr;
        for (const auto& r : recs) {
            if (r.snr_db != snr) continue;
            if (r.detector == "im-ml") ml = &r;
            if (r.detector == "im-lc") lc = &r;
        }
        o.require(ml != nullptr && lc != nullptr, "missing IM records");
        if (ml == nullptr || lc == nullptr) break;
        const double sigma = std::sqrt(std::pow(ber_sigma(*ml, mc.bits_per_block()), 2) +
                                       std::pow(ber_sigma(*lc, mc.bits_per_block()), 2));
        o.require(lc->ber >= ml->ber - 3.0 * sigma,
                  "two-stage detector beats ML beyond noise at " + fmt(snr) + " dB");
        gap_txt << " " << fmt(snr) << "dB:" << fmt(ml->ber) << "/" << fmt(lc->ber);
    }

    // (d) spectral-efficiency bookkeeping for the 16-symbol example
    SystemConfig se = default_config();
    se.n = 16;
    se.r = 3;
    se.scheme = Scheme::CpscRisIm;
    se.detectors = {DetectorId::ImMl};
    se.link_taps.clear();
    se.nakagami_m.clear();
    se.apply_defaults();
    o.require(std::abs(tx::spectral_efficiency(se) - 1.0) <= 1e-12, "IM efficiency != 18/18");
    SystemConfig se_plain = se;
    se_plain.scheme = Scheme::CpscRis;
    se_plain.detectors = {DetectorId::Ml};
    o.require(std::abs(tx::spectral_efficiency(se_plain) - 16.0 / 18.0) <= 1e-12,
              "plain efficiency != 16/18");

    // (e) a one-entry codebook collapses the IM bound onto the plain bound
    SystemConfig ris = default_config();
    ris.r = 1;
    ris.link_taps.clear();
    ris.nakagami_m.clear();
    ris.apply_defaults();
    SystemConfig im1 = ris;
    im1.scheme = Scheme::CpscRisIm;
    im1.detectors = {DetectorId::ImMl};
    const an::BoundEvaluator b_ris(ris);
    const an::BoundEvaluator b_im(im1);
    for (double n0 : {0.5, 0.05, 0.005}) {
        const double a = b_ris.evaluate(n0), b = b_im.evaluate(n0);
        o.require(std::abs(a - b) <= 1e-12 * std::max(a, b),
                  "single-pattern bound mismatch at n0 " + fmt(n0));
    }

    if (o.pass) o.detail << "ml/lc BER" << gap_txt.str();
    return o;
}

// ---------------------------------------------------------------------------
// criterion 9: more reflecting groups help; estimated CSI costs performance.
// ---------------------------------------------------------------------------
Outcome criterion_surface_benefit() {
    constexpr double kSigmas = 3.0;
    Outcome o;

    auto make_cfg = [](int r, CsiMode csi) {
        SystemConfig c = default_config();
        c.n = 16;
        c.r = r;
        c.scheme = r == 0 ? Scheme::Cpsc : Scheme::CpscRis;
        c.detectors = {DetectorId::Mmse};
        c.csi = csi;
        c.snr_db = {28, 32};
        c.min_trials = 200000;
        c.min_bit_errors = 1u << 30;
        c.link_taps.clear();
        c.nakagami_m.clear();
        c.apply_defaults();
        c.validate();
        return c;
    };

    hn::RunOptions opt;
    std::vector<std::vector<hn::BerRecord>> by_r;
    for (int r : {0, 2, 4}) by_r.push_back(hn::run_ber_sweep(make_cfg(r, CsiMode::Perfect), opt));

    const int bits = 16;
    const double snr_fixed = 32.0;
    auto pick = [&](const std::vector<hn::BerRecord>& recs, double snr) -> const hn::BerRecord& {
        for (const auto& r : recs)
            if (r.snr_db == snr) return r;
        throw std::runtime_error("missing record");
    };
    const auto& r0 = pick(by_r[0], snr_fixed);
    const auto& r2 = pick(by_r[1], snr_fixed);
    const auto& r4 = pick(by_r[2], snr_fixed);
    const double s02 = std::sqrt(std::pow(ber_sigma(r0, bits), 2) + std::pow(ber_sigma(r2, bits), 2));
    const double s24 = std::sqrt(std::pow(ber_sigma(r2, bits), 2) + std::pow(ber_sigma(r4, bits), 2));
    o.require(r0.ber - r2.ber > kSigmas * s02, "two groups do not beat the bare link");
    o.require(r2.ber - r4.ber > kSigmas * s24, "four groups do not beat two");

    const auto est_recs = hn::run_ber_sweep(make_cfg(4, CsiMode::Estimated), opt);
    for (double snr : {28.0, 32.0}) {
        const auto& perfect = pick(by_r[2], snr);
        const auto& estimated = pick(est_recs, snr);
        const double s = std::sqrt(std::pow(ber_sigma(perfect, bits), 2) +
                                   std::pow(ber_sigma(estimated, bits), 2));
        o.require(estimated.ber - perfect.ber > kSigmas * s,
                  "estimated CSI not worse at " + fmt(snr) + " dB");
    }

    if (o.pass)
        o.detail << "at 32 dB: R=0 " << fmt(r0.ber) << " > R=2 " << fmt(r2.ber) << " > R=4 "
                 << fmt(r4.ber) << "; estimated CSI degrades both points";
    return o;
}

// ---------------------------------------------------------------------------
// criterion 10: byte-identical CSV across reruns and thread counts, via the
// installed command-line binary.
// ---------------------------------------------------------------------------
std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Outcome criterion_cli_determinism(const std::string& cli) {
    Outcome o;
    if (cli.empty()) {
        o.require(false, "simulator binary path not provided");
        return o;
    }

    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "cpsc_acceptance";
    fs::create_directories(dir);

    const fs::path cfg_path = dir / "scenario.json";
    {
        std::ofstream f(cfg_path);
        f << R"({"n": 8, "m_order": 2, "r": 2, "snr_db": [20, 28], "master_seed": 77,)"
          << R"( "min_trials": 3000, "min_bit_errors": 1000000000,)"
          << R"( "detectors": ["ml", "zf", "mmse"]})";
    }

    auto run = [&](const std::string& args, const fs::path& out) {
        const std::string cmd =
            "'" + cli + "' " + args + " --out '" + out.string() + "' 2>/dev/null";
        return std::system(cmd.c_str()) == 0;
    };

    struct Job {
        std::string name;
        std::string args;
    };
    const std::vector<Job> jobs = {
        {"ber-t1", "ber --config '" + cfg_path.string() + "' --threads 1"},
        {"ber-t4", "ber --config '" + cfg_path.string() + "' --threads 4"},
        {"mse", "mse --snr 10:10:30 --trials 2000 --seed 5"},
        {"mse-t3", "mse --snr 10:10:30 --trials 2000 --seed 5 --threads 3"},
        {"bound", "bound --snr 0:8:40"},
        {"pep", "pep --pair 3,200 --draws 20000 --snr 16:8:32"},
        {"rankscan", "rankscan --config '" + cfg_path.string() + "'"},
    };

    std::string ber_reference;
    for (const Job& job : jobs) {
        const fs::path out_a = dir / (job.name + "_a.csv");
        const fs::path out_b = dir / (job.name + "_b.csv");
        const bool ok_a = run(job.args, out_a);
        const bool ok_b = run(job.args, out_b);
        o.require(ok_a && ok_b, job.name + " exited nonzero");
        if (!(ok_a && ok_b)) continue;
        const std::string a = slurp(out_a), b = slurp(out_b);
        o.require(!a.empty(), job.name + " wrote nothing");
        o.require(a == b, job.name + " reruns differ");
        if (job.name == "ber-t1") ber_reference = a;
        if (job.name == "ber-t4")
            o.require(a == ber_reference, "thread counts change the ber CSV");
    }

    if (o.pass) o.detail << jobs.size() << " invocations, all byte-identical";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";

    report(1, "pilot estimator MSE matches the closed form", criterion_mse());
    report(2, "flat-spectrum pilots are MSE-optimal (trace == spectral form)",
           criterion_pilot_optimality());
    report(3, "receive-equation constructions coincide", criterion_model_identities());

    const SweepData sweep = run_reference_sweep();
    report(4, "detector ordering ML < MMSE < ZF with 3-sigma margins",
           criterion_detector_ordering(sweep));
    report(5, "union bound dominates simulated ML BER and tightens at high SNR",
           criterion_union_bound(sweep));

    report(6, "closed-form PEP matches its Monte Carlo oracle within 10%",
           criterion_pep_oracle());
    report(7, "distance-rank facts and deterministic rank histogram", criterion_rank_facts());
    report(8, "index-modulation detectors, anchor, efficiency and bound checks", criterion_im());
    report(9, "reflecting groups improve BER; estimated CSI degrades it",
           criterion_surface_benefit());
    report(10, "CLI reruns are byte-identical across thread counts",
           criterion_cli_determinism(cli));

    std::cout << (10 - g_failures) << "/10 criteria passed\n";
    return g_failures;
}
