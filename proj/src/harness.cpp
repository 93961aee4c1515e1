#include "cpsc/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>
#include <thread>

#include "cpsc/analysis.hpp"
#include "cpsc/channel.hpp"
#include "cpsc/detection.hpp"
#include "cpsc/estimation.hpp"
#include "cpsc/kernels.hpp"
#include "cpsc/numerics.hpp"
#include "cpsc/rng.hpp"
#include "cpsc/transceiver.hpp"

namespace cpsc::harness {

namespace {

constexpr std::uint64_t kBatch = 1024;

double n0_from_snr(const SystemConfig& cfg, double snr_db) {
    return cfg.energy_per_bit() / std::pow(10.0, snr_db / 10.0);
}

// Splits [t0, t1) across threads; fn(trial) must only touch state owned by
// its slot. Loop order inside a thread is ascending, and every reduction
// downstream is either integer or slot-buffered, so thread count never
// changes results.
template <typename Fn>
void for_each_trial(std::uint64_t t0, std::uint64_t t1, int threads, Fn&& fn) {
    if (threads <= 1) {
        for (std::uint64_t t = t0; t < t1; ++t) fn(t);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w]() {
            for (std::uint64_t t = t0 + static_cast<std::uint64_t>(w); t < t1;
                 t += static_cast<std::uint64_t>(threads))
                fn(t);
        });
    }
    for (std::thread& th : pool) th.join();
}

struct SweepSetup {
    bool im = false;
    bool anchored = false;
    transceiver::PermutationCode code = transceiver::PermutationCode::make(0);
    std::vector<std::vector<int>> delay_sets;     // per codebook entry
    std::vector<std::vector<int>> position_sets;  // per codebook entry
    cvec pilot;                                   // estimated CSI only
    std::vector<int> identity_support;
};

SweepSetup make_setup(const SystemConfig& cfg) {
    SweepSetup s;
    s.im = cfg.scheme == Scheme::CpscRisIm;
    s.code = transceiver::PermutationCode::make(s.im ? cfg.r : 0);
    s.anchored = s.im && s.code.bits() >= 1;
    if (s.im) {
        for (std::size_t k = 0; k < s.code.size(); ++k) {
            s.delay_sets.push_back(cfg.link_delays(s.code.permutation(k)));
            s.position_sets.push_back(cfg.core_positions(s.delay_sets.back()));
        }
    } else {
        s.delay_sets.push_back(cfg.link_delays());
        s.position_sets.push_back(cfg.core_positions());
    }
    s.identity_support = cfg.core_positions();
    if (cfg.csi == CsiMode::Estimated) s.pilot = estimation::zadoff_chu_pilot(cfg.n, cfg.zc_root);
    return s;
}

// Move the estimated core taps from the identity pattern onto pattern k;
// off-support estimate entries do not transfer.
cvec permute_estimate(const SystemConfig& cfg, const SweepSetup& s, const cvec& g_hat,
                      std::size_t k) {
    cvec g(static_cast<std::size_t>(cfg.n), cd(0.0, 0.0));
    const auto& from = s.identity_support;
    const auto& to = s.position_sets[k];
    for (std::size_t l = 0; l < from.size(); ++l) g[to[l]] = g_hat[from[l]];
    return g;
}

std::uint64_t hamming(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    std::uint64_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1u : 0u;
    return d;
}

// One synthesized block plus every requested detector decision; returns
// bit-error counts in `errors` (same indexing as `dets`).
void run_trial(const SystemConfig& cfg, const SweepSetup& s, double n0,
               std::mt19937_64& rng, const std::vector<DetectorId>& dets,
               const std::vector<char>& active, std::vector<std::uint64_t>& errors) {
    const auto ch = channel::draw_channel(cfg, rng);

    estimation::ChannelEstimate est;
    if (cfg.csi == CsiMode::Estimated) {
        const cvec g_id = channel::assemble_equivalent_cir(cfg, ch, cfg.link_delays());
        const cvec yp = transceiver::synthesize_received(s.pilot, g_id, n0, rng);
        est = estimation::ls_estimate(yp, s.pilot, n0);
        if (cfg.denoise_estimate) estimation::mask_support(est, s.identity_support);
    }

    std::vector<std::uint8_t> tx_bits;
    std::size_t k_idx = 0;
    if (s.im) {
        tx_bits = transceiver::random_bits(static_cast<std::size_t>(s.code.bits()), rng);
        k_idx = s.code.encode(tx_bits);
    }
    const auto data_bits = transceiver::random_bits(
        static_cast<std::size_t>(cfg.n) * static_cast<std::size_t>(cfg.bits_per_symbol()), rng);
    tx_bits.insert(tx_bits.end(), data_bits.begin(), data_bits.end());

    cvec x = transceiver::psk_modulate(data_bits, cfg.m_order);
    if (s.anchored) x = transceiver::apply_anchor(x, cfg.m_order);

    const cvec g_tx = channel::assemble_equivalent_cir(cfg, ch, s.delay_sets[k_idx]);
    const cvec y = transceiver::synthesize_received(x, g_tx, n0, rng);

    // per-detector channel knowledge
    cvec g_point;  // non-IM detectors
    std::vector<cvec> g_set;  // IM detectors, one per codebook entry
    if (s.im) {
        g_set.resize(s.code.size());
        for (std::size_t k = 0; k < s.code.size(); ++k)
            g_set[k] = cfg.csi == CsiMode::Perfect
                           ? channel::assemble_equivalent_cir(cfg, ch, s.delay_sets[k])
                           : permute_estimate(cfg, s, est.g_hat, k);
    } else {
        g_point = cfg.csi == CsiMode::Perfect ? g_tx : est.g_hat;
    }

    for (std::size_t d = 0; d < dets.size(); ++d) {
        if (!active[d]) continue;
        try {
            detection::DetectionResult res;
            switch (dets[d]) {
                case DetectorId::Ml:
                    res = detection::ml_detect(y, g_point, cfg.m_order);
                    break;
                case DetectorId::Zf:
                    res = detection::linear_detect(y, g_point, n0, detection::Equalizer::Zf,
                                                   cfg.m_order);
                    break;
                case DetectorId::Mmse:
                    res = detection::linear_detect(y, g_point, n0, detection::Equalizer::Mmse,
                                                   cfg.m_order);
                    break;
                case DetectorId::ImMl:
                    res = detection::im_ml_detect(y, g_set, s.code, cfg.m_order);
                    break;
                case DetectorId::ImLc:
                    res = detection::im_lc_detect(y, g_set, s.code, cfg.m_order, n0);
                    break;
            }
            errors[d] += hamming(res.bits, tx_bits);
        } catch (const SingularityError&) {
            // deep fade under ZF: score the whole block as lost
            errors[d] += static_cast<std::uint64_t>(cfg.bits_per_block());
        }
    }
}

}  // namespace

std::vector<BerRecord> run_ber_sweep(const SystemConfig& cfg, const RunOptions& opt) {
    cfg.validate();
    if (cfg.detectors.empty()) throw ConfigError("ber sweep: no detectors configured");
    if (cfg.snr_db.empty()) throw ConfigError("ber sweep: empty snr grid");

    const SweepSetup setup = make_setup(cfg);
    const int threads = std::max(1, opt.threads);
    const std::uint64_t block_bits = static_cast<std::uint64_t>(cfg.bits_per_block());
    std::vector<BerRecord> out;

    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
        const double n0 = n0_from_snr(cfg, cfg.snr_db[si]);
        const auto t_start = std::chrono::steady_clock::now();

        std::vector<std::uint64_t> errors(cfg.detectors.size(), 0);
        std::vector<char> active(cfg.detectors.size(), 1);
        std::vector<BerRecord> point(cfg.detectors.size());
        std::size_t remaining = cfg.detectors.size();
        std::uint64_t trials_done = 0;

        while (remaining > 0) {
            const std::uint64_t t0 = trials_done;
            const std::uint64_t t1 = trials_done + kBatch;

            std::vector<std::vector<std::uint64_t>> locals(
                static_cast<std::size_t>(threads),
                std::vector<std::uint64_t>(cfg.detectors.size(), 0));
            for_each_trial(t0, t1, threads, [&](std::uint64_t t) {
                const std::size_t slot = threads <= 1 ? 0 : static_cast<std::size_t>((t - t0) %
                                                            static_cast<std::uint64_t>(threads));
                std::mt19937_64 rng = make_trial_rng(cfg.master_seed, si, t);
                run_trial(cfg, setup, n0, rng, cfg.detectors, active, locals[slot]);
            });
            for (const auto& local : locals)
                for (std::size_t d = 0; d < errors.size(); ++d) errors[d] += local[d];
            trials_done = t1;

            for (std::size_t d = 0; d < cfg.detectors.size(); ++d) {
                if (!active[d]) continue;
                if (trials_done >= cfg.min_trials || errors[d] >= cfg.min_bit_errors) {
                    active[d] = 0;
                    --remaining;
                    BerRecord& r = point[d];
                    r.scheme = to_string(cfg.scheme);
                    r.detector = to_string(cfg.detectors[d]);
                    r.snr_db = cfg.snr_db[si];
                    r.trials = trials_done;
                    r.bit_errors = errors[d];
                    r.ber = static_cast<double>(errors[d]) /
                            (static_cast<double>(trials_done) * static_cast<double>(block_bits));
                    r.seed = cfg.master_seed;
                    if (opt.timing) {
                        const std::chrono::duration<double> el =
                            std::chrono::steady_clock::now() - t_start;
                        r.wall_time_s = el.count();
                    }
                }
            }
        }
        out.insert(out.end(), point.begin(), point.end());
    }
    return out;
}

std::vector<MseRecord> run_mse_sweep(const SystemConfig& cfg, const RunOptions& opt) {
    cfg.validate();
    if (cfg.snr_db.empty()) throw ConfigError("mse sweep: empty snr grid");
    SystemConfig c = cfg;
    c.csi = CsiMode::Estimated;
    c.validate();

    const cvec pilot = estimation::zadoff_chu_pilot(c.n, c.zc_root);
    const auto support = c.core_positions();
    const auto identity = c.link_delays();
    const int threads = std::max(1, opt.threads);
    std::vector<MseRecord> out;

    for (std::size_t si = 0; si < c.snr_db.size(); ++si) {
        // the grid is 10 log10(1/N0) for this sweep
        const double n0 = std::pow(10.0, -c.snr_db[si] / 10.0);
        const std::uint64_t trials = c.min_trials;
        double acc = 0.0;
        std::vector<double> slots(kBatch);

        for (std::uint64_t t0 = 0; t0 < trials; t0 += kBatch) {
            const std::uint64_t t1 = std::min(trials, t0 + kBatch);
            for_each_trial(t0, t1, threads, [&](std::uint64_t t) {
                std::mt19937_64 rng = make_trial_rng(c.master_seed, si, t);
                const auto ch = channel::draw_channel(c, rng);
                const cvec g = channel::assemble_equivalent_cir(c, ch, identity);
                const cvec yp = transceiver::synthesize_received(pilot, g, n0, rng);
                auto est = estimation::ls_estimate(yp, pilot, n0);
                if (c.denoise_estimate) estimation::mask_support(est, support);
                slots[t - t0] = kernels::squared_norm_diff(est.g_hat.data(), g.data(), g.size());
            });
            for (std::uint64_t t = t0; t < t1; ++t) acc += slots[t - t0];  // fixed order
        }

        MseRecord r;
        r.inv_n0 = 1.0 / n0;
        r.mse_empirical = acc / static_cast<double>(trials);
        r.mse_theoretical = estimation::theoretical_mse(pilot, n0);
        out.push_back(r);
    }
    return out;
}

std::vector<BoundRecord> run_bound_sweep(const SystemConfig& cfg) {
    cfg.validate();
    if (cfg.snr_db.empty()) throw ConfigError("bound sweep: empty snr grid");
    const analysis::BoundEvaluator ev(cfg);
    std::vector<BoundRecord> out;
    for (double snr : cfg.snr_db) {
        BoundRecord r;
        r.scheme = to_string(cfg.scheme);
        r.snr_db = snr;
        r.union_bound = ev.evaluate(n0_from_snr(cfg, snr));
        out.push_back(r);
    }
    return out;
}

namespace {

struct PairCandidate {
    cvec block;
    std::vector<int> positions;
};

PairCandidate candidate_from_index(const SystemConfig& cfg, const SweepSetup& s,
                                   std::uint64_t index) {
    const std::uint64_t words = std::uint64_t{1}
                                << (static_cast<unsigned>(cfg.n) *
                                    static_cast<unsigned>(cfg.bits_per_symbol()));
    const std::uint64_t total = words * s.code.size();
    if (index >= total) throw ConfigError("pep: pair index out of range");
    const std::uint64_t k = index / words;
    std::uint64_t w = index % words;

    const cvec points = transceiver::constellation(cfg.m_order);
    PairCandidate c;
    c.block.resize(static_cast<std::size_t>(cfg.n));
    for (int i = cfg.n - 1; i >= 0; --i) {
        c.block[static_cast<std::size_t>(i)] =
            points[static_cast<std::size_t>(w % static_cast<std::uint64_t>(cfg.m_order))];
        w /= static_cast<std::uint64_t>(cfg.m_order);
    }
    if (s.anchored) c.block = transceiver::apply_anchor(c.block, cfg.m_order);
    c.positions = s.position_sets[static_cast<std::size_t>(k)];
    return c;
}

}  // namespace

std::vector<PepRecord> run_pep(const SystemConfig& cfg, std::uint64_t idx_a,
                               std::uint64_t idx_b, std::uint64_t draws) {
    cfg.validate();
    if (cfg.snr_db.empty()) throw ConfigError("pep: empty snr grid");
    if (idx_a == idx_b) throw ConfigError("pep: pair indices must differ");
    if (static_cast<std::uint64_t>(cfg.n) * static_cast<std::uint64_t>(cfg.bits_per_symbol()) > 20)
        throw CapacityError("pep: candidate space exceeds 2^20");

    const SweepSetup setup = make_setup(cfg);
    const PairCandidate a = candidate_from_index(cfg, setup, idx_a);
    const PairCandidate b = candidate_from_index(cfg, setup, idx_b);
    const auto stats = analysis::build_tap_statistics(cfg);
    const auto ps = analysis::build_pair_spectrum(a.block, b.block, a.positions, b.positions, stats);
    const CMatrix c = analysis::pair_difference(a.block, b.block, a.positions, b.positions);

    std::vector<PepRecord> out;
    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
        const double n0 = n0_from_snr(cfg, cfg.snr_db[si]);
        PepRecord rec;
        rec.snr_db = cfg.snr_db[si];
        rec.uncond_pep = analysis::unconditional_pep(ps, n0);

        // one seeded realization for the conditional column
        std::mt19937_64 rng_cond = make_trial_rng(cfg.master_seed, si, 0);
        const auto ch = channel::draw_channel(cfg, rng_cond);
        const cvec g = channel::core_vector(ch);
        cvec e(static_cast<std::size_t>(cfg.n), cd(0.0, 0.0));
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::size_t l = 0; l < g.size(); ++l) e[i] += c(i, l) * g[l];
        const double dist_sq = kernels::squared_norm(e.data(), e.size());
        rec.cond_pep = analysis::q_func(std::sqrt(dist_sq / (2.0 * n0)));

        std::mt19937_64 rng_noise = make_trial_rng(cfg.master_seed, si, 1);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double sigma = std::sqrt(n0 / 2.0);
        std::uint64_t hits = 0;
        for (std::uint64_t t = 0; t < draws; ++t) {
            double lhs = 0.0, rhs = 0.0;
            for (std::size_t i = 0; i < e.size(); ++i) {
                const double wr = sigma * gauss(rng_noise);
                const double wi = sigma * gauss(rng_noise);
                lhs += (e[i].real() + wr) * (e[i].real() + wr) +
                       (e[i].imag() + wi) * (e[i].imag() + wi);
                rhs += wr * wr + wi * wi;
            }
            if (lhs < rhs) ++hits;
        }
        rec.cond_mc = static_cast<double>(hits) / static_cast<double>(draws);

        std::mt19937_64 rng_model = make_trial_rng(cfg.master_seed, si, 2);
        rec.uncond_mc_model = analysis::mc_pep_model(ps, n0, draws, rng_model);

        std::mt19937_64 rng_chan = make_trial_rng(cfg.master_seed, si, 3);
        rec.uncond_mc_channel = analysis::mc_pep_channel(a.block, b.block, a.positions,
                                                         b.positions, cfg, n0, draws, rng_chan);
        out.push_back(rec);
    }
    return out;
}

std::vector<RankRecord> run_rank_scan(const SystemConfig& cfg, int* min_rank) {
    cfg.validate();
    const analysis::RankScan rs = analysis::rank_scan(cfg);
    if (min_rank != nullptr) *min_rank = rs.min_rank;
    std::vector<RankRecord> out;
    for (const auto& [rank, count] : rs.histogram) out.push_back(RankRecord{rank, count});
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_ber_csv(std::ostream& os, const std::vector<BerRecord>& records) {
    os << "scheme,detector,snr_db,trials,bit_errors,ber,seed,wall_time_s\n";
    for (const BerRecord& r : records) {
        os << r.scheme << ',' << r.detector << ',' << format_double(r.snr_db) << ',' << r.trials
           << ',' << r.bit_errors << ',' << format_double(r.ber) << ',' << r.seed << ','
           << format_double(r.wall_time_s) << '\n';
    }
}

void write_mse_csv(std::ostream& os, const std::vector<MseRecord>& records) {
    os << "inv_n0,mse_empirical,mse_theoretical\n";
    for (const MseRecord& r : records) {
        os << format_double(r.inv_n0) << ',' << format_double(r.mse_empirical) << ','
           << format_double(r.mse_theoretical) << '\n';
    }
}

void write_bound_csv(std::ostream& os, const std::vector<BoundRecord>& records) {
    os << "scheme,snr_db,union_bound\n";
    for (const BoundRecord& r : records)
        os << r.scheme << ',' << format_double(r.snr_db) << ',' << format_double(r.union_bound)
           << '\n';
}

void write_pep_csv(std::ostream& os, const std::vector<PepRecord>& records) {
    os << "snr_db,cond_pep,cond_mc,uncond_pep,uncond_mc_model,uncond_mc_channel\n";
    for (const PepRecord& r : records) {
        os << format_double(r.snr_db) << ',' << format_double(r.cond_pep) << ','
           << format_double(r.cond_mc) << ',' << format_double(r.uncond_pep) << ','
           << format_double(r.uncond_mc_model) << ',' << format_double(r.uncond_mc_channel)
           << '\n';
    }
}

void write_rank_csv(std::ostream& os, const std::vector<RankRecord>& records) {
    os << "rank,count\n";
    for (const RankRecord& r : records) os << r.rank << ',' << r.count << '\n';
}

std::string plot_script(const std::string& kind, const std::string& csv_path) {
    std::string s;
    s += "set datafile separator ','\n";
    s += "set grid\nset key outside\n";
    if (kind == "ber") {
        s += "set logscale y\nset xlabel 'Eb/N0 (dB)'\nset ylabel 'BER'\n";
        s += "dets = 'ml zf mmse im-ml im-lc'\n";
        s += "plot for [d in dets] '" + csv_path +
             "' using (strcol(2) eq d ? $3 : NaN):6 skip 1 title d with linespoints\n";
    } else if (kind == "mse") {
        s += "set logscale xy\nset xlabel '1/N0'\nset ylabel 'MSE'\n";
        s += "plot '" + csv_path + "' using 1:2 skip 1 title 'empirical' with points, '" +
             csv_path + "' using 1:3 skip 1 title 'closed form' with lines\n";
    } else if (kind == "bound") {
        s += "set logscale y\nset xlabel 'Eb/N0 (dB)'\nset ylabel 'union bound'\n";
        s += "plot '" + csv_path + "' using 2:3 skip 1 title 'union bound' with linespoints\n";
    } else if (kind == "pep") {
        s += "set logscale y\nset xlabel 'Eb/N0 (dB)'\nset ylabel 'PEP'\n";
        s += "plot '" + csv_path + "' using 1:4 skip 1 title 'closed form' with lines, '" +
             csv_path + "' using 1:5 skip 1 title 'mc (model)' with points, '" + csv_path +
             "' using 1:6 skip 1 title 'mc (channel)' with points\n";
    } else if (kind == "rankscan") {
        s += "set style fill solid\nset xlabel 'rank'\nset ylabel 'pairs'\n";
        s += "plot '" + csv_path + "' using 1:2 skip 1 notitle with boxes\n";
    } else {
        throw ConfigError("plot_script: unknown kind '" + kind + "'");
    }
    return s;
}

}  // namespace cpsc::harness
