// cpscris: link-level simulation and analysis front end.
//
// Subcommands: ber, mse, bound, pep, rankscan. Each reads a JSON scenario
// (or the built-in default), applies command-line overrides, runs, and
// writes CSV to --out (stdout when omitted). Progress and timing go to
// stderr so piped CSV stays clean.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpsc/config.hpp"
#include "cpsc/harness.hpp"
#include "cpsc/kernels.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::string snr_spec;
    std::string kernels = "auto";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::uint64_t trials = 0;
    bool trials_set = false;
    std::string plot_path;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_trials = true) {
    cmd->add_option("--config", a.config_path, "JSON scenario file (built-in default if omitted)");
    cmd->add_option("--out", a.out_path, "output CSV path (stdout if omitted)");
    cmd->add_option("--snr", a.snr_spec, "SNR grid override, 'min:step:max' (dB) or single value");
    cmd->add_option("--kernels", a.kernels, "kernel backend: auto, scalar, avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
    cmd->add_option("--seed", a.seed, "master seed override")->each([&a](const std::string&) {
        a.seed_set = true;
    });
    cmd->add_option("--plot", a.plot_path, "also write a gnuplot script here");
    if (with_trials)
        cmd->add_option("--trials", a.trials, "min_trials override")->each([&a](const std::string&) {
            a.trials_set = true;
        });
}

cpsc::SystemConfig make_config(const CommonArgs& a) {
    cpsc::SystemConfig cfg =
        a.config_path.empty() ? cpsc::default_config() : cpsc::load_config(a.config_path);
    if (a.seed_set) cfg.master_seed = a.seed;
    if (a.trials_set) cfg.min_trials = a.trials;
    if (!a.snr_spec.empty()) cfg.snr_db = cpsc::parse_snr_range(a.snr_spec);
    return cfg;
}

void select_kernels(const std::string& choice) {
    using cpsc::kernels::Backend;
    if (choice == "scalar") {
        cpsc::kernels::set_backend(Backend::Scalar);
    } else if (choice == "avx2") {
        if (!cpsc::kernels::set_backend(Backend::Avx2))
            throw cpsc::ConfigError("kernels: avx2 not available on this machine");
    }
    std::cerr << "kernels: " << cpsc::kernels::backend_name(cpsc::kernels::active_backend())
              << "\n";
}

template <typename WriteFn>
void emit(const CommonArgs& a, const std::string& kind, WriteFn&& write) {
    if (a.out_path.empty()) {
        write(std::cout);
    } else {
        std::ofstream f(a.out_path, std::ios::binary);
        if (!f) throw cpsc::ConfigError("cannot open output file '" + a.out_path + "'");
        write(f);
    }
    if (!a.plot_path.empty()) {
        std::ofstream p(a.plot_path, std::ios::binary);
        if (!p) throw cpsc::ConfigError("cannot open plot file '" + a.plot_path + "'");
        p << cpsc::harness::plot_script(kind, a.out_path.empty() ? kind + ".csv" : a.out_path);
        std::cerr << "plot script: " << a.plot_path << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cyclic-prefixed single-carrier link simulator with a reconfigurable surface"};
    app.require_subcommand(1);

    CommonArgs ber_args, mse_args, bound_args, pep_args, rank_args;
    int threads = 1;
    bool timing = false;
    std::uint64_t min_errors = 0;
    bool min_errors_set = false;
    std::string detector_list;
    std::string pair_spec;
    std::uint64_t pep_draws = 100000;

    CLI::App* ber = app.add_subcommand("ber", "Monte Carlo bit error rate sweep");
    add_common(ber, ber_args);
    ber->add_option("--detectors", detector_list, "comma-separated detector list override");
    ber->add_option("--threads", threads, "worker threads (results independent of the count)");
    ber->add_option("--min-errors", min_errors, "min_bit_errors override")
        ->each([&](const std::string&) { min_errors_set = true; });
    ber->add_flag("--timing", timing, "write measured wall time into the CSV");

    CLI::App* mse = app.add_subcommand("mse", "channel estimator MSE sweep");
    add_common(mse, mse_args);
    mse->add_option("--threads", threads, "worker threads");

    CLI::App* bound = app.add_subcommand("bound", "closed-form BER union bound sweep");
    add_common(bound, bound_args, false);

    CLI::App* pep = app.add_subcommand("pep", "single-pair pairwise error probability");
    add_common(pep, pep_args, false);
    pep->add_option("--pair", pair_spec, "candidate pair 'idx_a,idx_b' (lexicographic indices)")
        ->required();
    pep->add_option("--draws", pep_draws, "Monte Carlo draws per cross-check");

    CLI::App* rank = app.add_subcommand("rankscan", "pair-rank (diversity) histogram");
    add_common(rank, rank_args, false);

    try {
        app.parse(argc, argv);

        const auto t0 = std::chrono::steady_clock::now();
        if (ber->parsed()) {
            select_kernels(ber_args.kernels);
            cpsc::SystemConfig cfg = make_config(ber_args);
            if (min_errors_set) cfg.min_bit_errors = min_errors;
            if (!detector_list.empty()) {
                cfg.detectors.clear();
                std::string cur;
                for (char c : detector_list + ",") {
                    if (c == ',') {
                        if (!cur.empty()) cfg.detectors.push_back(cpsc::detector_from_string(cur));
                        cur.clear();
                    } else {
                        cur += c;
                    }
                }
            }
            cpsc::harness::RunOptions opt;
            opt.threads = threads;
            opt.timing = timing;
            const auto records = cpsc::harness::run_ber_sweep(cfg, opt);
            emit(ber_args, "ber", [&](std::ostream& os) { cpsc::harness::write_ber_csv(os, records); });
        } else if (mse->parsed()) {
            select_kernels(mse_args.kernels);
            const cpsc::SystemConfig cfg = make_config(mse_args);
            cpsc::harness::RunOptions opt;
            opt.threads = threads;
            const auto records = cpsc::harness::run_mse_sweep(cfg, opt);
            emit(mse_args, "mse", [&](std::ostream& os) { cpsc::harness::write_mse_csv(os, records); });
        } else if (bound->parsed()) {
            select_kernels(bound_args.kernels);
            const cpsc::SystemConfig cfg = make_config(bound_args);
            const auto records = cpsc::harness::run_bound_sweep(cfg);
            emit(bound_args, "bound",
                 [&](std::ostream& os) { cpsc::harness::write_bound_csv(os, records); });
        } else if (pep->parsed()) {
            select_kernels(pep_args.kernels);
            const cpsc::SystemConfig cfg = make_config(pep_args);
            const auto comma = pair_spec.find(',');
            if (comma == std::string::npos)
                throw cpsc::ConfigError("pep: --pair expects 'idx_a,idx_b'");
            const std::uint64_t ia = std::stoull(pair_spec.substr(0, comma));
            const std::uint64_t ib = std::stoull(pair_spec.substr(comma + 1));
            const auto records = cpsc::harness::run_pep(cfg, ia, ib, pep_draws);
            emit(pep_args, "pep", [&](std::ostream& os) { cpsc::harness::write_pep_csv(os, records); });
        } else if (rank->parsed()) {
            select_kernels(rank_args.kernels);
            const cpsc::SystemConfig cfg = make_config(rank_args);
            int min_rank = 0;
            const auto records = cpsc::harness::run_rank_scan(cfg, &min_rank);
            emit(rank_args, "rankscan",
                 [&](std::ostream& os) { cpsc::harness::write_rank_csv(os, records); });
            std::cerr << "min rank: " << min_rank << "\n";
        }
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
        std::cerr << "elapsed: " << elapsed.count() << " s\n";
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
