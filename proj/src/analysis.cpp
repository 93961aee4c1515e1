#include "cpsc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cpsc/channel.hpp"
#include "cpsc/kernels.hpp"
#include "cpsc/numerics.hpp"
#include "cpsc/transceiver.hpp"

namespace cpsc::analysis {

double q_func(double x) { return 0.5 * std::erfc(x / 1.4142135623730951); }

double chiani_q(double x) {
    return std::exp(-0.5 * x * x) / 12.0 + std::exp(-2.0 * x * x / 3.0) / 4.0;
}

TapStatistics build_tap_statistics(const SystemConfig& cfg) {
    TapStatistics st;
    for (const auto& link : channel::link_profiles(cfg)) {
        for (std::size_t l = 0; l < link.omega.size(); ++l) {
            const auto g = channel::tap_gaussian(link.m[l], link.omega[l]);
            st.omega.push_back(link.omega[l]);
            st.omega_s.push_back(g.omega_s);
            st.mu_abs.push_back(g.mu_abs);
            st.m.push_back(link.m[l]);
        }
    }
    return st;
}

CMatrix pair_difference(const cvec& xa, const cvec& xb,
                        const std::vector<int>& pos_a, const std::vector<int>& pos_b) {
    const std::size_t n = xa.size();
    const std::size_t ls = pos_a.size();
    if (xb.size() != n || pos_b.size() != ls)
        throw std::invalid_argument("pair spectrum: size mismatch");
    CMatrix c(n, ls);
    for (std::size_t l = 0; l < ls; ++l) {
        const std::size_t pa = static_cast<std::size_t>(pos_a[l]) % n;
        const std::size_t pb = static_cast<std::size_t>(pos_b[l]) % n;
        for (std::size_t i = 0; i < n; ++i)
            c(i, l) = xa[(i + n - pa) % n] - xb[(i + n - pb) % n];
    }
    return c;
}

PairSpectrum build_pair_spectrum(const cvec& xa, const cvec& xb,
                                 const std::vector<int>& pos_a,
                                 const std::vector<int>& pos_b,
                                 const TapStatistics& stats) {
    const std::size_t ls = pos_a.size();
    if (stats.omega_s.size() != ls)
        throw std::invalid_argument("pair spectrum: statistics/position size mismatch");

    const CMatrix c = pair_difference(xa, xb, pos_a, pos_b);
    const numerics::EigResult eig = numerics::hermitian_eig(numerics::gram(c));

    PairSpectrum ps;
    ps.d.resize(ls);
    ps.gamma.resize(ls);
    ps.mu_sq.resize(ls);
    for (std::size_t l = 0; l < ls; ++l) {
        ps.d[l] = std::max(0.0, eig.eigenvalues[l]);
        double gamma = 0.0;
        cd mu = 0.0;
        for (std::size_t i = 0; i < ls; ++i) {
            gamma += std::norm(eig.u(l, i)) * stats.omega_s[i];
            mu += eig.u(l, i) * stats.mu_abs[i];
        }
        ps.gamma[l] = gamma;
        ps.mu_sq[l] = std::norm(mu);
    }
    const double top = ps.d.empty() ? 0.0 : ps.d[0];
    ps.rank = 0;
    for (double d : ps.d)
        if (d > 1e-9 * top && top > 0.0) ++ps.rank;
    return ps;
}

double conditional_pep(const cvec& xa, const cvec& xb, const cvec& g_eq,
                       double n0, double sigma_e_sq) {
    if (n0 <= 0.0) throw std::invalid_argument("conditional_pep: n0 > 0");
    if (sigma_e_sq < 0.0) throw std::invalid_argument("conditional_pep: sigma_e_sq >= 0");
    const numerics::CirculantMatrix ca(xa), cb(xb);
    const cvec va = ca.multiply(g_eq);
    const cvec vb = cb.multiply(g_eq);
    const std::size_t n = va.size();
    cvec diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = va[i] - vb[i];
    const double dist_sq = kernels::squared_norm(diff.data(), n);
    if (dist_sq == 0.0) return 0.5;  // indistinguishable hypotheses
    double denom = 2.0 * n0 * dist_sq;
    if (sigma_e_sq > 0.0) {
        const cvec xv = ca.multiply_conj_transpose(diff);
        denom += 2.0 * sigma_e_sq * kernels::squared_norm(xv.data(), xv.size());
    }
    return q_func(dist_sq / std::sqrt(denom));
}

double tap_mgf(double t, double gamma, double mu_sq) {
    const double denom = 1.0 - t * gamma;
    if (denom <= 0.0) throw std::domain_error("tap_mgf: pole crossed (1 - t*gamma <= 0)");
    return std::exp(t * mu_sq / denom) / denom;
}

double unconditional_pep(const PairSpectrum& ps, double n0) {
    if (n0 <= 0.0) throw std::invalid_argument("unconditional_pep: n0 > 0");
    double p4 = 1.0, p3 = 1.0;
    for (std::size_t l = 0; l < ps.d.size(); ++l) {
        if (ps.d[l] <= 0.0) continue;
        p4 *= tap_mgf(-ps.d[l] / (4.0 * n0), ps.gamma[l], ps.mu_sq[l]);
        p3 *= tap_mgf(-ps.d[l] / (3.0 * n0), ps.gamma[l], ps.mu_sq[l]);
    }
    return p4 / 12.0 + p3 / 4.0;
}

double mc_pep_model(const PairSpectrum& ps, double n0, std::uint64_t draws,
                    std::mt19937_64& rng) {
    if (n0 <= 0.0) throw std::invalid_argument("mc_pep_model: n0 > 0");
    if (draws == 0) throw std::invalid_argument("mc_pep_model: draws > 0");
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::size_t> active;
    for (std::size_t l = 0; l < ps.d.size(); ++l)
        if (ps.d[l] > 0.0) active.push_back(l);

    double acc = 0.0;
    for (std::uint64_t i = 0; i < draws; ++i) {
        double s = 0.0;
        for (std::size_t l : active) {
            const double sd = std::sqrt(ps.gamma[l] / 2.0);
            const double re = std::sqrt(ps.mu_sq[l]) + sd * gauss(rng);
            const double im = sd * gauss(rng);
            s += ps.d[l] * (re * re + im * im);
        }
        acc += std::exp(-s / (4.0 * n0)) / 12.0 + std::exp(-s / (3.0 * n0)) / 4.0;
    }
    return acc / static_cast<double>(draws);
}

double mc_pep_channel(const cvec& xa, const cvec& xb,
                      const std::vector<int>& pos_a, const std::vector<int>& pos_b,
                      const SystemConfig& cfg, double n0, std::uint64_t draws,
                      std::mt19937_64& rng) {
    if (n0 <= 0.0) throw std::invalid_argument("mc_pep_channel: n0 > 0");
    if (draws == 0) throw std::invalid_argument("mc_pep_channel: draws > 0");
    const CMatrix c = pair_difference(xa, xb, pos_a, pos_b);
    const std::size_t n = c.rows(), ls = c.cols();

    double acc = 0.0;
    for (std::uint64_t i = 0; i < draws; ++i) {
        const auto ch = channel::draw_channel(cfg, rng);
        const cvec g = channel::core_vector(ch);
        double dist_sq = 0.0;
        for (std::size_t row = 0; row < n; ++row) {
            cd e = 0.0;
            for (std::size_t l = 0; l < ls; ++l) e += c(row, l) * g[l];
            dist_sq += std::norm(e);
        }
        acc += q_func(std::sqrt(dist_sq / (2.0 * n0)));
    }
    return acc / static_cast<double>(draws);
}

namespace {

struct Candidate {
    cvec block;                       // transmitted block (anchored for IM)
    std::vector<std::uint8_t> bits;   // im bits then data bits
    std::size_t pattern = 0;          // delay-pattern index
};

int hamming(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1 : 0;
    return d;
}

std::vector<Candidate> enumerate_candidates(const SystemConfig& cfg,
                                            std::vector<std::vector<int>>& patterns) {
    const bool im = cfg.scheme == Scheme::CpscRisIm;
    const auto code = transceiver::PermutationCode::make(im ? cfg.r : 0);
    const bool anchored = im && code.bits() >= 1;

    patterns.clear();
    if (im) {
        for (std::size_t k = 0; k < code.size(); ++k)
            patterns.push_back(cfg.core_positions(cfg.link_delays(code.permutation(k))));
    } else {
        patterns.push_back(cfg.core_positions());
    }

    const int bps = cfg.bits_per_symbol();
    const std::size_t words = std::size_t{1} << (cfg.n * bps);
    std::vector<Candidate> out;
    out.reserve(words * patterns.size());
    const cvec points = transceiver::constellation(cfg.m_order);

    for (std::size_t k = 0; k < patterns.size(); ++k) {
        std::vector<int> digits(static_cast<std::size_t>(cfg.n), 0);
        for (std::size_t w = 0; w < words; ++w) {
            Candidate c;
            c.pattern = k;
            c.block.resize(static_cast<std::size_t>(cfg.n));
            c.bits = im ? code.decode(k) : std::vector<std::uint8_t>{};
            for (int s = 0; s < cfg.n; ++s) {
                c.block[s] = points[static_cast<std::size_t>(digits[s])];
                const std::uint32_t gw = transceiver::gray_code(static_cast<std::uint32_t>(digits[s]));
                for (int b = 0; b < bps; ++b)
                    c.bits.push_back(static_cast<std::uint8_t>((gw >> (bps - 1 - b)) & 1u));
            }
            if (anchored) c.block = transceiver::apply_anchor(c.block, cfg.m_order);
            out.push_back(std::move(c));
            for (std::size_t i = digits.size(); i-- > 0;) {
                if (++digits[i] < cfg.m_order) break;
                digits[i] = 0;
            }
        }
    }
    return out;
}

}  // namespace

BoundEvaluator::BoundEvaluator(const SystemConfig& cfg) {
    bits_per_word_ = cfg.bits_per_block();
    if (bits_per_word_ > 12) throw CapacityError("union bound: 2^bits exceeds 2^12");
    const TapStatistics stats = build_tap_statistics(cfg);

    std::vector<std::vector<int>> patterns;
    const std::vector<Candidate> cands = enumerate_candidates(cfg, patterns);
    word_count_ = cands.size();

    min_rank_ = 0;
    for (std::size_t a = 0; a < cands.size(); ++a) {
        for (std::size_t b = a + 1; b < cands.size(); ++b) {
            WeightedSpectrum ws;
            ws.ps = build_pair_spectrum(cands[a].block, cands[b].block,
                                        patterns[cands[a].pattern],
                                        patterns[cands[b].pattern], stats);
            ws.weight = 2.0 * hamming(cands[a].bits, cands[b].bits);
            ++histogram_[ws.ps.rank];
            if (min_rank_ == 0 || ws.ps.rank < min_rank_) min_rank_ = ws.ps.rank;
            spectra_.push_back(std::move(ws));
        }
    }
    pair_count_ = spectra_.size();
}

double BoundEvaluator::evaluate(double n0) const {
    double acc = 0.0;
    for (const WeightedSpectrum& ws : spectra_)
        acc += ws.weight * unconditional_pep(ws.ps, n0);
    return acc / (static_cast<double>(bits_per_word_) * static_cast<double>(word_count_));
}

RankScan rank_scan(const SystemConfig& cfg) {
    const BoundEvaluator ev(cfg);
    RankScan rs;
    rs.histogram = ev.rank_histogram();
    rs.min_rank = ev.min_rank();
    rs.pairs = ev.pair_count();
    return rs;
}

}  // namespace cpsc::analysis
