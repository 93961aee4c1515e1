#include "cpsc/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace cpsc::channel {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559005768;
}

std::vector<double> power_delay_profile(int taps, double decay) {
    if (taps < 1) throw std::invalid_argument("pdp: taps >= 1");
    std::vector<double> w(static_cast<std::size_t>(taps));
    double sum = 0.0;
    for (int l = 0; l < taps; ++l) {
        w[l] = std::exp(-decay * l);
        sum += w[l];
    }
    for (double& v : w) v /= sum;
    return w;
}

std::vector<LinkProfile> link_profiles(const SystemConfig& cfg) {
    std::vector<LinkProfile> out(static_cast<std::size_t>(cfg.r) + 1);
    const double direct_gain = std::pow(cfg.d0, -cfg.pl_exp_direct);
    const double cascade_gain = static_cast<double>(cfg.n_g) * static_cast<double>(cfg.n_g) *
                                std::pow(cfg.d1, -cfg.pl_exp_tx_ris) *
                                std::pow(cfg.d2, -cfg.pl_exp_ris_rx);
    for (int link = 0; link <= cfg.r; ++link) {
        const double gain = (link == 0) ? direct_gain : cascade_gain;
        const auto pdp = power_delay_profile(cfg.link_taps[link], cfg.pdp_decay);
        LinkProfile& p = out[link];
        p.omega.resize(pdp.size());
        for (std::size_t l = 0; l < pdp.size(); ++l) p.omega[l] = gain * pdp[l];
        p.m = cfg.nakagami_m[link];
    }
    return out;
}

TapGaussian tap_gaussian(int m, double omega) {
    if (m < 1) throw std::invalid_argument("tap_gaussian: m >= 1");
    if (omega <= 0.0) throw std::invalid_argument("tap_gaussian: omega > 0");
    const double beta = std::sqrt(1.0 - 1.0 / static_cast<double>(m));
    return TapGaussian{std::sqrt(beta) * std::sqrt(omega), omega * (1.0 - beta)};
}

cd draw_tap(int m, double omega, std::mt19937_64& rng) {
    const TapGaussian g = tap_gaussian(m, omega);
    std::uniform_real_distribution<double> uni(0.0, kTwoPi);
    const double phi = uni(rng);
    const double sigma = std::sqrt(g.omega_s / 2.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double x = g.mu_abs * std::cos(phi) + sigma * gauss(rng);
    const double y = g.mu_abs * std::sin(phi) + sigma * gauss(rng);
    return {x, y};
}

ChannelRealization draw_channel(const SystemConfig& cfg, std::mt19937_64& rng) {
    const auto profiles = link_profiles(cfg);
    ChannelRealization ch;
    ch.links.resize(profiles.size());
    for (std::size_t link = 0; link < profiles.size(); ++link) {
        const LinkProfile& p = profiles[link];
        ch.links[link].resize(p.omega.size());
        for (std::size_t l = 0; l < p.omega.size(); ++l)
            ch.links[link][l] = draw_tap(p.m[l], p.omega[l], rng);
    }
    return ch;
}

cvec assemble_equivalent_cir(const SystemConfig& cfg, const ChannelRealization& ch,
                             const std::vector<int>& delays) {
    if (ch.links.size() != delays.size())
        throw std::invalid_argument("assemble: one delay per link required");
    cvec g(static_cast<std::size_t>(cfg.n), cd(0.0, 0.0));
    for (std::size_t link = 0; link < ch.links.size(); ++link) {
        const cvec& taps = ch.links[link];
        for (std::size_t l = 0; l < taps.size(); ++l) {
            const int pos = delays[link] + static_cast<int>(l);
            if (pos >= cfg.n) throw std::invalid_argument("assemble: tap beyond block length");
            if (g[pos] != cd(0.0, 0.0))
                throw std::invalid_argument("assemble: overlapping link taps");
            g[pos] = taps[l];
        }
    }
    return g;
}

cvec core_vector(const ChannelRealization& ch) {
    cvec out;
    for (const cvec& link : ch.links) out.insert(out.end(), link.begin(), link.end());
    return out;
}

}  // namespace cpsc::channel
