#include "cpsc/estimation.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cpsc/numerics.hpp"

namespace cpsc::estimation {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

cvec zadoff_chu_pilot(int n_len, int root) {
    if (n_len < 2 || n_len % 2 != 0)
        throw std::invalid_argument("zadoff_chu_pilot: block length must be even and >= 2");
    if (std::gcd(root, n_len) != 1)
        throw std::invalid_argument("zadoff_chu_pilot: gcd(root, length) must be 1");
    cvec x(static_cast<std::size_t>(n_len));
    for (int k = 0; k < n_len; ++k) {
        // exact mod keeps the phase argument small for any k
        const long long q = (static_cast<long long>(root) * k * k) % (2LL * n_len);
        const double ang = kPi * static_cast<double>(q) / static_cast<double>(n_len);
        x[k] = cd(std::cos(ang), std::sin(ang));
    }
    return x;
}

namespace {

// true when cir(pilot)^H cir(pilot) = N I, i.e. the pilot spectrum is flat
bool flat_spectrum(const cvec& lambda, double n) {
    for (const cd& v : lambda)
        if (std::abs(std::norm(v) - n) > 1e-9 * n) return false;
    return true;
}

}  // namespace

ChannelEstimate ls_estimate(const cvec& y, const cvec& pilot, double n0) {
    if (y.size() != pilot.size() || y.empty())
        throw std::invalid_argument("ls_estimate: length mismatch");
    if (n0 < 0.0) throw std::invalid_argument("ls_estimate: n0 >= 0");
    const double n = static_cast<double>(y.size());

    const cvec lambda = numerics::dft_plain(pilot);
    ChannelEstimate est;
    if (flat_spectrum(lambda, n)) {
        numerics::CirculantMatrix xp(pilot);
        est.g_hat = xp.multiply_conj_transpose(y);
        for (cd& v : est.g_hat) v /= n;
        est.sigma_e_sq = n0 / n;
        return est;
    }

    double max_mag = 0.0;
    for (const cd& v : lambda) max_mag = std::max(max_mag, std::abs(v));
    for (const cd& v : lambda)
        if (std::abs(v) <= 1e-12 * std::max(1.0, max_mag))
            throw SingularityError("ls_estimate: pilot spectral bin vanishes");

    cvec yf = numerics::dft_plain(y);
    for (std::size_t k = 0; k < yf.size(); ++k) yf[k] /= lambda[k];
    est.g_hat = numerics::idft_plain(yf);
    est.sigma_e_sq = theoretical_mse(pilot, n0) / n;
    return est;
}

double theoretical_mse(const cvec& pilot, double n0) {
    if (pilot.empty()) throw std::invalid_argument("theoretical_mse: empty pilot");
    if (n0 < 0.0) throw std::invalid_argument("theoretical_mse: n0 >= 0");
    const std::size_t n = pilot.size();
    // cyclic autocorrelation, then its spectrum d_p(k) = |pilot spectrum|^2
    cvec ac(n);
    for (std::size_t s = 0; s < n; ++s) {
        cd acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += std::conj(pilot[(k + n - s) % n]) * pilot[k];
        ac[s] = acc;
    }
    const cvec d = numerics::dft_plain(ac);
    double sum = 0.0;
    double max_d = 0.0;
    for (const cd& v : d) max_d = std::max(max_d, v.real());
    for (const cd& v : d) {
        if (v.real() <= 1e-12 * std::max(1.0, max_d))
            throw SingularityError("theoretical_mse: pilot autocorrelation spectrum vanishes");
        sum += 1.0 / v.real();
    }
    return n0 * sum;
}

void mask_support(ChannelEstimate& est, const std::vector<int>& support) {
    std::vector<char> keep(est.g_hat.size(), 0);
    for (int p : support) {
        if (p < 0 || static_cast<std::size_t>(p) >= est.g_hat.size())
            throw std::invalid_argument("mask_support: position out of range");
        keep[static_cast<std::size_t>(p)] = 1;
    }
    for (std::size_t i = 0; i < est.g_hat.size(); ++i)
        if (!keep[i]) est.g_hat[i] = cd(0.0, 0.0);
}

}  // namespace cpsc::estimation
