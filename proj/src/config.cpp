#include "cpsc/config.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cpsc {

using nlohmann::json;

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::Cpsc: return "cpsc";
        case Scheme::CpscRis: return "cpsc-ris";
        case Scheme::CpscRisIm: return "cpsc-ris-im";
    }
    return "?";
}

std::string to_string(CsiMode c) { return c == CsiMode::Perfect ? "perfect" : "estimated"; }

std::string to_string(DetectorId d) {
    switch (d) {
        case DetectorId::Ml: return "ml";
        case DetectorId::Zf: return "zf";
        case DetectorId::Mmse: return "mmse";
        case DetectorId::ImMl: return "im-ml";
        case DetectorId::ImLc: return "im-lc";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "cpsc") return Scheme::Cpsc;
    if (s == "cpsc-ris") return Scheme::CpscRis;
    if (s == "cpsc-ris-im") return Scheme::CpscRisIm;
    throw ConfigError("unknown scheme: " + s);
}

CsiMode csi_from_string(const std::string& s) {
    if (s == "perfect") return CsiMode::Perfect;
    if (s == "estimated") return CsiMode::Estimated;
    throw ConfigError("unknown csi mode: " + s);
}

DetectorId detector_from_string(const std::string& s) {
    if (s == "ml") return DetectorId::Ml;
    if (s == "zf") return DetectorId::Zf;
    if (s == "mmse") return DetectorId::Mmse;
    if (s == "im-ml") return DetectorId::ImMl;
    if (s == "im-lc") return DetectorId::ImLc;
    throw ConfigError("unknown detector: " + s);
}

int SystemConfig::bits_per_symbol() const {
    int b = 0;
    for (int v = m_order; v > 1; v >>= 1) ++b;
    return b;
}

int SystemConfig::im_bits() const {
    if (scheme != Scheme::CpscRisIm) return 0;
    double fact = 1.0;
    for (int i = 2; i <= r; ++i) fact *= i;
    return static_cast<int>(std::floor(std::log2(fact) + 1e-12));
}

int SystemConfig::bits_per_block() const { return im_bits() + n * bits_per_symbol(); }

double SystemConfig::energy_per_bit() const {
    return static_cast<double>(n + cp_len) / static_cast<double>(bits_per_block());
}

int SystemConfig::total_core_taps() const {
    return std::accumulate(link_taps.begin(), link_taps.end(), 0);
}

int SystemConfig::link_offset(int link) const {
    return std::accumulate(link_taps.begin(), link_taps.begin() + link, 0);
}

std::vector<int> SystemConfig::core_positions() const { return core_positions(link_delays()); }

std::vector<int> SystemConfig::link_delays() const {
    std::vector<int> d(static_cast<std::size_t>(r) + 1, 0);
    for (int i = 1; i <= r; ++i) d[i] = i * delta;
    return d;
}

std::vector<int> SystemConfig::link_delays(const std::vector<int>& perm) const {
    if (static_cast<int>(perm.size()) != r) throw ConfigError("permutation length != r");
    std::vector<int> d(static_cast<std::size_t>(r) + 1, 0);
    for (int i = 1; i <= r; ++i) d[i] = perm[i - 1] * delta;
    return d;
}

void SystemConfig::apply_defaults() {
    if (link_taps.empty()) link_taps.assign(static_cast<std::size_t>(r) + 1, cp_len);
    if (nakagami_m.empty()) {
        nakagami_m.resize(link_taps.size());
        for (std::size_t i = 0; i < link_taps.size(); ++i)
            nakagami_m[i].assign(static_cast<std::size_t>(link_taps[i]), 2);
    }
}

void SystemConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };

    if (n < 2) fail("n >= 2 violated");
    if (m_order < 2 || (m_order & (m_order - 1)) != 0) fail("m_order must be a power of two >= 2");
    if (r < 0) fail("r >= 0 violated");
    if (r >= 1 && n_g < 1) fail("n_g >= 1 violated");
    if (cp_len < 1) fail("cp_len >= 1 violated");
    if (cp_len >= n) fail("cp_len < n violated");
    if (static_cast<int>(link_taps.size()) != r + 1) fail("link_taps must have r+1 entries");
    for (int lt : link_taps) {
        if (lt < 1) fail("link_taps entries must be >= 1");
        if (lt > cp_len) fail("cp_len >= max link taps violated");
    }
    if (r >= 1) {
        if (delta < cp_len) fail("cp_len <= delta violated");
        if (delta > n / (r + 1)) fail("delta <= floor(n / (r + 1)) violated");
    }
    if (nakagami_m.size() != link_taps.size()) fail("nakagami_m must have r+1 rows");
    for (std::size_t i = 0; i < nakagami_m.size(); ++i) {
        if (static_cast<int>(nakagami_m[i].size()) != link_taps[i])
            fail("nakagami_m row length must match link_taps");
        for (int m : nakagami_m[i])
            if (m < 1) fail("nakagami m >= 1 violated");
    }
    if (pdp_decay < 0.0) fail("pdp_decay >= 0 violated");
    if (d0 <= 0.0 || d1 <= 0.0 || d2 <= 0.0) fail("distances must be positive");
    if (scheme == Scheme::Cpsc && r != 0) fail("scheme cpsc requires r = 0");
    if (scheme == Scheme::CpscRisIm && r < 1) fail("scheme cpsc-ris-im requires r >= 1");
    if (csi == CsiMode::Estimated && n % 2 != 0) fail("estimated csi requires even n (pilot design)");
    if (csi == CsiMode::Estimated && std::gcd(zc_root, n) != 1) fail("gcd(zc_root, n) = 1 violated");
    if (min_trials < 1) fail("min_trials >= 1 violated");
    if (min_bit_errors < 1) fail("min_bit_errors >= 1 violated");
    for (DetectorId d : detectors) {
        const bool im = (d == DetectorId::ImMl || d == DetectorId::ImLc);
        if (im && scheme != Scheme::CpscRisIm) fail("im detectors require scheme cpsc-ris-im");
        if (!im && scheme == Scheme::CpscRisIm) fail("scheme cpsc-ris-im requires im detectors");
    }
}

std::vector<int> SystemConfig::core_positions(const std::vector<int>& delays) const {
    std::vector<int> pos;
    pos.reserve(static_cast<std::size_t>(total_core_taps()));
    for (int link = 0; link <= r; ++link)
        for (int l = 0; l < link_taps[link]; ++l) pos.push_back(delays[link] + l);
    return pos;
}

SystemConfig default_config() {
    SystemConfig cfg;
    cfg.snr_db = {0, 4, 8, 12, 16, 20, 24, 28, 32, 36, 40};
    cfg.detectors = {DetectorId::Ml, DetectorId::Zf, DetectorId::Mmse};
    cfg.apply_defaults();
    return cfg;
}

namespace {

double get_number(const json& j, const std::string& key) {
    if (!j.is_number()) throw ConfigError("config key '" + key + "' must be a number");
    return j.get<double>();
}

int get_int(const json& j, const std::string& key) {
    if (!j.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
    return j.get<int>();
}

std::uint64_t get_u64(const json& j, const std::string& key) {
    if (!j.is_number_unsigned() && !j.is_number_integer())
        throw ConfigError("config key '" + key + "' must be a non-negative integer");
    if (j.is_number_integer() && j.get<long long>() < 0)
        throw ConfigError("config key '" + key + "' must be non-negative");
    return j.get<std::uint64_t>();
}

std::vector<double> parse_snr_value(const json& j) {
    if (j.is_array()) {
        std::vector<double> out;
        for (const auto& v : j) out.push_back(get_number(v, "snr_db"));
        return out;
    }
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            (void)v;
            if (k != "min" && k != "step" && k != "max")
                throw ConfigError("config: unknown snr_db key '" + k + "'");
        }
        const double lo = get_number(j.at("min"), "snr_db.min");
        const double step = get_number(j.at("step"), "snr_db.step");
        const double hi = get_number(j.at("max"), "snr_db.max");
        if (step <= 0.0) throw ConfigError("config: snr_db.step must be positive");
        if (hi < lo) throw ConfigError("config: snr_db.max must be >= snr_db.min");
        std::vector<double> out;
        for (double v = lo; v <= hi + 1e-9; v += step) out.push_back(v);
        return out;
    }
    if (j.is_number()) return {j.get<double>()};
    throw ConfigError("config: snr_db must be an array, range object, or number");
}

}  // namespace

SystemConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");

    static const std::set<std::string> known = {
        "n", "m_order", "r", "n_g", "cp_len", "delta", "link_taps", "nakagami_m",
        "pdp_decay", "d0", "d1", "d2", "pl_exp_direct", "pl_exp_tx_ris", "pl_exp_ris_rx",
        "snr_db", "detectors", "scheme", "csi", "master_seed", "min_trials",
        "min_bit_errors", "zc_root", "denoise_estimate"};
    for (const auto& [key, val] : j.items()) {
        (void)val;
        if (known.find(key) == known.end()) throw ConfigError("config: unknown key '" + key + "'");
    }

    SystemConfig cfg = default_config();
    cfg.link_taps.clear();
    cfg.nakagami_m.clear();

    if (j.contains("n")) cfg.n = get_int(j["n"], "n");
    if (j.contains("m_order")) cfg.m_order = get_int(j["m_order"], "m_order");
    if (j.contains("r")) cfg.r = get_int(j["r"], "r");
    if (j.contains("n_g")) cfg.n_g = get_int(j["n_g"], "n_g");
    if (j.contains("cp_len")) cfg.cp_len = get_int(j["cp_len"], "cp_len");
    if (j.contains("delta")) cfg.delta = get_int(j["delta"], "delta");
    if (j.contains("link_taps")) {
        if (!j["link_taps"].is_array()) throw ConfigError("config: link_taps must be an array");
        for (const auto& v : j["link_taps"]) cfg.link_taps.push_back(get_int(v, "link_taps"));
    }
    if (j.contains("nakagami_m")) {
        const json& jm = j["nakagami_m"];
        if (jm.is_number_integer()) {
            const int m = jm.get<int>();
            const auto& taps = cfg.link_taps.empty()
                                   ? std::vector<int>(static_cast<std::size_t>(cfg.r) + 1, cfg.cp_len)
                                   : cfg.link_taps;
            for (int lt : taps) cfg.nakagami_m.emplace_back(static_cast<std::size_t>(lt), m);
        } else if (jm.is_array()) {
            for (const auto& row : jm) {
                if (!row.is_array()) throw ConfigError("config: nakagami_m rows must be arrays");
                std::vector<int> vals;
                for (const auto& v : row) vals.push_back(get_int(v, "nakagami_m"));
                cfg.nakagami_m.push_back(std::move(vals));
            }
        } else {
            throw ConfigError("config: nakagami_m must be an integer or array of arrays");
        }
    }
    if (j.contains("pdp_decay")) cfg.pdp_decay = get_number(j["pdp_decay"], "pdp_decay");
    if (j.contains("d0")) cfg.d0 = get_number(j["d0"], "d0");
    if (j.contains("d1")) cfg.d1 = get_number(j["d1"], "d1");
    if (j.contains("d2")) cfg.d2 = get_number(j["d2"], "d2");
    if (j.contains("pl_exp_direct")) cfg.pl_exp_direct = get_number(j["pl_exp_direct"], "pl_exp_direct");
    if (j.contains("pl_exp_tx_ris")) cfg.pl_exp_tx_ris = get_number(j["pl_exp_tx_ris"], "pl_exp_tx_ris");
    if (j.contains("pl_exp_ris_rx")) cfg.pl_exp_ris_rx = get_number(j["pl_exp_ris_rx"], "pl_exp_ris_rx");
    if (j.contains("snr_db")) cfg.snr_db = parse_snr_value(j["snr_db"]);
    if (j.contains("detectors")) {
        if (!j["detectors"].is_array()) throw ConfigError("config: detectors must be an array");
        cfg.detectors.clear();
        for (const auto& v : j["detectors"]) {
            if (!v.is_string()) throw ConfigError("config: detectors entries must be strings");
            cfg.detectors.push_back(detector_from_string(v.get<std::string>()));
        }
    }
    if (j.contains("scheme")) {
        if (!j["scheme"].is_string()) throw ConfigError("config: scheme must be a string");
        cfg.scheme = scheme_from_string(j["scheme"].get<std::string>());
    }
    if (j.contains("csi")) {
        if (!j["csi"].is_string()) throw ConfigError("config: csi must be a string");
        cfg.csi = csi_from_string(j["csi"].get<std::string>());
    }
    if (j.contains("master_seed")) cfg.master_seed = get_u64(j["master_seed"], "master_seed");
    if (j.contains("min_trials")) cfg.min_trials = get_u64(j["min_trials"], "min_trials");
    if (j.contains("min_bit_errors")) cfg.min_bit_errors = get_u64(j["min_bit_errors"], "min_bit_errors");
    if (j.contains("zc_root")) cfg.zc_root = get_int(j["zc_root"], "zc_root");
    if (j.contains("denoise_estimate")) {
        if (!j["denoise_estimate"].is_boolean())
            throw ConfigError("config: denoise_estimate must be a boolean");
        cfg.denoise_estimate = j["denoise_estimate"].get<bool>();
    }

    // scheme-aware detector defaults when the file names neither
    if (!j.contains("detectors") && cfg.scheme == Scheme::CpscRisIm)
        cfg.detectors = {DetectorId::ImMl, DetectorId::ImLc};

    cfg.apply_defaults();
    cfg.validate();
    return cfg;
}

SystemConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::vector<double> parse_snr_range(const std::string& spec) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : spec) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    try {
        if (parts.size() == 1) return {std::stod(parts[0])};
        if (parts.size() == 3) {
            const double lo = std::stod(parts[0]);
            const double step = std::stod(parts[1]);
            const double hi = std::stod(parts[2]);
            if (step <= 0.0) throw ConfigError("snr range: step must be positive");
            if (hi < lo) throw ConfigError("snr range: max must be >= min");
            std::vector<double> out;
            for (double v = lo; v <= hi + 1e-9; v += step) out.push_back(v);
            return out;
        }
    } catch (const std::invalid_argument&) {
        throw ConfigError("snr range: not a number in '" + spec + "'");
    } catch (const std::out_of_range&) {
        throw ConfigError("snr range: value out of range in '" + spec + "'");
    }
    throw ConfigError("snr range: expected 'value' or 'min:step:max', got '" + spec + "'");
}

}  // namespace cpsc
