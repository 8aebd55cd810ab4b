// Experiment configuration: JSON in, canonical JSON + content hash out.
#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gltlab {

using Json = nlohmann::json;

inline const std::set<std::string>& experiment_kinds() {
    static const std::set<std::string> kinds = {"rho",          "pm",           "dacs",   "dm",
                                                "check-symbol", "check-rho-pm", "splice", "density"};
    return kinds;
}

struct Tolerances {
    double ks = 0.05;
    double rho_pm = 0.02;
    double cauchy = 0.05;
    double dm = 0.05;
};

struct ExperimentConfig {
    std::string experiment;
    Json builders;  // experiment-specific construction specs
    std::vector<int> n_grid = {64, 128, 256, 512, 1024};
    std::vector<int> m_grid = {1, 2, 3, 4, 5, 6};
    int nx = 256;
    int ntheta = 256;
    int tail_window = 3;
    Tolerances tol;
    std::string out = "out";
    std::uint64_t seed = 0;
    bool use_cache = true;

    static ExperimentConfig from_json(const Json& j);
    Json to_json() const;
    std::string canonical_dump() const { return to_json().dump(); }
    std::string hash() const;
};

namespace detail {

inline void require_positive_grid(const std::vector<int>& grid, const char* name) {
    if (grid.empty()) throw std::invalid_argument(std::string("config: ") + name + " must be non-empty");
    int prev = 0;
    for (int v : grid) {
        if (v <= prev)
            throw std::invalid_argument(std::string("config: ") + name + " must be strictly increasing and positive");
        prev = v;
    }
}

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

inline ExperimentConfig ExperimentConfig::from_json(const Json& j) {
    static const std::set<std::string> known = {"experiment", "builders",   "n_grid", "m_grid",
                                                "symbol_grid", "tail_window", "tolerances", "out",
                                                "seed",       "use_cache"};
    if (!j.is_object()) throw std::invalid_argument("config: top level must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");

    ExperimentConfig c;
    c.experiment = j.at("experiment").get<std::string>();
    if (!experiment_kinds().count(c.experiment))
        throw std::invalid_argument("config: unknown experiment '" + c.experiment + "'");
    c.builders = j.at("builders");
    if (j.contains("n_grid")) c.n_grid = j.at("n_grid").get<std::vector<int>>();
    if (j.contains("m_grid")) c.m_grid = j.at("m_grid").get<std::vector<int>>();
    detail::require_positive_grid(c.n_grid, "n_grid");
    detail::require_positive_grid(c.m_grid, "m_grid");
    if (j.contains("symbol_grid")) {
        c.nx = j.at("symbol_grid").at("nx").get<int>();
        c.ntheta = j.at("symbol_grid").at("ntheta").get<int>();
    }
    if (c.nx < 1 || c.ntheta < 1) throw std::invalid_argument("config: symbol_grid sides must be positive");
    if (j.contains("tail_window")) c.tail_window = j.at("tail_window").get<int>();
    if (c.tail_window < 1 || c.tail_window > static_cast<int>(c.n_grid.size()))
        throw std::invalid_argument("config: tail_window must be in [1, n_grid size]");
    if (j.contains("tolerances")) {
        const Json& t = j.at("tolerances");
        if (t.contains("ks")) c.tol.ks = t.at("ks").get<double>();
        if (t.contains("rho_pm")) c.tol.rho_pm = t.at("rho_pm").get<double>();
        if (t.contains("cauchy")) c.tol.cauchy = t.at("cauchy").get<double>();
        if (t.contains("dm")) c.tol.dm = t.at("dm").get<double>();
    }
    if (!(c.tol.ks > 0.0 && c.tol.rho_pm > 0.0 && c.tol.cauchy > 0.0 && c.tol.dm > 0.0))
        throw std::invalid_argument("config: tolerances must be positive");
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("use_cache")) c.use_cache = j.at("use_cache").get<bool>();
    return c;
}

inline Json ExperimentConfig::to_json() const {
    Json j;
    j["experiment"] = experiment;
    j["builders"] = builders;
    j["n_grid"] = n_grid;
    j["m_grid"] = m_grid;
    j["symbol_grid"] = {{"nx", nx}, {"ntheta", ntheta}};
    j["tail_window"] = tail_window;
    j["tolerances"] = {{"ks", tol.ks}, {"rho_pm", tol.rho_pm}, {"cauchy", tol.cauchy}, {"dm", tol.dm}};
    j["out"] = out;
    j["seed"] = seed;
    j["use_cache"] = use_cache;
    return j;
}

inline std::string ExperimentConfig::hash() const {
    // The output path and cache flag do not affect the computation.
    Json j = to_json();
    j.erase("out");
    j.erase("use_cache");
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(detail::fnv1a64(j.dump())));
    return std::string(buf);
}

}  // namespace gltlab
