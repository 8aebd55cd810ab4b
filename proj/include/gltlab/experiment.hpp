// Config-driven experiment runner: builds pairs/families from JSON specs,
// executes the requested experiment, and persists a JSON report plus a CSV
// table. Reports are cached under a content hash of the canonical config.
#pragma once

#include "gltlab/config.hpp"
#include "gltlab/expression.hpp"
#include "gltlab/glt.hpp"
#include "gltlab/sequence.hpp"
#include "gltlab/symbol.hpp"
#include "gltlab/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace gltlab {

inline constexpr const char* kArtifactVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Builders: JSON spec -> GltPair / AcsFamily / SymbolFunction
// ---------------------------------------------------------------------------

namespace build {

inline SymbolFunction theta_symbol(const std::string& text) {
    auto parsed = parse_expression(text);
    if (parsed.uses_x) throw std::invalid_argument("toeplitz symbol must depend on theta only: " + text);
    auto root = parsed.root;
    return SymbolFunction{[root](double x, double theta) { return root->eval(x, theta); }, text};
}

inline FourierData coefficients_from_table(const Json& table) {
    FourierData data;
    for (const auto& [key, value] : table.items()) {
        const int k = std::stoi(key);
        if (value.is_array())
            data.coefficients[k] = Complex{value.at(0).get<double>(), value.at(1).get<double>()};
        else
            data.coefficients[k] = Complex{value.get<double>(), 0.0};
    }
    return data;
}

inline std::function<int(int)> rank_rate(const std::string& name) {
    if (name == "sqrt") return [](int n) { return static_cast<int>(std::floor(std::sqrt(static_cast<double>(n)))); };
    if (name == "cbrt") return [](int n) { return static_cast<int>(std::floor(std::cbrt(static_cast<double>(n)))); };
    if (name == "log") return [](int n) { return std::max(1, static_cast<int>(std::floor(std::log(n)))); };
    if (name == "one") return [](int) { return 1; };
    throw std::invalid_argument("zero builder: unknown rank rate '" + name + "'");
}

inline std::function<double(int)> magnitude_rate(const Json& spec) {
    if (spec.is_number()) {
        const double c = spec.get<double>();
        return [c](int) { return c; };
    }
    const std::string name = spec.get<std::string>();
    if (name == "n") return [](int n) { return static_cast<double>(n); };
    if (name == "sqrt-n") return [](int n) { return std::sqrt(static_cast<double>(n)); };
    if (name == "one") return [](int) { return 1.0; };
    throw std::invalid_argument("zero builder: unknown magnitude '" + name + "'");
}

inline std::function<double(int)> norm_rate(const std::string& name) {
    if (name == "1/log") return [](int n) { return 1.0 / std::log(static_cast<double>(n)); };
    if (name == "1/sqrt") return [](int n) { return 1.0 / std::sqrt(static_cast<double>(n)); };
    if (name == "1/n") return [](int n) { return 1.0 / static_cast<double>(n); };
    if (name == "0") return [](int) { return 0.0; };
    throw std::invalid_argument("zero builder: unknown norm rate '" + name + "'");
}

inline GltPair pair_from_spec(const Json& spec, std::uint64_t seed) {
    const std::string kind = spec.at("kind").get<std::string>();
    if (kind == "toeplitz") {
        if (spec.contains("coefficients"))
            return toeplitz_pair(coefficients_from_table(spec.at("coefficients")), "table");
        const std::string text = spec.at("symbol").get<std::string>();
        const int degree = spec.value("degree", 8);
        const int quadrature = spec.value("quadrature", std::max(64, 4 * degree + 4));
        auto f = theta_symbol(text);
        auto eval = f.evaluate;
        FourierData coeffs =
            fourier_coefficients([eval](double theta) { return eval(0.0, theta); }, degree, quadrature);
        auto pair = toeplitz_pair(coeffs, text);
        // Keep the user's symbol rather than its truncation when they agree.
        pair.symbol = f;
        return pair;
    }
    if (kind == "diag") return diag_pair(parse_diag_expression(spec.at("a").get<std::string>()),
                                         spec.at("a").get<std::string>());
    if (kind == "zero") {
        const std::string zero = spec.at("zero").get<std::string>();
        if (zero == "low-rank") {
            LowRankZero z;
            z.rank = rank_rate(spec.at("rank").get<std::string>());
            z.magnitude = magnitude_rate(spec.at("magnitude"));
            z.seed = seed;
            z.label = "low-rank(" + spec.at("rank").get<std::string>() + ")";
            return zero_pair(z);
        }
        if (zero == "small-norm") {
            SmallNormZero z;
            z.norm = norm_rate(spec.at("norm").get<std::string>());
            z.label = "small-norm(" + spec.at("norm").get<std::string>() + ")";
            return zero_pair(z);
        }
        throw std::invalid_argument("zero builder: unknown zero kind '" + zero + "'");
    }
    if (kind == "add") return pair_add(pair_from_spec(spec.at("lhs"), seed), pair_from_spec(spec.at("rhs"), seed));
    if (kind == "mul") return pair_mul(pair_from_spec(spec.at("lhs"), seed), pair_from_spec(spec.at("rhs"), seed));
    if (kind == "scale") {
        const Json& s = spec.at("scalar");
        const Complex lambda = s.is_array() ? Complex{s.at(0).get<double>(), s.at(1).get<double>()}
                                            : Complex{s.get<double>(), 0.0};
        return pair_scale(lambda, pair_from_spec(spec.at("operand"), seed));
    }
    throw std::invalid_argument("pair builder: unknown kind '" + kind + "'");
}

// Geometric cosine series sum_{k>=1} 2^{-k} cos(k theta) and its exact
// degree-m truncations.
inline SymbolFunction geometric_cosine_symbol() {
    return SymbolFunction{[](double, double theta) {
                              const Complex z = std::exp(Complex{0.0, theta});
                              return Complex{(z / (2.0 - z)).real(), 0.0};
                          },
                          "sum 2^-k cos(k theta)"};
}

inline FourierData geometric_cosine_truncation(int m) {
    FourierData data;
    for (int k = 1; k <= m; ++k) {
        const double c = std::pow(2.0, -static_cast<double>(k)) / 2.0;
        data.coefficients[k] = Complex{c, 0.0};
        data.coefficients[-k] = Complex{c, 0.0};
    }
    return data;
}

struct FamilySpec {
    AcsFamily family;
    SymbolFunction limit_symbol;                  // target of the truncations
    std::vector<SymbolFunction> member_symbols;   // aligned with m_grid (may be empty)
    std::vector<GltPair> member_pairs;            // filled for approximant families
};

inline FamilySpec family_from_spec(const Json& spec, const std::vector<int>& m_grid, std::uint64_t seed) {
    const std::string kind = spec.at("kind").get<std::string>();
    FamilySpec result;
    if (kind == "fourier-truncation") {
        std::vector<FourierData> truncations;
        if (spec.contains("rule")) {
            if (spec.at("rule").get<std::string>() != "2^-k")
                throw std::invalid_argument("family builder: unknown rule '" + spec.at("rule").get<std::string>() +
                                            "'");
            result.limit_symbol = geometric_cosine_symbol();
            for (int m : m_grid) truncations.push_back(geometric_cosine_truncation(m));
        } else {
            const std::string text = spec.at("symbol").get<std::string>();
            result.limit_symbol = theta_symbol(text);
            auto eval = result.limit_symbol.evaluate;
            for (int m : m_grid)
                truncations.push_back(fourier_coefficients([eval](double theta) { return eval(0.0, theta); }, m,
                                                           std::max(64, 4 * m + 4)));
        }
        auto members = std::make_shared<std::vector<FourierData>>(std::move(truncations));
        auto grid = std::make_shared<std::vector<int>>(m_grid);
        for (std::size_t s = 0; s < grid->size(); ++s)
            result.member_symbols.push_back((*members)[s].to_symbol("truncation[m=" + std::to_string((*grid)[s]) +
                                                                    "]"));
        result.family = AcsFamily{[members, grid](int m, int n) {
                                      for (std::size_t s = 0; s < grid->size(); ++s)
                                          if ((*grid)[s] == m) return toeplitz((*members)[s], n);
                                      throw std::invalid_argument("family: m=" + std::to_string(m) +
                                                                  " not in the configured m_grid");
                                  },
                                  "fourier-truncation"};
        return result;
    }
    if (kind == "approximant") {
        const std::string text = spec.at("symbol").get<std::string>();
        result.limit_symbol = parse_symbol_expression(text);
        auto pairs = std::make_shared<std::vector<GltPair>>();
        for (int m : m_grid) {
            pairs->push_back(dense_symbol_approximant(result.limit_symbol, m));
            result.member_symbols.push_back(pairs->back().symbol);
            result.member_pairs.push_back(pairs->back());
        }
        auto grid = std::make_shared<std::vector<int>>(m_grid);
        result.family = AcsFamily{[pairs, grid](int m, int n) {
                                      for (std::size_t s = 0; s < grid->size(); ++s)
                                          if ((*grid)[s] == m) return (*pairs)[s].sequence.at(n);
                                      throw std::invalid_argument("family: m=" + std::to_string(m) +
                                                                  " not in the configured m_grid");
                                  },
                                  "approximant(" + text + ")"};
        return result;
    }
    if (kind == "constant") {
        auto pair = pair_from_spec(spec.at("pair"), seed);
        result.limit_symbol = pair.symbol;
        auto seq = pair.sequence;
        result.family = AcsFamily{[seq](int, int n) { return seq.at(n); }, "constant(" + seq.label + ")"};
        for (std::size_t s = 0; s < m_grid.size(); ++s) result.member_symbols.push_back(pair.symbol);
        return result;
    }
    throw std::invalid_argument("family builder: unknown kind '" + kind + "'");
}

}  // namespace build

// ---------------------------------------------------------------------------
// Report assembly
// ---------------------------------------------------------------------------

namespace report {

inline Json ladder_to_json(const LadderReport& r) {
    return Json{{"index_grid", r.index_grid},
                {"values", r.values},
                {"tail_window", r.tail_window},
                {"tail_estimate", r.tail_estimate}};
}

inline Json cauchy_to_json(const CauchyReport& r) {
    return Json{{"verdict", r.verdict},
                {"m_grid", r.m_grid},
                {"modulus", r.modulus},
                {"sup_after", r.sup_after},
                {"tol", r.tol}};
}

inline Json distribution_to_json(const DistributionReport& r) {
    return Json{{"n_grid", r.n_grid},
                {"ks_values", r.ks_values},
                {"functional_gaps", r.functional_gaps},
                {"t_points", r.t_grid.size()},
                {"t_max", r.t_grid.empty() ? 0.0 : r.t_grid.back()},
                {"tol", r.tol},
                {"verdict", r.verdict},
                {"functional_verdict", r.functional_verdict}};
}

inline Json rho_pm_to_json(const RhoPmReport& r) {
    return Json{{"rho_ladder", ladder_to_json(r.rho)}, {"rho_tail", r.rho_tail}, {"p_m", r.p_m_value},
                {"gap", r.gap},                         {"tol", r.tol},          {"verdict", r.verdict}};
}

inline std::string format_cell(const Json& v) {
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v.get<double>());
        return std::string(buf);
    }
    return v.get<std::string>();
}

inline std::string csv_body(const Json& table) {
    std::string out;
    const auto& header = table.at("header");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header.at(i).get<std::string>();
    }
    out += '\n';
    for (const auto& row : table.at("rows")) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_cell(row.at(i));
        }
        out += '\n';
    }
    return out;
}

}  // namespace report

struct RunReport {
    Json body;
    int exit_code = 0;
    bool cached = false;
    std::filesystem::path report_path;
    std::filesystem::path csv_path;
};

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
}

// Verdict experiments exit 0/2; the rest always 0.
inline int exit_code_for(const Json& body) {
    if (!body.contains("verdict") || body.at("verdict").is_null()) return 0;
    return body.at("verdict").get<bool>() ? 0 : 2;
}

inline Json run_experiment(const ExperimentConfig& config) {
    const GridSpec grid{config.nx, config.ntheta};
    Json results;
    Json csv;
    std::optional<bool> verdict;

    if (config.experiment == "rho") {
        auto pair = build::pair_from_spec(config.builders.at("sequence"), config.seed);
        auto ladder = rho_ladder(pair.sequence, config.n_grid, config.tail_window);
        results["rho"] = report::ladder_to_json(ladder);
        csv["header"] = {"n", "p_hat"};
        for (std::size_t i = 0; i < ladder.values.size(); ++i)
            csv["rows"].push_back({ladder.index_grid[i], ladder.values[i]});
    } else if (config.experiment == "pm") {
        auto symbol = parse_symbol_expression(config.builders.at("symbol").get<std::string>());
        const double value = p_m_hat(sample_abs(symbol, grid));
        results["p_m"] = value;
        csv["header"] = {"nx", "ntheta", "p_m_hat"};
        csv["rows"].push_back({config.nx, config.ntheta, value});
    } else if (config.experiment == "dacs") {
        auto a = build::pair_from_spec(config.builders.at("a"), config.seed);
        auto b = build::pair_from_spec(config.builders.at("b"), config.seed);
        auto ladder = d_acs_ladder(a.sequence, b.sequence, config.n_grid, config.tail_window);
        results["d_acs"] = report::ladder_to_json(ladder);
        csv["header"] = {"n", "p_hat_diff"};
        for (std::size_t i = 0; i < ladder.values.size(); ++i)
            csv["rows"].push_back({ladder.index_grid[i], ladder.values[i]});
    } else if (config.experiment == "dm") {
        auto a = parse_symbol_expression(config.builders.at("a").get<std::string>());
        auto b = parse_symbol_expression(config.builders.at("b").get<std::string>());
        const double value = d_m_hat(a, b, grid);
        results["d_m"] = value;
        csv["header"] = {"nx", "ntheta", "d_m_hat"};
        csv["rows"].push_back({config.nx, config.ntheta, value});
    } else if (config.experiment == "check-symbol") {
        auto pair = build::pair_from_spec(config.builders.at("pair"), config.seed);
        auto report = check_sigma_distribution(pair, config.n_grid, grid, config.tol.ks);
        results["distribution"] = report::distribution_to_json(report);
        verdict = report.verdict;
        csv["header"] = {"n", "ks"};
        for (std::size_t i = 0; i < report.ks_values.size(); ++i)
            csv["rows"].push_back({report.n_grid[i], report.ks_values[i]});
    } else if (config.experiment == "check-rho-pm") {
        auto pair = build::pair_from_spec(config.builders.at("pair"), config.seed);
        auto report = check_rho_equals_pm(pair, config.n_grid, grid, config.tol.rho_pm, config.tail_window);
        results["rho_pm"] = report::rho_pm_to_json(report);
        verdict = report.verdict;
        csv["header"] = {"n", "p_hat"};
        for (std::size_t i = 0; i < report.rho.values.size(); ++i)
            csv["rows"].push_back({report.rho.index_grid[i], report.rho.values[i]});
    } else if (config.experiment == "splice") {
        auto spec = build::family_from_spec(config.builders.at("family"), config.m_grid, config.seed);
        auto cauchy = is_cauchy(spec.family, config.m_grid, config.n_grid, config.tail_window, config.tol.cauchy);
        results["cauchy"] = report::cauchy_to_json(cauchy);
        csv["header"] = {"m", "threshold", "d_acs_tail", "bound"};
        bool contract_ok = cauchy.verdict;
        if (cauchy.verdict) {
            auto splice = splice_limit(spec.family, config.m_grid, config.n_grid);
            results["thresholds"] = splice.thresholds;
            Json tails = Json::array();
            for (std::size_t s = 0; s < config.m_grid.size(); ++s) {
                auto member = memoized(spec.family.member(config.m_grid[s]));
                const double tail =
                    d_acs_ladder(member, splice.limit, config.n_grid, config.tail_window).tail_estimate;
                const double bound = 4.0 * std::pow(2.0, -static_cast<double>(s + 1));
                contract_ok = contract_ok && tail <= bound;
                tails.push_back(tail);
                const int threshold =
                    s < splice.thresholds.size() ? splice.thresholds[s] : splice.thresholds.back();
                csv["rows"].push_back({config.m_grid[s], threshold, tail, bound});
            }
            results["d_acs_tails"] = tails;
        }
        results["contract_ok"] = contract_ok;
        verdict = contract_ok;
    } else if (config.experiment == "density") {
        auto spec = build::family_from_spec(config.builders.at("family"), config.m_grid, config.seed);
        auto measure = converge_in_measure_check(spec.member_symbols, spec.limit_symbol, grid);
        results["d_m_ladder"] = report::ladder_to_json(measure.ladder);
        results["d_m_decreasing"] = measure.decreasing_tail;
        csv["header"] = {"m", "d_m"};
        for (std::size_t i = 0; i < measure.ladder.values.size(); ++i)
            csv["rows"].push_back({config.m_grid[i], measure.ladder.values[i]});
        auto cauchy = is_cauchy(spec.family, config.m_grid, config.n_grid, config.tail_window, config.tol.cauchy);
        results["cauchy"] = report::cauchy_to_json(cauchy);
        bool ok = measure.ladder.values.back() <= config.tol.dm && cauchy.verdict;
        if (cauchy.verdict) {
            auto splice = splice_limit(spec.family, config.m_grid, config.n_grid);
            results["thresholds"] = splice.thresholds;
            GltPair limit{splice.limit, spec.limit_symbol, nullptr};
            auto dist = check_sigma_distribution(limit, config.n_grid, grid, config.tol.ks);
            results["distribution"] = report::distribution_to_json(dist);
            ok = ok && dist.verdict;
        }
        verdict = ok;
    } else {
        throw std::invalid_argument("run: unknown experiment '" + config.experiment + "'");
    }

    Json body;
    body["results"] = results;
    body["csv"] = csv;
    body["verdict"] = verdict ? Json(*verdict) : Json(nullptr);
    return body;
}

}  // namespace detail

inline RunReport run(const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path out_dir(config.out);
    const fs::path cache_dir = out_dir / "cache";
    const std::string hash = config.hash();

    RunReport run_report;
    run_report.report_path = out_dir / "report.json";
    run_report.csv_path = out_dir / (config.experiment + ".csv");

    Json body;
    body["artifact_version"] = kArtifactVersion;
    body["experiment"] = config.experiment;
    body["config"] = config.to_json();
    body["config_hash"] = hash;
    body["cached"] = false;

    fs::create_directories(out_dir);

    const fs::path cache_file = cache_dir / (hash + ".json");
    if (config.use_cache && fs::exists(cache_file)) {
        std::ifstream in(cache_file);
        Json stored = Json::parse(in, nullptr, false);
        if (!stored.is_discarded() && stored.value("config_hash", "") == hash) {
            body = stored;
            body["cached"] = true;
            body["config"] = config.to_json();  // out/use_cache may differ; values do not
            run_report.cached = true;
        }
    }

    try {
        if (!run_report.cached) {
            Json computed = detail::run_experiment(config);
            body["results"] = computed["results"];
            body["csv"] = computed["csv"];
            body["verdict"] = computed["verdict"];
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        body["wall_time_s"] = wall;
        detail::write_file(run_report.csv_path, report::csv_body(body.at("csv")));
        detail::write_file(run_report.report_path, body.dump(2) + "\n");
        if (!run_report.cached) {
            fs::create_directories(cache_dir);
            detail::write_file(cache_file, body.dump(2) + "\n");
        }
        run_report.body = body;
        run_report.exit_code = detail::exit_code_for(body);
        return run_report;
    } catch (const std::exception& e) {
        body["error"] = e.what();
        body["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        detail::write_file(run_report.report_path, body.dump(2) + "\n");
        run_report.body = body;
        run_report.exit_code = 1;
        return run_report;
    }
}

}  // namespace gltlab
