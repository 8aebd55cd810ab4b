// glt-lab: config-driven experiment runner.
//
//   glt-lab <experiment> --config <path> [--n-grid 64,128,...] [--tol T]
//           [--out DIR] [--no-cache]
//
// Exit codes: 0 pass (or non-verdict experiment), 1 error, 2 verdict false.
#include "gltlab/gltlab.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::vector<int> parse_grid(const std::string& text) {
    std::vector<int> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(std::stoi(item));
    return grid;
}

// --tol overrides the tolerance that decides the chosen experiment's verdict.
void apply_tol(gltlab::ExperimentConfig& config, double tol) {
    if (config.experiment == "check-symbol" || config.experiment == "density")
        config.tol.ks = tol;
    else if (config.experiment == "check-rho-pm")
        config.tol.rho_pm = tol;
    else if (config.experiment == "splice")
        config.tol.cauchy = tol;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"glt-lab: asymptotic spectral analysis of structured matrix sequences"};
    app.get_formatter()->column_width(28);

    std::string experiment;
    std::string config_path;
    std::string n_grid_text;
    std::string out_override;
    double tol_override = -1.0;
    bool no_cache = false;

    app.add_option("experiment", experiment, "rho | pm | dacs | dm | check-symbol | check-rho-pm | splice | density")
        ->required();
    app.add_option("--config", config_path, "path to a JSON experiment config")->required();
    app.add_option("--n-grid", n_grid_text, "comma-separated n values, overrides the config");
    app.add_option("--tol", tol_override, "verdict tolerance, overrides the config");
    app.add_option("--out", out_override, "output directory, overrides the config");
    app.add_flag("--no-cache", no_cache, "ignore and do not write the report cache");

    CLI11_PARSE(app, argc, argv);

    try {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot open config " << config_path << "\n";
            return 1;
        }
        gltlab::Json raw = gltlab::Json::parse(in);
        if (raw.contains("experiment") && raw.at("experiment").get<std::string>() != experiment) {
            std::cerr << "error: config is for experiment '" << raw.at("experiment").get<std::string>()
                      << "', requested '" << experiment << "'\n";
            return 1;
        }
        raw["experiment"] = experiment;
        auto config = gltlab::ExperimentConfig::from_json(raw);
        if (!n_grid_text.empty()) config.n_grid = parse_grid(n_grid_text);
        if (tol_override > 0.0) apply_tol(config, tol_override);
        if (!out_override.empty()) config.out = out_override;
        if (no_cache) config.use_cache = false;

        auto report = gltlab::run(config);
        if (report.body.contains("error")) {
            std::cerr << "error: " << report.body.at("error").get<std::string>() << "\n";
        } else {
            std::cout << "report: " << report.report_path.string() << "\n";
            std::cout << "csv:    " << report.csv_path.string() << "\n";
            if (report.cached) std::cout << "cached result reused\n";
            if (!report.body.at("verdict").is_null())
                std::cout << "verdict: " << (report.body.at("verdict").get<bool>() ? "pass" : "fail") << "\n";
        }
        return report.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
