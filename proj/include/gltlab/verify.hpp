// Numerical witnesses for the distribution identities: the singular value
// distribution check (empirical CDF vs the symbol's |.|-CDF plus a catalog of
// hat-function functionals) and the rho = p_m identity.
#pragma once

#include "gltlab/glt.hpp"
#include "gltlab/ladder.hpp"
#include "gltlab/matrix.hpp"
#include "gltlab/sequence.hpp"
#include "gltlab/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace gltlab {

using TestFunction = std::function<double(double)>;

// Continuous compactly supported tent: peak 1 at center, zero outside
// [center - width, center + width].
struct HatFunction {
    double center = 0.0;
    double width = 1.0;

    double operator()(double s) const { return std::max(0.0, 1.0 - std::abs(s - center) / width); }
};

// Evenly spaced hats covering [lo, hi]; widths adapt to the spacing so the
// catalog covers the range with overlap.
inline std::vector<HatFunction> hat_catalog(double lo, double hi, int count = 21) {
    if (count < 2 || !(hi > lo)) throw std::invalid_argument("hat_catalog: need count >= 2 and hi > lo");
    const double spacing = (hi - lo) / (count - 1);
    std::vector<HatFunction> hats;
    hats.reserve(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) hats.push_back(HatFunction{lo + j * spacing, spacing});
    return hats;
}

// (1/n) sum_i F(sigma_i). Summed over the sorted spectrum so the value does
// not depend on any evaluation order.
inline double empirical_functional(const SingularSpectrum& s, const TestFunction& f) {
    if (s.order() == 0) throw std::invalid_argument("empirical_functional: empty spectrum");
    double acc = 0.0;
    for (double v : s.values) acc += f(v);
    return acc / static_cast<double>(s.order());
}

inline double empirical_functional(const Matrix& a, const TestFunction& f) {
    return empirical_functional(singular_values(a), f);
}

// Equal-weight midpoint quadrature of (1/|D|) integral of F(|k|). Samples are
// sorted before accumulation so rearranged symbols produce identical sums.
inline double symbol_functional(const SymbolSamples& s, const TestFunction& f) {
    if (s.values.empty()) throw std::invalid_argument("symbol_functional: empty sample set");
    std::vector<double> sorted = s.values;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double acc = 0.0;
    for (double v : sorted) acc += f(v);
    return acc / static_cast<double>(sorted.size());
}

inline double symbol_functional(const SymbolFunction& k, const TestFunction& f, const GridSpec& grid) {
    return symbol_functional(sample_abs(k, grid), f);
}

inline std::vector<double> empirical_cdf(const SingularSpectrum& s, const std::vector<double>& t_grid) {
    std::vector<double> sorted = s.values;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> cdf;
    cdf.reserve(t_grid.size());
    for (double t : t_grid) {
        const auto count = std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
        cdf.push_back(static_cast<double>(count) / static_cast<double>(sorted.size()));
    }
    return cdf;
}

inline double ks_distance(const std::vector<double>& f, const std::vector<double>& g) {
    if (f.size() != g.size()) throw std::invalid_argument("ks_distance: CDF grids differ");
    double sup = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) sup = std::max(sup, std::abs(f[i] - g[i]));
    return sup;
}

struct DistributionReport {
    std::vector<int> n_grid;
    std::vector<double> ks_values;                     // one per n
    std::vector<double> functional_gaps;               // one per hat, at the largest n
    std::vector<double> t_grid;
    double tol = 0.0;
    bool verdict = false;                              // tail KS <= tol
    bool functional_verdict = false;                   // max hat gap <= tol
};

// KS-style comparison on a fixed 512-point threshold grid spanning
// [0, max sigma observed + 1], plus the hat-functional gaps as the
// paper-literal second witness.
inline DistributionReport check_sigma_distribution(const GltPair& pair, const std::vector<int>& n_grid,
                                                   const GridSpec& grid, double tol = 0.05, int t_points = 512,
                                                   int hat_count = 21) {
    require_grid(n_grid, "check_sigma_distribution");
    std::vector<SingularSpectrum> spectra;
    spectra.reserve(n_grid.size());
    double sigma_max = 0.0;
    for (int n : n_grid) {
        spectra.push_back(singular_values(pair.sequence.at(n)));
        sigma_max = std::max(sigma_max, spectra.back().largest());
    }

    DistributionReport report;
    report.n_grid = n_grid;
    report.tol = tol;
    report.t_grid.reserve(static_cast<std::size_t>(t_points));
    const double hi = sigma_max + 1.0;
    for (int j = 0; j < t_points; ++j)
        report.t_grid.push_back(hi * static_cast<double>(j) / static_cast<double>(t_points - 1));

    const SymbolSamples samples = sample_abs(pair.symbol, grid);
    const std::vector<double> symbol_cdf = abs_cdf(samples, report.t_grid);
    for (const auto& spectrum : spectra)
        report.ks_values.push_back(ks_distance(empirical_cdf(spectrum, report.t_grid), symbol_cdf));

    const auto hats = hat_catalog(0.0, hi, hat_count);
    const auto& tail_spectrum = spectra.back();
    double worst_gap = 0.0;
    for (const auto& hat : hats) {
        const double gap = std::abs(empirical_functional(tail_spectrum, hat) - symbol_functional(samples, hat));
        report.functional_gaps.push_back(gap);
        worst_gap = std::max(worst_gap, gap);
    }
    report.verdict = report.ks_values.back() <= tol;
    report.functional_verdict = worst_gap <= tol;
    return report;
}

struct RhoPmReport {
    LadderReport rho;
    double rho_tail = 0.0;
    double p_m_value = 0.0;
    double gap = 0.0;
    double tol = 0.0;
    bool verdict = false;
};

inline RhoPmReport check_rho_equals_pm(const GltPair& pair, const std::vector<int>& n_grid, const GridSpec& grid,
                                       double tol = 0.02, int tail_window = 3) {
    RhoPmReport report;
    report.rho = rho_ladder(pair.sequence, n_grid, std::min<int>(tail_window, static_cast<int>(n_grid.size())));
    report.rho_tail = report.rho.tail_estimate;
    report.p_m_value = p_m_hat(sample_abs(pair.symbol, grid));
    report.gap = std::abs(report.rho_tail - report.p_m_value);
    report.tol = tol;
    report.verdict = report.gap <= tol;
    return report;
}

}  // namespace gltlab
