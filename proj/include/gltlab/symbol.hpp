// Samplable measurable symbols on D = [0,1] x [-pi,pi] with the convergence
// in measure pseudometric
//
//   p_m(f) = inf_E { |E^C|/|D| + ess sup_E |f| },
//
// evaluated on midpoint tensor samples. Restricting the inf to sublevel sets
// {|f| <= t} is optimal, so a scan over the sorted samples computes it
// exactly; the scan is the symbol-space twin of the sequence-space p.
#pragma once

#include "gltlab/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gltlab {

struct SymbolFunction {
    std::function<std::complex<double>(double, double)> evaluate;  // (x, theta)
    std::string label;
};

struct GridSpec {
    int nx = 256;
    int ntheta = 256;
};

// |k| at the midpoint tensor nodes, x-major. Every node carries the same
// measure weight |D| / (nx * ntheta).
struct SymbolSamples {
    std::vector<double> values;
    int nx = 0;
    int ntheta = 0;
    int substituted = 0;  // nodes replaced by a neighbouring value
};

inline double midpoint_x(int i, int nx) { return (i + 0.5) / nx; }
inline double midpoint_theta(int j, int ntheta) {
    constexpr double pi = 3.14159265358979323846;
    return -pi + (j + 0.5) * 2.0 * pi / ntheta;
}

namespace detail {

// Shared sampling core: |f| at the nodes with neighbour substitution for
// declared-null-set failures, bounded by a 0.1% budget.
template <typename AbsAtNode>
SymbolSamples sample_nodes(AbsAtNode&& abs_at, int nx, int ntheta, const std::string& label) {
    if (nx < 1 || ntheta < 1) throw std::invalid_argument("sample_abs: grid sides must be positive");
    SymbolSamples s;
    s.nx = nx;
    s.ntheta = ntheta;
    s.values.resize(static_cast<std::size_t>(nx) * ntheta);
    std::vector<std::size_t> failed;
    std::size_t idx = 0;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ntheta; ++j, ++idx) {
            double v;
            try {
                v = abs_at(midpoint_x(i, nx), midpoint_theta(j, ntheta));
            } catch (const std::exception&) {
                v = std::nan("");
            }
            if (std::isfinite(v) && v >= 0.0) {
                s.values[idx] = v;
            } else {
                s.values[idx] = std::nan("");
                failed.push_back(idx);
            }
        }
    }
    if (!failed.empty()) {
        if (static_cast<double>(failed.size()) > 0.001 * static_cast<double>(s.values.size()))
            throw std::runtime_error("sample_abs: '" + label + "' failed on " + std::to_string(failed.size()) +
                                     " of " + std::to_string(s.values.size()) + " nodes (budget 0.1%)");
        for (std::size_t f : failed) {
            double v = std::nan("");
            for (std::size_t step = 1; step < s.values.size(); ++step) {
                if (f >= step && std::isfinite(s.values[f - step])) { v = s.values[f - step]; break; }
                if (f + step < s.values.size() && std::isfinite(s.values[f + step])) { v = s.values[f + step]; break; }
            }
            if (!std::isfinite(v)) throw std::runtime_error("sample_abs: no finite neighbour for substitution");
            s.values[f] = v;
            ++s.substituted;
        }
    }
    return s;
}

}  // namespace detail

inline SymbolSamples sample_abs(const SymbolFunction& k, int nx, int ntheta) {
    return detail::sample_nodes([&k](double x, double theta) { return std::abs(k.evaluate(x, theta)); }, nx, ntheta,
                                k.label);
}

inline SymbolSamples sample_abs(const SymbolFunction& k, const GridSpec& grid) {
    return sample_abs(k, grid.nx, grid.ntheta);
}

// Scan over the sorted samples: with v_1 >= ... >= v_N, every sublevel set
// threshold appears as min(1, min_i { (i-1)/N + v_i }). The empty-E case
// contributes the cap at 1.
inline double p_m_hat(const SymbolSamples& s) {
    if (s.values.empty()) throw std::invalid_argument("p_m_hat: empty sample set");
    std::vector<double> sorted = s.values;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    const int n = static_cast<int>(sorted.size());
    double best = 1.0;
    for (int i = 1; i <= n; ++i) best = std::min(best, static_cast<double>(i - 1) / n + sorted[i - 1]);
    return best;
}

// p_m of |k - h|, sampled jointly node by node on the shared grid.
inline double d_m_hat(const SymbolFunction& k, const SymbolFunction& h, int nx, int ntheta) {
    auto s = detail::sample_nodes(
        [&](double x, double theta) { return std::abs(k.evaluate(x, theta) - h.evaluate(x, theta)); }, nx, ntheta,
        k.label + " - " + h.label);
    return p_m_hat(s);
}

inline double d_m_hat(const SymbolFunction& k, const SymbolFunction& h, const GridSpec& grid) {
    return d_m_hat(k, h, grid.nx, grid.ntheta);
}

// F(t) = fraction of samples <= t, evaluated on the given threshold grid.
inline std::vector<double> abs_cdf(const SymbolSamples& s, const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("abs_cdf: empty threshold grid");
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

struct MeasureConvergenceReport {
    LadderReport ladder;          // index_grid = 1-based member positions
    bool decreasing_tail = false;
};

inline MeasureConvergenceReport converge_in_measure_check(const std::vector<SymbolFunction>& members,
                                                          const SymbolFunction& k, const GridSpec& grid) {
    if (members.size() < 2) throw std::invalid_argument("converge_in_measure_check: need at least 2 members");
    std::vector<int> index;
    std::vector<double> values;
    for (std::size_t m = 0; m < members.size(); ++m) {
        index.push_back(static_cast<int>(m) + 1);
        values.push_back(d_m_hat(members[m], k, grid));
    }
    const int window = std::min<int>(3, static_cast<int>(members.size()));
    MeasureConvergenceReport report{make_ladder(std::move(index), std::move(values), window), false};
    report.decreasing_tail = tail_non_increasing(report.ladder, 1e-12);
    return report;
}

// Measure-preserving coordinate flips; every |.|-distribution statistic is
// unchanged and the midpoint node set is mapped onto itself.
enum class Rearrangement { FlipX, FlipTheta };

inline SymbolFunction rearrange(const SymbolFunction& k, Rearrangement which) {
    auto inner = k.evaluate;
    if (which == Rearrangement::FlipX)
        return SymbolFunction{[inner](double x, double theta) { return inner(1.0 - x, theta); },
                              k.label + " (x -> 1-x)"};
    return SymbolFunction{[inner](double x, double theta) { return inner(x, -theta); }, k.label + " (theta -> -theta)"};
}

}  // namespace gltlab
