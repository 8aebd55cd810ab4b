// Test-only oracles, independent of the library's computation paths:
// literal definition scans, closed-form spectra and sublevel measures, and
// seeded random generators.
#pragma once

#include "gltlab/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

// The per-matrix functional evaluated straight from its definition on a given
// non-increasing value list, with the cap written as the sigma_{n+1} = 0 term.
inline double capped_scan(std::vector<double> sorted_desc) {
    const std::size_t n = sorted_desc.size();
    sorted_desc.push_back(0.0);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i <= n + 1; ++i) {
        const double term = static_cast<double>(i - 1) / static_cast<double>(n) + sorted_desc[i - 1];
        best = std::min(best, term);
    }
    return best;
}

// Eigenvalues of T_n(2 - 2cos theta): 2 - 2cos(j pi / (n+1)), PSD so the
// singular values coincide; returned non-increasing.
inline std::vector<double> laplacian_singular_values(int n) {
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j)
        s[static_cast<std::size_t>(j - 1)] = 2.0 - 2.0 * std::cos(j * std::numbers::pi / (n + 1));
    std::sort(s.begin(), s.end(), std::greater<double>());
    return s;
}

// Sublevel measure fraction of |2 - 2cos theta| on [-pi, pi].
inline double laplacian_sublevel_cdf(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 4.0) return 1.0;
    return std::acos(1.0 - t / 2.0) / std::numbers::pi;
}

// 1-D minimization of t -> (1 - F(t)) + t for the Laplacian symbol: coarse
// scan plus ternary refinement.
inline double laplacian_p_m() {
    auto objective = [](double t) { return 1.0 - laplacian_sublevel_cdf(t) + t; };
    double best_t = 0.0;
    double best = objective(0.0);
    for (int j = 1; j <= 4'000'000; ++j) {
        const double t = 4.0 * j / 4'000'000.0;
        const double v = objective(t);
        if (v < best) {
            best = v;
            best_t = t;
        }
    }
    double lo = std::max(0.0, best_t - 1e-5), hi = std::min(4.0, best_t + 1e-5);
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (objective(m1) < objective(m2))
            hi = m2;
        else
            lo = m1;
    }
    return objective(0.5 * (lo + hi));
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline gltlab::Matrix random_matrix(int n, std::mt19937_64& gen, double scale = 1.0) {
    std::normal_distribution<double> dist;
    gltlab::Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = gltlab::Complex{dist(gen), dist(gen)} * scale;
    return a;
}

// Haar-ish unitary: QR of a complex Gaussian with the R diagonal phases
// normalized.
inline gltlab::Matrix random_unitary(int n, std::mt19937_64& gen) {
    gltlab::Matrix a = random_matrix(n, gen);
    Eigen::HouseholderQR<gltlab::Matrix> qr(a);
    gltlab::Matrix q = qr.householderQ();
    gltlab::Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const gltlab::Complex d = r(j, j);
        const double mag = std::abs(d);
        if (mag > 0.0) q.col(j) *= d / mag;
    }
    return q;
}

}  // namespace oracle
