// GLT building blocks: Toeplitz sequences from Fourier data, diagonal
// sampling sequences, zero-distributed generators, and the (sequence, symbol)
// algebra with sum, product and scalar multiple. Every pair carries a
// provenance tree that replays to the same pair.
#pragma once

#include "gltlab/matrix.hpp"
#include "gltlab/sequence.hpp"
#include "gltlab/symbol.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

namespace gltlab {

// Finitely supported Fourier coefficients k -> f_k.
struct FourierData {
    std::map<int, Complex> coefficients;

    Complex coeff(int k) const {
        auto it = coefficients.find(k);
        return it == coefficients.end() ? Complex{0.0, 0.0} : it->second;
    }

    int support_radius() const {
        int radius = 0;
        for (const auto& [k, c] : coefficients)
            if (c != Complex{0.0, 0.0}) radius = std::max(radius, std::abs(k));
        return radius;
    }

    // Wiener-norm bound: ||T_n(f)|| <= sum |f_k| for every n.
    double abs_sum() const {
        double s = 0.0;
        for (const auto& [k, c] : coefficients) s += std::abs(c);
        return s;
    }

    // Holds exactly when the generating function is real-valued a.e.
    bool conjugate_symmetric(double tol = 1e-12) const {
        for (const auto& [k, c] : coefficients)
            if (std::abs(c - std::conj(coeff(-k))) > tol) return false;
        return true;
    }

    SymbolFunction to_symbol(const std::string& label) const {
        auto coeffs = coefficients;
        return SymbolFunction{[coeffs](double, double theta) {
                                  Complex acc{0.0, 0.0};
                                  for (const auto& [k, c] : coeffs)
                                      acc += c * std::exp(Complex{0.0, k * theta});
                                  return acc;
                              },
                              label};
    }
};

// Trapezoid/DFT rule on Q uniform nodes of [-pi, pi); exact for trigonometric
// polynomials of degree <= K as long as Q > 2K, which Q >= 4K + 4 guarantees.
inline FourierData fourier_coefficients(const std::function<Complex(double)>& f, int K, int Q) {
    if (K < 0) throw std::invalid_argument("fourier_coefficients: K must be non-negative");
    if (Q < 4 * K + 4) throw std::invalid_argument("fourier_coefficients: need Q >= 4K + 4");
    constexpr double pi = std::numbers::pi;
    std::vector<Complex> samples(static_cast<std::size_t>(Q));
    for (int q = 0; q < Q; ++q) samples[q] = f(-pi + 2.0 * pi * q / Q);
    FourierData data;
    for (int k = -K; k <= K; ++k) {
        Complex acc{0.0, 0.0};
        for (int q = 0; q < Q; ++q) {
            const double theta = -pi + 2.0 * pi * q / Q;
            acc += samples[q] * std::exp(Complex{0.0, -k * theta});
        }
        data.coefficients[k] = acc / static_cast<double>(Q);
    }
    return data;
}

// T_n(f) with entry (i, j) = f_{i-j}.
inline Matrix toeplitz(const FourierData& c, int n) {
    if (n < 1) throw std::invalid_argument("toeplitz: order must be positive");
    Matrix t = Matrix::Zero(n, n);
    for (const auto& [k, v] : c.coefficients) {
        if (v == Complex{0.0, 0.0} || std::abs(k) >= n) continue;
        for (int i = std::max(0, k); i < n && i - k < n; ++i) t(i, i - k) = v;
    }
    return t;
}

// D_n(a) = diag(a(1/n), a(2/n), ..., a(n/n)).
inline Matrix diag_sampling(const std::function<Complex(double)>& a, int n) {
    if (n < 1) throw std::invalid_argument("diag_sampling: order must be positive");
    Matrix d = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        Complex v;
        try {
            v = a(static_cast<double>(i + 1) / n);
        } catch (const std::exception& e) {
            throw std::runtime_error("diag_sampling: evaluation failed at node " + std::to_string(i + 1) + "/" +
                                     std::to_string(n) + ": " + e.what());
        }
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::runtime_error("diag_sampling: non-finite value at node " + std::to_string(i + 1) + "/" +
                                     std::to_string(n));
        d(i, i) = v;
    }
    return d;
}

// Zero-distributed generators. The declared rate (rank fraction or norm) is
// probed at geometrically growing orders and must actually vanish.
struct LowRankZero {
    std::function<int(int)> rank;
    std::function<double(int)> magnitude;
    std::uint64_t seed = 0;
    std::string label = "low-rank";
};

struct SmallNormZero {
    std::function<double(int)> norm;
    std::string label = "small-norm";
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline double hash_unit(std::uint64_t seed, std::uint64_t n, std::uint64_t i, std::uint64_t j) {
    std::uint64_t h = splitmix64(seed ^ splitmix64(n ^ splitmix64((i << 32) ^ j)));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline void require_vanishing(const std::function<double(int)>& rate, const char* what) {
    const int probes[] = {1 << 10, 1 << 15, 1 << 20, 1 << 25, 1 << 30};
    double first = -1.0, prev = -1.0, last = -1.0;
    for (int n : probes) {
        const double v = rate(n);
        if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + ": declared rate must be non-negative");
        if (first < 0.0)
            first = v;
        else if (v > prev + 1e-15)
            throw std::invalid_argument(std::string(what) + ": declared rate does not decrease");
        prev = v;
        last = v;
    }
    const bool shrinks = (first == 0.0) || (last < 0.75 * first);
    if (!(last < 0.125) || !shrinks)
        throw std::invalid_argument(std::string(what) + ": declared rate does not vanish");
}

}  // namespace detail

// Provenance expression tree; replay(pair.provenance) rebuilds the pair from
// the recorded leaves, so every experiment is reconstructible.
struct Provenance;
using ProvenancePtr = std::shared_ptr<const Provenance>;

struct Provenance {
    enum class Kind { Toeplitz, Diag, ZeroLowRank, ZeroSmallNorm, Add, Mul, Scale };
    Kind kind;
    FourierData coeffs;                       // Toeplitz
    std::function<Complex(double)> diag_fn;   // Diag
    LowRankZero low_rank;                     // ZeroLowRank
    SmallNormZero small_norm;                 // ZeroSmallNorm
    std::string leaf_label;
    Complex scalar{0.0, 0.0};                 // Scale
    std::vector<ProvenancePtr> children;      // Add/Mul: 2, Scale: 1
};

struct GltPair {
    MatrixSequence sequence;
    SymbolFunction symbol;
    ProvenancePtr provenance;
};

inline GltPair toeplitz_pair(const FourierData& c, const std::string& label = "f") {
    auto prov = std::make_shared<Provenance>();
    prov->kind = Provenance::Kind::Toeplitz;
    prov->coeffs = c;
    prov->leaf_label = label;
    return GltPair{MatrixSequence{[c](int n) { return toeplitz(c, n); }, "T(" + label + ")"},
                   c.to_symbol(label + "(theta)"), prov};
}

inline GltPair diag_pair(const std::function<Complex(double)>& a, const std::string& label = "a") {
    auto prov = std::make_shared<Provenance>();
    prov->kind = Provenance::Kind::Diag;
    prov->diag_fn = a;
    prov->leaf_label = label;
    return GltPair{MatrixSequence{[a](int n) { return diag_sampling(a, n); }, "D(" + label + ")"},
                   SymbolFunction{[a](double x, double) { return a(x); }, label + "(x)"}, prov};
}

inline GltPair zero_pair(const LowRankZero& kind) {
    auto rank = kind.rank;
    detail::require_vanishing([rank](int n) { return static_cast<double>(rank(n)) / n; }, "zero_pair(low_rank)");
    auto prov = std::make_shared<Provenance>();
    prov->kind = Provenance::Kind::ZeroLowRank;
    prov->low_rank = kind;
    prov->leaf_label = kind.label;
    auto magnitude = kind.magnitude;
    auto seed = kind.seed;
    MatrixSequence seq{[rank, magnitude, seed](int n) {
                           Matrix r = Matrix::Zero(n, n);
                           const int rows = std::clamp(rank(n), 0, n);
                           const double scale = magnitude(n);
                           for (int i = 0; i < rows; ++i)
                               for (int j = 0; j < n; ++j) {
                                   const double phase =
                                       2.0 * std::numbers::pi * detail::hash_unit(seed, n, i, j);
                                   r(i, j) = scale * std::exp(Complex{0.0, phase});
                               }
                           return r;
                       },
                       "Z(" + kind.label + ")"};
    return GltPair{std::move(seq), SymbolFunction{[](double, double) { return Complex{0.0, 0.0}; }, "0"}, prov};
}

inline GltPair zero_pair(const SmallNormZero& kind) {
    detail::require_vanishing(kind.norm, "zero_pair(small_norm)");
    auto prov = std::make_shared<Provenance>();
    prov->kind = Provenance::Kind::ZeroSmallNorm;
    prov->small_norm = kind;
    prov->leaf_label = kind.label;
    auto norm = kind.norm;
    MatrixSequence seq{[norm](int n) { return Matrix(norm(n) * Matrix::Identity(n, n)); }, "Z(" + kind.label + ")"};
    return GltPair{std::move(seq), SymbolFunction{[](double, double) { return Complex{0.0, 0.0}; }, "0"}, prov};
}

inline GltPair pair_add(const GltPair& p, const GltPair& q) {
    auto prov = std::make_shared<Provenance>();
    prov->kind = Provenance::Kind::Add;
    prov->children = {p.provenance, q.provenance};
    auto ps = p.sequence, qs = q.sequence;
    auto pk = p.symbol.evaluate, qk = q.symbol.evaluate;
    return GltPair{MatrixSequence{[ps, qs](int n) { return Matrix(ps.at(n) + qs.at(n)); },
                                  "(" + p.sequence.label + " + " + q.sequence.label + ")"},
                   SymbolFunction{[pk, qk](double x, double t) { return pk(x, t) + qk(x, t); },
                                  "(" + p.symbol.label + " + " + q.symbol.label + ")"},
                   prov};
}

inline GltPair pair_mul(const GltPair& p, const GltPair& q) {
    auto prov = std::make_shared<Provenance>();
    prov->kind = Provenance::Kind::Mul;
    prov->children = {p.provenance, q.provenance};
    auto ps = p.sequence, qs = q.sequence;
    auto pk = p.symbol.evaluate, qk = q.symbol.evaluate;
    return GltPair{MatrixSequence{[ps, qs](int n) { return Matrix(ps.at(n) * qs.at(n)); },
                                  "(" + p.sequence.label + " * " + q.sequence.label + ")"},
                   SymbolFunction{[pk, qk](double x, double t) { return pk(x, t) * qk(x, t); },
                                  "(" + p.symbol.label + " * " + q.symbol.label + ")"},
                   prov};
}

inline GltPair pair_scale(Complex lambda, const GltPair& p) {
    auto prov = std::make_shared<Provenance>();
    prov->kind = Provenance::Kind::Scale;
    prov->scalar = lambda;
    prov->children = {p.provenance};
    auto ps = p.sequence;
    auto pk = p.symbol.evaluate;
    const std::string ls = "lambda*";
    return GltPair{MatrixSequence{[ps, lambda](int n) { return Matrix(lambda * ps.at(n)); }, ls + p.sequence.label},
                   SymbolFunction{[pk, lambda](double x, double t) { return lambda * pk(x, t); },
                                  ls + p.symbol.label},
                   prov};
}

inline GltPair replay(const ProvenancePtr& prov) {
    if (!prov) throw std::invalid_argument("replay: empty provenance");
    switch (prov->kind) {
        case Provenance::Kind::Toeplitz: return toeplitz_pair(prov->coeffs, prov->leaf_label);
        case Provenance::Kind::Diag: return diag_pair(prov->diag_fn, prov->leaf_label);
        case Provenance::Kind::ZeroLowRank: return zero_pair(prov->low_rank);
        case Provenance::Kind::ZeroSmallNorm: return zero_pair(prov->small_norm);
        case Provenance::Kind::Add: return pair_add(replay(prov->children.at(0)), replay(prov->children.at(1)));
        case Provenance::Kind::Mul: return pair_mul(replay(prov->children.at(0)), replay(prov->children.at(1)));
        case Provenance::Kind::Scale: return pair_scale(prov->scalar, replay(prov->children.at(0)));
    }
    throw std::logic_error("replay: unknown provenance kind");
}

// Constructive density step: project k onto sum_{|j| <= m} a_j(x) e^{ij theta}
// with a_j piecewise constant on the 2^m dyadic grid. Both factors are native
// pairs, so the approximant is assembled inside the algebra and converges to
// k in measure as m grows.
inline GltPair dense_symbol_approximant(const SymbolFunction& k, int m) {
    if (m < 1) throw std::invalid_argument("dense_symbol_approximant: m must be >= 1");
    const int cells = 1 << m;
    const int per_cell = std::max(1, (64 + cells - 1) / cells);
    const int nx = cells * per_cell;
    const int ntheta = std::max(64, 4 * m + 4);

    // Complex samples on the fit grid; non-finite values abort the fit.
    std::vector<Complex> samples(static_cast<std::size_t>(nx) * ntheta);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ntheta; ++j) {
            const Complex v = k.evaluate(midpoint_x(i, nx), midpoint_theta(j, ntheta));
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::runtime_error("dense_symbol_approximant: non-finite sample of '" + k.label + "'");
            samples[static_cast<std::size_t>(i) * ntheta + j] = v;
        }

    // Node-wise Fourier projection in theta, averaged per dyadic cell.
    std::vector<std::vector<Complex>> coeff(2 * m + 1, std::vector<Complex>(cells, Complex{0.0, 0.0}));
    double coeff_max = 0.0;
    for (int jj = -m; jj <= m; ++jj) {
        auto& row = coeff[static_cast<std::size_t>(jj + m)];
        for (int c = 0; c < cells; ++c) {
            Complex acc{0.0, 0.0};
            for (int i = c * per_cell; i < (c + 1) * per_cell; ++i)
                for (int t = 0; t < ntheta; ++t)
                    acc += samples[static_cast<std::size_t>(i) * ntheta + t] *
                           std::exp(Complex{0.0, -jj * midpoint_theta(t, ntheta)});
            row[c] = acc / static_cast<double>(per_cell * ntheta);
            coeff_max = std::max(coeff_max, std::abs(row[c]));
        }
    }

    const double drop = 1e-14 * coeff_max;
    GltPair acc;
    bool have = false;
    for (int jj = -m; jj <= m; ++jj) {
        const auto& row = coeff[static_cast<std::size_t>(jj + m)];
        double row_max = 0.0;
        for (const auto& c : row) row_max = std::max(row_max, std::abs(c));
        if (row_max <= drop) continue;
        auto values = std::make_shared<std::vector<Complex>>(row);
        auto step = [values, cells](double x) {
            int c = static_cast<int>(x * cells);
            c = std::clamp(c, 0, cells - 1);
            return (*values)[static_cast<std::size_t>(c)];
        };
        FourierData mode;
        mode.coefficients[jj] = Complex{1.0, 0.0};
        GltPair term = pair_mul(diag_pair(step, "a_" + std::to_string(jj)),
                                toeplitz_pair(mode, "e^(" + std::to_string(jj) + "i theta)"));
        acc = have ? pair_add(acc, term) : term;
        have = true;
    }
    if (!have) {
        SmallNormZero zero{[](int) { return 0.0; }, "0"};
        return zero_pair(zero);
    }
    acc.symbol.label = "approx[m=" + std::to_string(m) + "](" + k.label + ")";
    acc.sequence.label = "approx[m=" + std::to_string(m) + "](" + k.label + ")";
    return acc;
}

}  // namespace gltlab
