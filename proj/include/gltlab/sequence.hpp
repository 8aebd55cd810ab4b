// The space of matrix sequences with its a.c.s. pseudometric.
//
// Per matrix,   p(A)  = min(1, min_i { (i-1)/n + sigma_i(A) })
// per sequence, rho   = limsup_n p(A_n), estimated over a finite n-ladder
// per pair,     d_acs = rho of the difference sequence.
//
// A doubly indexed family B_{n,m} converges a.c.s. exactly when it is Cauchy
// in this pseudometric; the splice construction assembles the limit sequence
// block by block from the family members.
#pragma once

#include "gltlab/ladder.hpp"
#include "gltlab/matrix.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <utility>

namespace gltlab {

// Thrown when a sequence generator fails or violates its order contract.
class generator_error : public std::runtime_error {
  public:
    generator_error(const std::string& what, int order) : std::runtime_error(what), order_(order) {}
    int order() const { return order_; }

  private:
    int order_;
};

// Thrown by splice_limit when the threshold search exhausts the probe grid.
class not_cauchy_error : public std::runtime_error {
  public:
    not_cauchy_error(const std::string& what, int member) : std::runtime_error(what), member_(member) {}
    int member() const { return member_; }

  private:
    int member_;
};

// Deterministic generator n -> A_n of order n. Generators must be re-entrant:
// evaluating the same sequence from several threads is allowed.
struct MatrixSequence {
    std::function<Matrix(int)> generator;
    std::string label;

    Matrix at(int n) const {
        if (n < 1) throw std::invalid_argument("MatrixSequence: order must be positive");
        Matrix m;
        try {
            m = generator(n);
        } catch (const std::exception& e) {
            throw generator_error("sequence '" + label + "' failed at n=" + std::to_string(n) + ": " + e.what(), n);
        }
        if (m.rows() != n || m.cols() != n)
            throw generator_error("sequence '" + label + "' produced order " + std::to_string(m.rows()) +
                                      " at n=" + std::to_string(n),
                                  n);
        return m;
    }
};

// Doubly indexed generator (m, n) -> B_{n,m} of order n.
struct AcsFamily {
    std::function<Matrix(int, int)> generator;
    std::string label;

    Matrix at(int m, int n) const {
        Matrix b = generator(m, n);
        if (b.rows() != n || b.cols() != n)
            throw generator_error("family '" + label + "' produced order " + std::to_string(b.rows()) +
                                      " at (m,n)=(" + std::to_string(m) + "," + std::to_string(n) + ")",
                                  n);
        return b;
    }

    MatrixSequence member(int m) const {
        auto self = *this;
        return MatrixSequence{[self, m](int n) { return self.at(m, n); },
                              label + "[m=" + std::to_string(m) + "]"};
    }
};

// Wraps a sequence with a mutex-guarded cache; orders above the cap are
// recomputed on every call so large matrices never pile up in memory.
inline MatrixSequence memoized(const MatrixSequence& seq, int max_cached_order = 1024) {
    struct Cache {
        std::mutex mutex;
        std::map<int, Matrix> stored;
    };
    auto cache = std::make_shared<Cache>();
    return MatrixSequence{[seq, cache, max_cached_order](int n) -> Matrix {
                              if (n > max_cached_order) return seq.at(n);
                              std::lock_guard<std::mutex> lock(cache->mutex);
                              auto it = cache->stored.find(n);
                              if (it == cache->stored.end()) it = cache->stored.emplace(n, seq.at(n)).first;
                              return it->second;
                          },
                          seq.label};
}

// The capped per-matrix functional applied to a known spectrum. The cap at 1
// corresponds to extending the index scan by a virtual term sigma_{n+1} = 0.
inline double p_hat(const SingularSpectrum& s) {
    const int n = s.order();
    if (n == 0) throw std::invalid_argument("p_hat: empty spectrum");
    double best = 1.0;
    for (int i = 1; i <= n; ++i) best = std::min(best, static_cast<double>(i - 1) / n + s.values[i - 1]);
    return best;
}

inline double p_hat(const Matrix& a) { return p_hat(singular_values(a)); }

// rho ladder: p_hat along n_grid, tail = max of the trailing window.
inline LadderReport rho_ladder(const MatrixSequence& seq, const std::vector<int>& n_grid, int tail_window) {
    require_grid(n_grid, "rho_ladder");
    std::vector<double> values;
    values.reserve(n_grid.size());
    for (int n : n_grid) values.push_back(p_hat(seq.at(n)));
    return make_ladder(n_grid, std::move(values), tail_window);
}

namespace detail {

// Flips the sign of the difference so that D and -D run through the identical
// computation; singular values are sign-invariant, this makes the d_acs ladder
// exactly symmetric in its two arguments.
inline Matrix canonical_sign(Matrix d) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
        for (Eigen::Index i = 0; i < d.rows(); ++i) {
            const Complex z = d(i, j);
            if (z.real() != 0.0) {
                if (z.real() < 0.0) d = -d;
                return d;
            }
            if (z.imag() != 0.0) {
                if (z.imag() < 0.0) d = -d;
                return d;
            }
        }
    }
    return d;
}

}  // namespace detail

inline LadderReport d_acs_ladder(const MatrixSequence& a, const MatrixSequence& b, const std::vector<int>& n_grid,
                                 int tail_window) {
    require_grid(n_grid, "d_acs_ladder");
    std::vector<double> values;
    values.reserve(n_grid.size());
    for (int n : n_grid) values.push_back(p_hat(detail::canonical_sign(a.at(n) - b.at(n))));
    return make_ladder(n_grid, std::move(values), tail_window);
}

// Pairwise d_acs tail estimates over the family members plus the Cauchy
// verdict. Position s in m_grid plays the role of the proof's subsequence
// index, so the threshold tested is 2^{-min(s,t)} + tol with 1-based s, t.
struct CauchyReport {
    bool verdict = false;
    std::vector<int> m_grid;
    std::vector<std::vector<double>> modulus;  // modulus[s][t], upper triangle filled
    std::vector<double> sup_after;             // sup_{t > s} modulus[s][t]
    double tol = 0.0;
};

inline CauchyReport is_cauchy(const AcsFamily& family, const std::vector<int>& m_grid,
                              const std::vector<int>& n_grid, int tail_window, double tol_cauchy = 0.05) {
    require_grid(m_grid, "is_cauchy");
    if (m_grid.size() < 3) throw std::invalid_argument("is_cauchy: need at least 3 family members");
    const int count = static_cast<int>(m_grid.size());

    std::vector<MatrixSequence> members;
    members.reserve(m_grid.size());
    for (int m : m_grid) members.push_back(memoized(family.member(m)));

    CauchyReport report;
    report.m_grid = m_grid;
    report.tol = tol_cauchy;
    report.modulus.assign(count, std::vector<double>(count, 0.0));
    bool normalized = true;
    for (int s = 0; s < count; ++s) {
        for (int t = s + 1; t < count; ++t) {
            const double d = d_acs_ladder(members[s], members[t], n_grid, tail_window).tail_estimate;
            report.modulus[s][t] = d;
            report.modulus[t][s] = d;
            if (d > std::pow(2.0, -static_cast<double>(s + 1)) + tol_cauchy) normalized = false;
        }
    }
    report.sup_after.assign(count - 1, 0.0);
    bool non_increasing = true;
    for (int s = 0; s + 1 < count; ++s) {
        double sup = 0.0;
        for (int t = s + 1; t < count; ++t) sup = std::max(sup, report.modulus[s][t]);
        report.sup_after[s] = sup;
        if (s > 0 && sup > report.sup_after[s - 1] + 1e-9) non_increasing = false;
    }
    report.verdict = normalized && non_increasing;
    return report;
}

// Constructive a.c.s. limit: find, for each consecutive pair of members, the
// smallest probed n from which p(B_{n,m} - B_{n,m+1}) <= 2 * rate(m) holds
// through the rest of the probe grid, then splice A_n := B_{n,m} on the block
// N_m <= n < N_{m+1}. Default rate(m) = 2^{-m} with m the 1-based position.
struct SpliceResult {
    MatrixSequence limit;
    std::vector<int> thresholds;  // N_m per consecutive pair, non-decreasing
};

inline SpliceResult splice_limit(const AcsFamily& family, const std::vector<int>& m_grid,
                                 const std::vector<int>& n_grid_probe, std::vector<double> target_rate = {}) {
    require_grid(m_grid, "splice_limit");
    require_grid(n_grid_probe, "splice_limit");
    const int count = static_cast<int>(m_grid.size());
    if (target_rate.empty()) {
        target_rate.resize(m_grid.size());
        for (int s = 0; s < count; ++s) target_rate[s] = std::pow(2.0, -static_cast<double>(s + 1));
    }
    if (static_cast<int>(target_rate.size()) != count)
        throw std::invalid_argument("splice_limit: one target rate per family member required");

    std::vector<MatrixSequence> members;
    members.reserve(m_grid.size());
    for (int m : m_grid) members.push_back(memoized(family.member(m)));

    if (count == 1)
        return SpliceResult{MatrixSequence{members.front().generator, family.label + " (splice)"},
                            {n_grid_probe.front()}};

    // p_hat of consecutive differences over the probe grid, one row per pair.
    std::vector<std::vector<double>> gaps(count - 1);
    for (int s = 0; s + 1 < count; ++s) {
        gaps[s].reserve(n_grid_probe.size());
        for (int n : n_grid_probe) gaps[s].push_back(p_hat(members[s].at(n) - members[s + 1].at(n)));
    }

    std::vector<int> thresholds(count - 1);
    int previous = 0;
    for (int s = 0; s + 1 < count; ++s) {
        const double bound = 2.0 * target_rate[s];
        std::optional<int> found;
        for (int start = static_cast<int>(n_grid_probe.size()) - 1; start >= 0; --start) {
            if (gaps[s][start] > bound) break;
            found = n_grid_probe[start];
        }
        if (!found)
            throw not_cauchy_error("splice_limit: member pair (" + std::to_string(m_grid[s]) + "," +
                                       std::to_string(m_grid[s + 1]) + ") never satisfies p <= " +
                                       std::to_string(bound) + " within the probe grid",
                                   m_grid[s]);
        thresholds[s] = std::max(*found, previous);
        previous = thresholds[s];
    }

    auto block_members = std::make_shared<std::vector<MatrixSequence>>(std::move(members));
    auto block_thresholds = std::make_shared<std::vector<int>>(thresholds);
    MatrixSequence limit{[block_members, block_thresholds](int n) {
                             int block = 0;
                             for (std::size_t s = 0; s < block_thresholds->size(); ++s)
                                 if ((*block_thresholds)[s] <= n) block = static_cast<int>(s);
                             return (*block_members)[block].at(n);
                         },
                         family.label + " (splice)"};
    return SpliceResult{std::move(limit), std::move(thresholds)};
}

// One a.c.s. witness per family member: a threshold n_m together with the
// norm and rank-fraction bounds, plus the explicit splitting A = B + N + R.
struct AcsWitness {
    struct Bound {
        int n_m = 0;
        double omega = 0.0;  // ||N_{n,m}|| <= omega
        double c = 0.0;      // rk(R_{n,m}) <= n * c
    };
    std::vector<Bound> bounds;  // aligned with the m_grid passed to the checker
    std::function<std::pair<Matrix, Matrix>(int, int)> splitting;  // (m, n) -> (N, R)
};

struct WitnessReport {
    struct PerMember {
        int m = 0;
        bool ok = true;
        std::string violation;  // empty when ok
    };
    std::vector<PerMember> members;
    bool all_ok = true;
};

inline WitnessReport verify_acs_witness(const MatrixSequence& a, const AcsFamily& family, const AcsWitness& witness,
                                        const std::vector<int>& m_grid, const std::vector<int>& n_grid,
                                        double entry_tol = 1e-10, double rank_tol = 1e-10) {
    require_grid(m_grid, "verify_acs_witness");
    require_grid(n_grid, "verify_acs_witness");
    if (witness.bounds.size() != m_grid.size())
        throw std::invalid_argument("verify_acs_witness: one bound per family member required");
    for (std::size_t s = 0; s < witness.bounds.size(); ++s) {
        const auto& b = witness.bounds[s];
        if (b.omega < 0.0 || b.c < 0.0) throw std::invalid_argument("verify_acs_witness: bounds must be non-negative");
        if (s > 0 && (b.omega > witness.bounds[s - 1].omega + 1e-15 || b.c > witness.bounds[s - 1].c + 1e-15))
            throw std::invalid_argument("verify_acs_witness: omega(m) and c(m) must be non-increasing");
    }

    WitnessReport report;
    for (std::size_t s = 0; s < m_grid.size(); ++s) {
        const int m = m_grid[s];
        const auto& bound = witness.bounds[s];
        WitnessReport::PerMember item{m, true, ""};
        for (int n : n_grid) {
            if (n <= bound.n_m) continue;
            const Matrix an = a.at(n);
            const Matrix bn = family.at(m, n);
            auto [nn, rr] = witness.splitting(m, n);
            if (nn.rows() != n || nn.cols() != n || rr.rows() != n || rr.cols() != n)
                throw std::invalid_argument("verify_acs_witness: splitting produced wrong orders at (m,n)=(" +
                                            std::to_string(m) + "," + std::to_string(n) + ")");
            const double mismatch = (an - (bn + nn + rr)).cwiseAbs().maxCoeff();
            if (mismatch > entry_tol) {
                item.ok = false;
                std::ostringstream os;
                os << "splitting mismatch " << mismatch << " at n=" << n;
                item.violation = os.str();
                break;
            }
            const double norm = spectral_norm(nn);
            if (norm > bound.omega + 1e-10) {
                item.ok = false;
                std::ostringstream os;
                os << "||N||=" << norm << " exceeds omega=" << bound.omega << " at n=" << n;
                item.violation = os.str();
                break;
            }
            const int rank = numerical_rank(rr, rank_tol);
            if (static_cast<double>(rank) > static_cast<double>(n) * bound.c) {
                item.ok = false;
                std::ostringstream os;
                os << "rk(R)=" << rank << " exceeds n*c=" << static_cast<double>(n) * bound.c << " at n=" << n;
                item.violation = os.str();
                break;
            }
        }
        report.all_ok = report.all_ok && item.ok;
        report.members.push_back(std::move(item));
    }
    return report;
}

}  // namespace gltlab
