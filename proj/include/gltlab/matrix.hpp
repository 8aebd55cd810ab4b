// Dense complex matrices and the three spectral primitives the rest of the
// library consumes: full singular value decomposition (values only), spectral
// norm and numerical rank.
#pragma once

#include <Eigen/Dense>
#include <lapacke.h>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace gltlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Singular values sorted non-increasing, sigma_1 >= ... >= sigma_n >= 0.
struct SingularSpectrum {
    std::vector<double> values;

    int order() const { return static_cast<int>(values.size()); }
    double largest() const { return values.empty() ? 0.0 : values.front(); }
};

inline void require_square_finite(const Matrix& a, const char* where) {
    if (a.rows() == 0 || a.rows() != a.cols())
        throw std::invalid_argument(std::string(where) + ": matrix must be square of positive order, got " +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    if (!a.allFinite())
        throw std::invalid_argument(std::string(where) + ": matrix has non-finite entries");
}

// All n singular values, non-increasing. Backed by LAPACK's divide-and-conquer
// zgesdd in values-only mode; the input is copied since the driver destroys it.
inline SingularSpectrum singular_values(const Matrix& a) {
    require_square_finite(a, "singular_values");
    const auto n = static_cast<lapack_int>(a.rows());
    Matrix work = a;
    SingularSpectrum s;
    s.values.resize(static_cast<std::size_t>(n));
    const lapack_int info =
        LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', n, n, reinterpret_cast<lapack_complex_double*>(work.data()), n,
                       s.values.data(), nullptr, 1, nullptr, 1);
    if (info != 0)
        throw std::runtime_error("singular_values: zgesdd failed to converge (info=" + std::to_string(info) + ")");
    return s;
}

inline double spectral_norm(const Matrix& a) { return singular_values(a).largest(); }

// Relative rank threshold tol*sigma_1 with an absolute floor so the zero
// matrix has rank 0 for every tol.
inline constexpr double kRankFloor = 1e-300;

inline int numerical_rank(const SingularSpectrum& s, double tol) {
    if (tol < 0.0) throw std::invalid_argument("numerical_rank: tolerance must be non-negative");
    const double threshold = std::max(tol * s.largest(), kRankFloor);
    int rank = 0;
    for (double v : s.values)
        if (v > threshold) ++rank;
    return rank;
}

inline int numerical_rank(const Matrix& a, double tol) {
    if (tol < 0.0) throw std::invalid_argument("numerical_rank: tolerance must be non-negative");
    return numerical_rank(singular_values(a), tol);
}

}  // namespace gltlab
