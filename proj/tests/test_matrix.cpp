#include "gltlab/matrix.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace gltlab;

namespace {

Matrix diag_of(std::initializer_list<double> values) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values) m(i, i) = v, ++i;
    return m;
}

}  // namespace

TEST_CASE("singular_values on small closed-form matrices") {
    auto s = singular_values(diag_of({3.0, 4.0}));
    REQUIRE(s.values == std::vector<double>{4.0, 3.0});

    Matrix shift = Matrix::Zero(2, 2);
    shift(0, 1) = 1.0;
    auto t = singular_values(shift);
    REQUIRE_THAT(t.values[0], Catch::Matchers::WithinAbs(1.0, 1e-14));
    REQUIRE_THAT(t.values[1], Catch::Matchers::WithinAbs(0.0, 1e-14));
}

TEST_CASE("singular_values are unitarily invariant") {
    auto gen = oracle::rng(7);
    const int n = 16;
    const Matrix a = oracle::random_matrix(n, gen);
    const Matrix u = oracle::random_unitary(n, gen);
    const Matrix v = oracle::random_unitary(n, gen);
    const auto sa = singular_values(a);
    const auto sb = singular_values(Matrix(u * a * v));
    for (int i = 0; i < n; ++i) REQUIRE_THAT(sb.values[i], Catch::Matchers::WithinAbs(sa.values[i], 1e-10 * sa.values[0]));
}

TEST_CASE("singular_values output is sorted, non-negative") {
    auto gen = oracle::rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 1 + static_cast<int>(gen() % 24);
        const auto s = singular_values(oracle::random_matrix(n, gen));
        for (int i = 0; i < n; ++i) {
            REQUIRE(s.values[i] >= 0.0);
            if (i) REQUIRE(s.values[i] <= s.values[i - 1]);
        }
    }
}

TEST_CASE("spectral_norm basics") {
    REQUIRE(spectral_norm(Matrix::Zero(5, 5)) == 0.0);
    REQUIRE_THAT(spectral_norm(Matrix::Identity(6, 6)), Catch::Matchers::WithinAbs(1.0, 1e-14));

    Matrix a = Matrix::Zero(2, 2);
    a(0, 1) = 2.0;
    const double norm = spectral_norm(a);
    REQUIRE_THAT(norm, Catch::Matchers::WithinAbs(2.0, 1e-14));
    REQUIRE(norm == singular_values(a).largest());
}

TEST_CASE("spectral_norm is subadditive") {
    auto gen = oracle::rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(gen() % 15);
        const Matrix a = oracle::random_matrix(n, gen);
        const Matrix b = oracle::random_matrix(n, gen);
        const double lhs = spectral_norm(Matrix(a + b));
        const double rhs = spectral_norm(a) + spectral_norm(b);
        REQUIRE(lhs <= rhs * (1.0 + 1e-10));
    }
}

TEST_CASE("numerical_rank") {
    REQUIRE(numerical_rank(Matrix::Zero(4, 4), 1e-12) == 0);
    REQUIRE(numerical_rank(Matrix::Identity(4, 4), 1e-12) == 4);

    auto gen = oracle::rng(17);
    Eigen::VectorXcd u(8), v(8);
    for (int i = 0; i < 8; ++i) {
        std::normal_distribution<double> dist;
        u(i) = Complex{dist(gen), dist(gen)};
        v(i) = Complex{dist(gen), dist(gen)};
    }
    const Matrix outer = u * v.adjoint();
    REQUIRE(numerical_rank(outer, 1e-10) == 1);
    REQUIRE_THAT(spectral_norm(outer), Catch::Matchers::WithinRel(u.norm() * v.norm(), 1e-12));
}

TEST_CASE("numerical_rank counts exactly the nonzero diagonal") {
    REQUIRE(numerical_rank(diag_of({5.0, 3.0, 0.0, 0.0, 1e-8}), 1e-12) == 3);
    REQUIRE(numerical_rank(diag_of({1.0, 0.0}), 0.0) == 1);
}

TEST_CASE("invalid inputs are rejected") {
    Matrix rect = Matrix::Zero(2, 3);
    REQUIRE_THROWS_AS(singular_values(rect), std::invalid_argument);

    Matrix bad = Matrix::Identity(3, 3);
    bad(1, 1) = Complex{std::nan(""), 0.0};
    REQUIRE_THROWS_AS(singular_values(bad), std::invalid_argument);
    REQUIRE_THROWS_AS(spectral_norm(bad), std::invalid_argument);

    REQUIRE_THROWS_AS(numerical_rank(Matrix::Identity(2, 2), -1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(singular_values(Matrix(0, 0)), std::invalid_argument);
}
