#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "specfrac/eigen_solver.hpp"

using namespace specfrac;

namespace {

Matrix random_symmetric(std::size_t n, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = uni(rng);
            a(i, j) = v;
            a(j, i) = v;
        }
    return a;
}

}  // namespace

TEST_CASE("diagonal matrix returns sorted eigenvalues and axis vectors") {
    Matrix a(3, 3);
    a(0, 0) = 3.0;
    a(1, 1) = -1.0;
    a(2, 2) = 2.0;
    const SymmetricEigen eig = eigendecompose_symmetric(a);

    REQUIRE(eig.values.size() == 3);
    CHECK(eig.values[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(eig.values[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(eig.values[2] == doctest::Approx(-1.0).epsilon(1e-14));

    // Columns are +-e0, +-e2, +-e1.
    CHECK(std::abs(std::abs(eig.vectors(0, 0)) - 1.0) < 1e-14);
    CHECK(std::abs(std::abs(eig.vectors(2, 1)) - 1.0) < 1e-14);
    CHECK(std::abs(std::abs(eig.vectors(1, 2)) - 1.0) < 1e-14);
}

TEST_CASE("two by two exchange matrix") {
    Matrix a(2, 2);
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    const SymmetricEigen eig = eigendecompose_symmetric(a);
    CHECK(eig.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eig.values[1] == doctest::Approx(-1.0).epsilon(1e-14));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(std::abs(eig.vectors(0, 0)) - s) < 1e-14);
    CHECK(std::abs(eig.vectors(0, 0) - eig.vectors(1, 0)) *
              std::abs(eig.vectors(0, 0) + eig.vectors(1, 0)) <
          1e-14);
}

TEST_CASE("one by one matrix is its own eigenvalue") {
    Matrix a(1, 1);
    a(0, 0) = -4.5;
    const SymmetricEigen eig = eigendecompose_symmetric(a);
    CHECK(eig.values[0] == -4.5);
    CHECK(std::abs(std::abs(eig.vectors(0, 0)) - 1.0) < 1e-15);
}

TEST_CASE("random 50x50: reconstruction, orthonormality, residuals") {
    const std::size_t n = 50;
    const Matrix a = random_symmetric(n, 20240817u);
    const SymmetricEigen eig = eigendecompose_symmetric(a);
    const double scale = a.max_abs();

    // Eigenvalues sorted in descending order.
    for (std::size_t i = 0; i + 1 < n; ++i) CHECK(eig.values[i] >= eig.values[i + 1]);

    // V' V = I.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += eig.vectors(k, i) * eig.vectors(k, j);
            CHECK(std::abs(acc - (i == j ? 1.0 : 0.0)) < 1e-10);
        }

    // A v = rho v columnwise.
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            double av = 0.0;
            for (std::size_t k = 0; k < n; ++k) av += a(i, k) * eig.vectors(k, j);
            CHECK(std::abs(av - eig.values[j] * eig.vectors(i, j)) < 1e-10 * scale * n);
        }
    }

    // V diag(rho) V' = A.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                acc += eig.vectors(i, k) * eig.values[k] * eig.vectors(j, k);
            CHECK(std::abs(acc - a(i, j)) < 1e-9 * scale * n);
        }
}

TEST_CASE("values agree with an independent dense solver") {
    for (std::uint32_t seed : {7u, 99u, 12345u}) {
        const std::size_t n = 40;
        const Matrix a = random_symmetric(n, seed);

        Eigen::MatrixXd ae(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                ae(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(ae, Eigen::EigenvaluesOnly);
        REQUIRE(ref.info() == Eigen::Success);

        const std::vector<double> ours = eigenvalues_symmetric(a);
        REQUIRE(ours.size() == n);
        // Reference is ascending, ours descending.
        for (std::size_t i = 0; i < n; ++i) {
            const double want = ref.eigenvalues()(static_cast<Eigen::Index>(n - 1 - i));
            CHECK(std::abs(ours[i] - want) < 1e-11 * (1.0 + std::abs(want)));
        }
    }
}

TEST_CASE("values-only path matches the full decomposition") {
    const Matrix a = random_symmetric(23, 5u);
    const SymmetricEigen eig = eigendecompose_symmetric(a);
    const std::vector<double> vals = eigenvalues_symmetric(a);
    REQUIRE(vals.size() == eig.values.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        CHECK(std::abs(vals[i] - eig.values[i]) < 1e-12);
}

TEST_CASE("asymmetric input is rejected") {
    Matrix a(2, 2);
    a(0, 1) = 1.0;
    a(1, 0) = 1.0 + 1e-6;
    CHECK_THROWS_AS(eigendecompose_symmetric(a), std::invalid_argument);
    Matrix rect(2, 3);
    CHECK_THROWS_AS(eigendecompose_symmetric(rect), std::invalid_argument);
}
