// Shared fixtures and independent reference computations for the test suite.
//
// The eigenvalue oracle below deliberately avoids the library's reduction:
// it feeds the raw generalized pencil (including the constant mode) to
// Eigen's QZ solver and extracts the extreme eigenvalues by filtering, so
// agreement with the library checks the constant-mode elimination, the
// symmetrized form, and the in-house eigensolver all at once.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "specfrac/assembly.hpp"
#include "specfrac/basis.hpp"
#include "specfrac/pencil.hpp"
#include "specfrac/quadrature.hpp"
#include "specfrac/weight.hpp"

namespace testsupport {

struct OracleExtremes {
    double lambda1 = 0.0;
    std::optional<double> lambda_minus1;
};

// Solve diag(0, (d mu_k)^s) c = lambda M c with QZ on the unreduced pair.
// lambda1 is the smallest positive eigenvalue, lambda_minus1 the negative
// one closest to zero; the exact zero from the constant mode is dropped.
inline OracleExtremes qz_extremes(const specfrac::GalerkinSystem& sys, double d, double s) {
    const std::size_t n = sys.size();
    Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                               static_cast<Eigen::Index>(n));
    Eigen::MatrixXd wm(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            wm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sys.matrix()(i, j);
    for (std::size_t k = 1; k < n; ++k)
        dm(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) =
            std::pow(d * sys.mu()[k], s);

    Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges;
    ges.compute(dm, wm, false);
    if (ges.info() != Eigen::Success) throw std::runtime_error("qz oracle failed to converge");

    const auto& alphas = ges.alphas();
    const auto& betas = ges.betas();
    double beta_scale = 0.0;
    for (Eigen::Index i = 0; i < betas.size(); ++i)
        beta_scale = std::max(beta_scale, std::abs(betas(i)));

    std::vector<double> lams;
    for (Eigen::Index i = 0; i < betas.size(); ++i) {
        if (std::abs(betas(i)) <= 1e-12 * beta_scale) continue;  // infinite eigenvalue
        const std::complex<double> lam = alphas(i) / betas(i);
        if (std::abs(lam.imag()) > 1e-9 * (1.0 + std::abs(lam.real()))) continue;
        lams.push_back(lam.real());
    }
    if (lams.empty()) throw std::runtime_error("qz oracle found no real eigenvalues");

    double lam_max = 0.0;
    for (double l : lams) lam_max = std::max(lam_max, std::abs(l));

    OracleExtremes out;
    double best_pos = std::numeric_limits<double>::infinity();
    double best_neg = -std::numeric_limits<double>::infinity();
    bool has_pos = false, has_neg = false;
    for (double l : lams) {
        if (std::abs(l) <= 1e-10 * lam_max) continue;  // constant-mode zero
        if (l > 0.0 && l < best_pos) { best_pos = l; has_pos = true; }
        if (l < 0.0 && l > best_neg) { best_neg = l; has_neg = true; }
    }
    if (!has_pos) throw std::runtime_error("qz oracle found no positive eigenvalue");
    out.lambda1 = best_pos;
    if (has_neg) out.lambda_minus1 = best_neg;
    return out;
}

// Random weight sampled on a quadrature grid, adjusted so the average is
// negative while a positive part survives. Deterministic for a given seed.
inline specfrac::Weight random_inclass_weight(const specfrac::BoxDomain& domain, int cutoff,
                                              std::uint32_t seed) {
    const specfrac::QuadratureSpec spec{(2 * cutoff + 2 + 7) / 8, 8};
    auto grid = std::make_shared<const specfrac::QuadratureGrid>(domain, spec);

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> vals(grid->size());
    for (double& v : vals) v = uni(rng);

    double mass = 0.0;
    for (std::size_t q = 0; q < grid->size(); ++q) mass += grid->weight(q) * vals[q];
    const double shift = mass / domain.volume() + 0.25;  // forces average to -0.25
    double vmax = -std::numeric_limits<double>::infinity();
    for (double& v : vals) {
        v -= shift;
        vmax = std::max(vmax, v);
    }
    if (vmax <= 0.0) vals[0] = 0.5;  // keep a favorable region; never triggers in practice
    return specfrac::Weight::sampled(grid, std::move(vals));
}

// System with a hand-checkable reduction on (0, pi), Neumann, cutoff 2:
//   M = [ -1   0.5  0 ]        mu = (0, 1, 4)
//       [ 0.5  1    0 ]
//       [ 0    0    2 ]
// Eliminating the constant mode gives Mtilde = diag(1.25, 2), and at
// d = s = 1 the symmetrized pencil is diag(1.25, 0.5), so lambda1 = 0.8
// and there is no negative eigenvalue.
inline specfrac::GalerkinSystem hand_system() {
    using namespace specfrac;
    const BoxDomain domain({3.14159265358979323846}, BoundaryKind::Neumann);
    auto basis = std::make_shared<Basis>(enumerate_modes(domain, 2));

    Matrix m(3, 3);
    m(0, 0) = -1.0; m(0, 1) = 0.5; m(0, 2) = 0.0;
    m(1, 0) = 0.5;  m(1, 1) = 1.0; m(1, 2) = 0.0;
    m(2, 0) = 0.0;  m(2, 1) = 0.0; m(2, 2) = 2.0;

    const QuadratureSpec spec{1, 8};
    Weight w(-1.0);
    auto nodes = std::make_shared<WeightedNodes>(build_weighted_nodes(w, domain, spec));
    return GalerkinSystem(basis, w, m, QuadratureInfo{spec.panels, spec.order, nodes->size(), true},
                          nodes);
}

// Same shape with a configurable diagonal block: M = diag(m00, c, c).
// Mtilde = c I, so the s -> 0 limit of lambda1 is exactly 1/c when c > 0.
inline specfrac::GalerkinSystem diag_system(double m00, double c) {
    using namespace specfrac;
    const BoxDomain domain({3.14159265358979323846}, BoundaryKind::Neumann);
    auto basis = std::make_shared<Basis>(enumerate_modes(domain, 2));

    Matrix m(3, 3);
    m(0, 0) = m00;
    m(1, 1) = c;
    m(2, 2) = c;

    const QuadratureSpec spec{1, 8};
    Weight w(m00);
    auto nodes = std::make_shared<WeightedNodes>(build_weighted_nodes(w, domain, spec));
    return GalerkinSystem(basis, w, m, QuadratureInfo{spec.panels, spec.order, nodes->size(), true},
                          nodes);
}

// Assemble a preset-sized system in one call.
inline specfrac::GalerkinSystem assemble_system(const specfrac::Weight& w,
                                                const specfrac::BoxDomain& domain, int cutoff) {
    auto basis = std::make_shared<specfrac::Basis>(specfrac::enumerate_modes(domain, cutoff));
    return specfrac::assemble_weight_matrix(w, basis, specfrac::recommended_quadrature(*basis));
}

}  // namespace testsupport
