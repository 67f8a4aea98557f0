#pragma once

#include "specfrac/assembly.hpp"
#include "specfrac/matrix.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace specfrac {

// Weighted eigenvalue problem on the truncated basis, with the constant
// mode eliminated. Writing M for the weight matrix and splitting off row
// and column 0 (the constant mode, where M(0,0) = average of m < 0):
//
//   reduced_matrix()(k, j) = M(k+1, j+1) - M(k+1, 0) M(0, j+1) / M(0, 0)
//   symbol()[k]            = (d * mu_{k+1})^s
//
// Eigenvalues lambda of the weighted problem are 1/rho for the nonzero
// eigenvalues rho of B = S^{-1/2} Mt S^{-1/2} with S = diag(symbol).
class ReducedPencil {
public:
    ReducedPencil() = default;

    const Basis& basis() const { return *basis_; }
    const std::shared_ptr<const Basis>& basis_ptr() const { return basis_; }
    const WeightedNodes& nodes() const { return *nodes_; }

    double d() const { return d_; }
    double s() const { return s_; }
    double m00() const { return m00_; }

    std::size_t size() const { return mtilde_.rows(); }
    const Matrix& reduced_matrix() const { return mtilde_; }
    const std::vector<double>& symbol() const { return symbol_; }
    const std::vector<double>& coupling() const { return coupling_; }

private:
    friend ReducedPencil build_reduced_pencil(const GalerkinSystem&, double, double);

    std::shared_ptr<const Basis> basis_;
    std::shared_ptr<const WeightedNodes> nodes_;
    Matrix mtilde_;
    std::vector<double> symbol_;
    std::vector<double> coupling_;  // M(0, j+1)
    double d_ = 1.0, s_ = 1.0, m00_ = 0.0;
};

// Requires d > 0, 0 < s <= 1 and a negative-average weight (NotInClassM
// otherwise).
ReducedPencil build_reduced_pencil(const GalerkinSystem& system, double d, double s);

// One eigenpair of the weighted problem. Coefficients are in basis order,
// include the reconstructed constant-mode component, and are scaled so the
// weighted square integral of the eigenfunction is +1 (principal) or -1
// (negative principal).
struct EigenMode {
    double lambda = 0.0;
    double rho = 0.0;
    std::vector<double> coeffs;
};

struct Spectrum {
    EigenMode principal;           // smallest positive eigenvalue
    EigenMode negative_principal;  // negative eigenvalue closest to zero
    std::vector<double> rho;       // all reduced eigenvalues, descending
};

// Full solve with eigenvectors. The principal eigenfunction is signed to
// be positive on the favorable set {m > 0}; the negative-principal one has
// its largest coefficient positive. Throws NoPositivePrincipalEigenvalue
// (no eigenvalue above the zero threshold, 1e-14 relative to the spectral
// radius) or NoSecondEigenvalue (no eigenvalue below it).
Spectrum solve_spectrum(const ReducedPencil& pencil);

// Principal eigenpair only; does not require a negative spectrum.
EigenMode solve_principal(const ReducedPencil& pencil);

// Values-only fast paths.
double solve_lambda1(const ReducedPencil& pencil);

// Throws NoSecondEigenvalue when the spectrum has no negative part.
double solve_lambda_minus1(const ReducedPencil& pencil);

struct ExtremeEigenvalues {
    double lambda1 = 0.0;
    std::optional<double> lambda_minus1;
};

ExtremeEigenvalues solve_extremes(const ReducedPencil& pencil);

// Limit of lambda_1(d, s) as s -> 0+, equal to the reciprocal of the top
// eigenvalue of the reduced matrix alone. Independent of d.
double lambda1_limit_s0(const GalerkinSystem& system);

// Pointwise synthesis of a coefficient vector on a tensor grid, in grid
// node order.
std::vector<double> reconstruct_function(std::span<const double> coeffs, const Basis& basis,
                                         const QuadratureGrid& grid);

} // namespace specfrac
