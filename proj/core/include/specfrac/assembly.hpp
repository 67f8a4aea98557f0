#pragma once

#include "specfrac/basis.hpp"
#include "specfrac/matrix.hpp"
#include "specfrac/weight.hpp"

#include <memory>

namespace specfrac {

struct QuadratureInfo {
    int panels = 0;
    int order = 0;
    std::size_t node_count = 0;
    bool boundary_resolved = false;
};

// Galerkin data of the weighted bilinear form on a truncated basis:
// matrix()(j, k) = integral of m * phi_j * phi_k, in basis order, together
// with the quadrature nodes the integrals were taken on. matrix()(0, 0)
// equals the domain average of m since phi_0 is the normalized constant.
class GalerkinSystem {
public:
    GalerkinSystem() = default;
    GalerkinSystem(std::shared_ptr<const Basis> basis, Weight weight, Matrix matrix,
                   QuadratureInfo quad, std::shared_ptr<const WeightedNodes> nodes)
        : basis_(std::move(basis)), weight_(std::move(weight)), matrix_(std::move(matrix)),
          quad_(quad), nodes_(std::move(nodes)) {}

    const Basis& basis() const { return *basis_; }
    const std::shared_ptr<const Basis>& basis_ptr() const { return basis_; }
    const Weight& weight() const { return weight_; }
    const Matrix& matrix() const { return matrix_; }
    const QuadratureInfo& quadrature() const { return quad_; }
    const WeightedNodes& nodes() const { return *nodes_; }
    const std::shared_ptr<const WeightedNodes>& nodes_ptr() const { return nodes_; }

    std::size_t size() const { return basis_->size(); }
    const std::vector<double>& mu() const { return basis_->mu; }
    double average_weight() const { return matrix_(0, 0); }

private:
    std::shared_ptr<const Basis> basis_;
    Weight weight_;
    Matrix matrix_;
    QuadratureInfo quad_;
    std::shared_ptr<const WeightedNodes> nodes_;
};

// Assembles the weight matrix. Shape weights use boundary-resolving nodes
// built from spec; sampled weights are integrated on their own grid and
// spec is ignored. Rejects rules with fewer than 2 * cutoff + 2 points per
// dimension: products of two modes reach twice the cutoff frequency and a
// sparser rule aliases them. recommended_quadrature satisfies the bound by
// construction. With enforce_class set,
// throws NotInClassM unless the weight has negative integral and a
// nontrivial positive part (same tolerances as analyze_weight).
GalerkinSystem assemble_weight_matrix(const Weight& w, std::shared_ptr<const Basis> basis,
                                      const QuadratureSpec& spec, bool enforce_class = true);

// Panelled Gauss rule whose order tracks the highest product frequency
// (2 * cutoff + 4 points per panel, at least 8; two panels per dimension,
// four on periodic domains where each mode index carries twice the
// frequency). Integrates smooth mode products to near machine accuracy.
QuadratureSpec recommended_quadrature(const Basis& basis);

// Evaluates sum_j coeffs[j] * phi_j at every node. Used for sign fixes
// and for sampling eigenfunctions on rearrangement grids.
std::vector<double> eval_series(const Basis& basis, std::span<const double> coeffs,
                                const WeightedNodes& nodes);

} // namespace specfrac
