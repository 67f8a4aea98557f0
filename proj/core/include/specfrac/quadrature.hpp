#pragma once

#include "specfrac/domain.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace specfrac {

// Composite tensor rule: each side of the box is cut into equal panels,
// each panel carries a Gauss-Legendre rule of the given order.
struct QuadratureSpec {
    int panels = 1;
    int order = 4;
};

// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
// on the Legendre polynomial. Exact for polynomials of degree 2n - 1.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Tensor-product quadrature grid over a box domain. Nodes along each axis
// are stored once; the full grid is the tensor product, addressed by a
// flat index that varies fastest in the last dimension.
class QuadratureGrid {
public:
    QuadratureGrid() = default;
    QuadratureGrid(const BoxDomain& domain, const QuadratureSpec& spec);

    const BoxDomain& domain() const { return domain_; }
    const QuadratureSpec& spec() const { return spec_; }

    int points_per_dim() const { return static_cast<int>(axis_nodes_[0].size()); }
    std::size_t size() const { return size_; }

    const std::vector<double>& axis_nodes(int d) const { return axis_nodes_[static_cast<std::size_t>(d)]; }
    const std::vector<double>& axis_weights(int d) const { return axis_weights_[static_cast<std::size_t>(d)]; }

    // Decodes flat index q into per-axis indices.
    std::array<std::size_t, 3> decode(std::size_t q) const {
        std::array<std::size_t, 3> idx{0, 0, 0};
        for (int d = domain_.dim - 1; d >= 0; --d) {
            const std::size_t n = axis_nodes_[static_cast<std::size_t>(d)].size();
            idx[static_cast<std::size_t>(d)] = q % n;
            q /= n;
        }
        return idx;
    }

    std::array<double, 3> node(std::size_t q) const {
        const auto idx = decode(q);
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int d = 0; d < domain_.dim; ++d)
            x[static_cast<std::size_t>(d)] = axis_nodes_[static_cast<std::size_t>(d)][idx[static_cast<std::size_t>(d)]];
        return x;
    }

    double weight(std::size_t q) const {
        const auto idx = decode(q);
        double w = 1.0;
        for (int d = 0; d < domain_.dim; ++d)
            w *= axis_weights_[static_cast<std::size_t>(d)][idx[static_cast<std::size_t>(d)]];
        return w;
    }

    // All tensor weights, flattened in grid order.
    std::vector<double> all_weights() const;

    // Index of the grid node closest to x (ties resolved toward lower index).
    std::size_t nearest(std::span<const double> x) const;

private:
    BoxDomain domain_;
    QuadratureSpec spec_;
    std::array<std::vector<double>, 3> axis_nodes_;
    std::array<std::vector<double>, 3> axis_weights_;
    std::size_t size_ = 0;
};

QuadratureGrid quadrature_grid(const BoxDomain& domain, const QuadratureSpec& spec);

} // namespace specfrac
