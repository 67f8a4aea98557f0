#include "specfrac/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace specfrac {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);

    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        nodes[static_cast<std::size_t>(i)] = -z;
        nodes[static_cast<std::size_t>(n - 1 - i)] = z;
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
}

QuadratureGrid::QuadratureGrid(const BoxDomain& domain, const QuadratureSpec& spec)
    : domain_(domain), spec_(spec) {
    if (spec.panels < 1) throw std::invalid_argument("quadrature_grid: panel count must be >= 1");
    if (spec.order < 1) throw std::invalid_argument("quadrature_grid: Gauss order must be >= 1");

    std::vector<double> ref_nodes, ref_weights;
    gauss_legendre(spec.order, ref_nodes, ref_weights);

    size_ = 1;
    for (int d = 0; d < domain.dim; ++d) {
        const double l = domain.lengths[static_cast<std::size_t>(d)];
        const double h = l / spec.panels;
        auto& xs = axis_nodes_[static_cast<std::size_t>(d)];
        auto& ws = axis_weights_[static_cast<std::size_t>(d)];
        xs.reserve(static_cast<std::size_t>(spec.panels * spec.order));
        ws.reserve(static_cast<std::size_t>(spec.panels * spec.order));
        for (int p = 0; p < spec.panels; ++p) {
            const double a = p * h;
            for (int i = 0; i < spec.order; ++i) {
                xs.push_back(a + 0.5 * h * (ref_nodes[static_cast<std::size_t>(i)] + 1.0));
                ws.push_back(0.5 * h * ref_weights[static_cast<std::size_t>(i)]);
            }
        }
        size_ *= xs.size();
    }
}

std::vector<double> QuadratureGrid::all_weights() const {
    std::vector<double> w(size_, 1.0);
    for (std::size_t q = 0; q < size_; ++q) w[q] = weight(q);
    return w;
}

std::size_t QuadratureGrid::nearest(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != domain_.dim)
        throw std::invalid_argument("QuadratureGrid::nearest: dimension mismatch");
    std::size_t flat = 0;
    for (int d = 0; d < domain_.dim; ++d) {
        const auto& xs = axis_nodes_[static_cast<std::size_t>(d)];
        std::size_t best = 0;
        double best_dist = std::abs(x[d] - xs[0]);
        // Axis nodes are sorted; a scan keeps ties deterministic.
        for (std::size_t i = 1; i < xs.size(); ++i) {
            const double dist = std::abs(x[d] - xs[i]);
            if (dist < best_dist) {
                best_dist = dist;
                best = i;
            }
        }
        flat = flat * xs.size() + best;
    }
    return flat;
}

QuadratureGrid quadrature_grid(const BoxDomain& domain, const QuadratureSpec& spec) {
    return QuadratureGrid(domain, spec);
}

} // namespace specfrac
