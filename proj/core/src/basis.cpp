#include "specfrac/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specfrac {

namespace {

// Angular frequency of wave number k in dimension d.
double frequency(const BoxDomain& dom, int d, int k) {
    const double l = dom.lengths[static_cast<std::size_t>(d)];
    return dom.boundary == BoundaryKind::Neumann ? k * M_PI / l : 2.0 * M_PI * k / l;
}

double dim_norm(const BoxDomain& dom, int d, int k) {
    const double l = dom.lengths[static_cast<std::size_t>(d)];
    return k == 0 ? std::sqrt(1.0 / l) : std::sqrt(2.0 / l);
}

double dim_factor(const BoxDomain& dom, int d, int k, ModeParity p, double x) {
    const double c = dim_norm(dom, d, k);
    if (k == 0) return c;
    const double arg = frequency(dom, d, k) * x;
    return p == ModeParity::Cos ? c * std::cos(arg) : c * std::sin(arg);
}

bool mode_less(const ModeIndex& a, double mu_a, const ModeIndex& b, double mu_b, int dim) {
    if (mu_a != mu_b) return mu_a < mu_b;
    for (int d = 0; d < dim; ++d) {
        const std::size_t i = static_cast<std::size_t>(d);
        if (a.k[i] != b.k[i]) return a.k[i] < b.k[i];
    }
    for (int d = 0; d < dim; ++d) {
        const std::size_t i = static_cast<std::size_t>(d);
        if (a.parity[i] != b.parity[i]) return a.parity[i] < b.parity[i];
    }
    return false;
}

} // namespace

Basis enumerate_modes(const BoxDomain& domain, int cutoff) {
    if (cutoff < 1) throw std::invalid_argument("enumerate_modes: cutoff must be >= 1");

    Basis basis;
    basis.domain = domain;
    basis.cutoff = cutoff;

    const int dim = domain.dim;
    std::vector<ModeIndex> modes;
    ModeIndex current;

    // Depth-first product over dimensions; per dimension a periodic box
    // contributes k = 0 plus a cos/sin pair for each 1 <= k <= cutoff.
    auto expand = [&](auto&& self, int d) -> void {
        if (d == dim) {
            modes.push_back(current);
            return;
        }
        const std::size_t i = static_cast<std::size_t>(d);
        for (int k = 0; k <= cutoff; ++k) {
            current.k[i] = k;
            current.parity[i] = ModeParity::Cos;
            self(self, d + 1);
            if (domain.boundary == BoundaryKind::Periodic && k >= 1) {
                current.parity[i] = ModeParity::Sin;
                self(self, d + 1);
                current.parity[i] = ModeParity::Cos;
            }
        }
        current.k[i] = 0;
    };
    expand(expand, 0);

    auto mu_of = [&](const ModeIndex& m) {
        double mu = 0.0;
        for (int d = 0; d < dim; ++d) {
            const double f = frequency(domain, d, m.k[static_cast<std::size_t>(d)]);
            mu += f * f;
        }
        return mu;
    };

    std::sort(modes.begin(), modes.end(), [&](const ModeIndex& a, const ModeIndex& b) {
        return mode_less(a, mu_of(a), b, mu_of(b), dim);
    });

    basis.modes = std::move(modes);
    basis.mu.reserve(basis.modes.size());
    basis.norms.reserve(basis.modes.size());
    for (const auto& m : basis.modes) {
        basis.mu.push_back(mu_of(m));
        double c = 1.0;
        for (int d = 0; d < dim; ++d) c *= dim_norm(domain, d, m.k[static_cast<std::size_t>(d)]);
        basis.norms.push_back(c);
    }
    basis.mu[0] = 0.0;
    return basis;
}

int factor_count(const BoxDomain& domain, int cutoff) {
    return domain.boundary == BoundaryKind::Neumann ? cutoff + 1 : 2 * cutoff + 1;
}

int factor_slot(const BoxDomain& domain, const ModeIndex& mode, int axis) {
    const std::size_t i = static_cast<std::size_t>(axis);
    const int k = mode.k[i];
    if (domain.boundary == BoundaryKind::Neumann || k == 0) return k;
    return mode.parity[i] == ModeParity::Cos ? 2 * k - 1 : 2 * k;
}

void factor_values(const BoxDomain& domain, int axis, int cutoff, double x, double* out) {
    const double c0 = dim_norm(domain, axis, 0);
    const double c = dim_norm(domain, axis, 1);
    out[0] = c0;
    if (domain.boundary == BoundaryKind::Neumann) {
        for (int k = 1; k <= cutoff; ++k) out[k] = c * std::cos(frequency(domain, axis, k) * x);
    } else {
        for (int k = 1; k <= cutoff; ++k) {
            const double arg = frequency(domain, axis, k) * x;
            out[2 * k - 1] = c * std::cos(arg);
            out[2 * k] = c * std::sin(arg);
        }
    }
}

double eval_mode(const Basis& basis, std::size_t j, std::span<const double> x) {
    if (j >= basis.size()) throw std::invalid_argument("eval_mode: mode index out of range");
    if (static_cast<int>(x.size()) != basis.domain.dim)
        throw std::invalid_argument("eval_mode: point dimension mismatch");
    if (!basis.domain.contains(x)) throw std::domain_error("eval_mode: point outside the domain");

    const ModeIndex& m = basis.modes[j];
    double v = 1.0;
    for (int d = 0; d < basis.domain.dim; ++d) {
        const std::size_t i = static_cast<std::size_t>(d);
        v *= dim_factor(basis.domain, d, m.k[i], m.parity[i], x[d]);
    }
    return v;
}

Matrix eval_mode_grid(const Basis& basis, const QuadratureGrid& grid) {
    const int dim = basis.domain.dim;
    if (dim != grid.domain().dim)
        throw std::invalid_argument("eval_mode_grid: grid dimension mismatch");

    const std::size_t n = basis.size();
    const std::size_t q_total = grid.size();
    Matrix table(n, q_total);

    std::array<std::vector<double>, 3> factors;
    for (std::size_t j = 0; j < n; ++j) {
        const ModeIndex& m = basis.modes[j];
        for (int d = 0; d < dim; ++d) {
            const std::size_t i = static_cast<std::size_t>(d);
            const auto& xs = grid.axis_nodes(d);
            auto& f = factors[i];
            f.resize(xs.size());
            for (std::size_t a = 0; a < xs.size(); ++a)
                f[a] = dim_factor(basis.domain, d, m.k[i], m.parity[i], xs[a]);
        }

        double* out = table.row(j);
        std::size_t q = 0;
        const auto& f0 = factors[0];
        if (dim == 1) {
            for (double v0 : f0) out[q++] = v0;
        } else if (dim == 2) {
            const auto& f1 = factors[1];
            for (double v0 : f0)
                for (double v1 : f1) out[q++] = v0 * v1;
        } else {
            const auto& f1 = factors[1];
            const auto& f2 = factors[2];
            for (double v0 : f0)
                for (double v1 : f1) {
                    const double v01 = v0 * v1;
                    for (double v2 : f2) out[q++] = v01 * v2;
                }
        }
    }
    return table;
}

} // namespace specfrac
