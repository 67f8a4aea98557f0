#include "specfrac/assembly.hpp"

#include "specfrac/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace specfrac {

namespace {

struct KahanSum {
    double sum = 0.0, c = 0.0;
    void add(double v) {
        const double y = v - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

void check_in_class(const WeightedNodes& nodes, const BoxDomain& domain) {
    KahanSum integral, positive;
    double scale = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double contrib = nodes.weights[q] * nodes.m[q];
        integral.add(contrib);
        if (contrib > 0.0) positive.add(contrib);
        scale = std::max(scale, std::abs(nodes.m[q]));
    }
    const double tol = 1e-10 * domain.volume() * scale;
    if (!(integral.sum < -tol))
        throw NotInClassM("weight must have strictly negative integral");
    if (!(positive.sum > tol))
        throw NotInClassM("weight must be positive somewhere");
}

// Flat tensor slot of each basis mode, last dimension fastest.
std::vector<std::size_t> tensor_slots(const Basis& basis) {
    const int dim = basis.domain.dim;
    const std::size_t per_dim = static_cast<std::size_t>(factor_count(basis.domain, basis.cutoff));
    std::vector<std::size_t> slots(basis.size());
    for (std::size_t b = 0; b < basis.size(); ++b) {
        std::size_t t = 0;
        for (int d = 0; d < dim; ++d)
            t = t * per_dim + static_cast<std::size_t>(factor_slot(basis.domain, basis.modes[b], d));
        slots[b] = t;
    }
    return slots;
}

// Generic path: rank-one update per node in tensor-slot order.
Matrix assemble_per_node(const Basis& basis, const WeightedNodes& nodes) {
    const BoxDomain& dom = basis.domain;
    const int dim = dom.dim;
    const int c = basis.cutoff;
    const std::size_t nf = static_cast<std::size_t>(factor_count(dom, c));
    const std::size_t n = basis.size();

    Matrix mt(n, n, 0.0);
    std::array<std::vector<double>, 3> f;
    for (int d = 0; d < dim; ++d) f[static_cast<std::size_t>(d)].assign(nf, 0.0);
    std::vector<double> phi(n);

    for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double wm = nodes.weights[q] * nodes.m[q];
        if (wm == 0.0) continue;
        const auto x = nodes.point(q);
        for (int d = 0; d < dim; ++d)
            factor_values(dom, d, c, x[static_cast<std::size_t>(d)], f[static_cast<std::size_t>(d)].data());

        std::size_t t = 0;
        if (dim == 1) {
            for (std::size_t a = 0; a < nf; ++a) phi[t++] = f[0][a];
        } else if (dim == 2) {
            for (std::size_t a = 0; a < nf; ++a)
                for (std::size_t b = 0; b < nf; ++b) phi[t++] = f[0][a] * f[1][b];
        } else {
            for (std::size_t a = 0; a < nf; ++a)
                for (std::size_t b = 0; b < nf; ++b) {
                    const double fab = f[0][a] * f[1][b];
                    for (std::size_t e = 0; e < nf; ++e) phi[t++] = fab * f[2][e];
                }
        }

        for (std::size_t j = 0; j < n; ++j) {
            const double s = wm * phi[j];
            double* row = mt.row(j);
            for (std::size_t k = j; k < n; ++k) row[k] += s * phi[k];
        }
    }

    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < j; ++k) mt(j, k) = mt(k, j);
    return mt;
}

// Two-dimensional fast path. Nodes are grouped into quadrature lines that
// share one coordinate bit-for-bit (tensor panels and cut panels both emit
// such lines). Per line, the inner-axis factors are contracted into a
// small symmetric block S, then S is expanded by the rank-one outer-axis
// factor product. Contributions grouped along each axis accumulate into
// separate tensor-ordered matrices so all writes stay row-contiguous.
class TwoDimAssembler {
public:
    TwoDimAssembler(const Basis& basis, const WeightedNodes& nodes)
        : basis_(basis), nodes_(nodes),
          nf_(static_cast<std::size_t>(factor_count(basis.domain, basis.cutoff))), n_(nf_ * nf_) {}

    Matrix run() {
        std::vector<std::uint32_t> all(nodes_.size());
        for (std::uint32_t q = 0; q < all.size(); ++q) all[q] = q;

        auto groups0 = group_by_axis(all, 0);
        std::vector<std::uint32_t> leftover;
        std::vector<std::vector<std::uint32_t>> big0;
        for (auto& g : groups0) {
            if (g.size() >= 2)
                big0.push_back(std::move(g));
            else
                leftover.insert(leftover.end(), g.begin(), g.end());
        }
        auto groups1 = group_by_axis(leftover, 1);

        Matrix mt0(n_, n_, 0.0);
        for (const auto& g : big0) process(g, 0, mt0);

        Matrix mt1;
        if (!groups1.empty()) {
            mt1 = Matrix(n_, n_, 0.0);
            for (const auto& g : groups1) process(g, 1, mt1);
        }

        // Permute tensor slots into basis order; the axis-1 accumulator
        // lives in transposed slot order.
        const auto slots = tensor_slots(basis_);
        const std::size_t nb = basis_.size();
        if (nb != n_) throw std::logic_error("assemble_weight_matrix: basis is not a full tensor product");
        std::vector<std::size_t> slots1(nb);
        for (std::size_t b = 0; b < nb; ++b) {
            const std::size_t t0 = slots[b] / nf_, t1 = slots[b] % nf_;
            slots1[b] = t1 * nf_ + t0;
        }

        Matrix m(nb, nb);
        for (std::size_t j = 0; j < nb; ++j) {
            const double* r0 = mt0.row(slots[j]);
            double* out = m.row(j);
            for (std::size_t k = 0; k < nb; ++k) out[k] = r0[slots[k]];
            if (!mt1.empty()) {
                const double* r1 = mt1.row(slots1[j]);
                for (std::size_t k = 0; k < nb; ++k) out[k] += r1[slots1[k]];
            }
        }
        return m;
    }

private:
    std::vector<std::vector<std::uint32_t>> group_by_axis(const std::vector<std::uint32_t>& ids,
                                                          int axis) const {
        std::vector<std::vector<std::uint32_t>> groups;
        std::unordered_map<std::uint64_t, std::size_t> index;
        index.reserve(ids.size());
        for (std::uint32_t q : ids) {
            const double x = nodes_.coords[q * 2 + static_cast<std::size_t>(axis)];
            const auto key = std::bit_cast<std::uint64_t>(x);
            auto [it, inserted] = index.try_emplace(key, groups.size());
            if (inserted) groups.emplace_back();
            groups[it->second].push_back(q);
        }
        return groups;
    }

    void process(const std::vector<std::uint32_t>& group, int outer_axis, Matrix& mt) {
        const int inner_axis = 1 - outer_axis;
        const int c = basis_.cutoff;

        // Inner contraction: S(j,k) = sum over the line of w*m*f_j*f_k.
        std::vector<double> s(nf_ * nf_, 0.0);
        std::vector<double> f(nf_);
        for (std::uint32_t q : group) {
            const double wm = nodes_.weights[q] * nodes_.m[q];
            if (wm == 0.0) continue;
            factor_values(basis_.domain, inner_axis, c,
                          nodes_.coords[q * 2 + static_cast<std::size_t>(inner_axis)], f.data());
            for (std::size_t j = 0; j < nf_; ++j) {
                const double fj = wm * f[j];
                double* row = s.data() + j * nf_;
                for (std::size_t k = j; k < nf_; ++k) row[k] += fj * f[k];
            }
        }
        for (std::size_t j = 0; j < nf_; ++j)
            for (std::size_t k = 0; k < j; ++k) s[j * nf_ + k] = s[k * nf_ + j];

        std::vector<double> u(nf_);
        factor_values(basis_.domain, outer_axis, c,
                      nodes_.coords[group.front() * 2 + static_cast<std::size_t>(outer_axis)], u.data());

        for (std::size_t a = 0; a < nf_; ++a)
            for (std::size_t b = 0; b < nf_; ++b) {
                const double coef = u[a] * u[b];
                for (std::size_t j = 0; j < nf_; ++j) {
                    double* dst = mt.row(a * nf_ + j) + b * nf_;
                    const double* src = s.data() + j * nf_;
                    for (std::size_t k = 0; k < nf_; ++k) dst[k] += coef * src[k];
                }
            }
    }

    const Basis& basis_;
    const WeightedNodes& nodes_;
    std::size_t nf_, n_;
};

} // namespace

QuadratureSpec recommended_quadrature(const Basis& basis) {
    // Products of two modes oscillate at up to twice the cutoff frequency,
    // so the Gauss order tracks 2K+2 directly. One panel of that order sits
    // right at the resolution threshold where Gauss error for trigonometric
    // integrands stalls near 1e-5; halving the phase per panel with two
    // panels pushes smooth products to machine accuracy, which leaves curved
    // shape boundaries as the only visible quadrature error.
    QuadratureSpec spec;
    spec.order = std::max(8, 2 * basis.cutoff + 4);
    // Periodic mode k oscillates at 2 pi k / l, twice the Neumann pi k / l,
    // so the panel count doubles to keep the phase per panel in the regime
    // the order was sized for.
    spec.panels = basis.domain.boundary == BoundaryKind::Periodic ? 4 : 2;
    return spec;
}

GalerkinSystem assemble_weight_matrix(const Weight& w, std::shared_ptr<const Basis> basis,
                                      const QuadratureSpec& spec, bool enforce_class) {
    if (!basis) throw std::invalid_argument("assemble_weight_matrix: null basis");

    const int points_per_dim =
        w.is_sampled() ? w.grid()->points_per_dim() : spec.panels * spec.order;
    if (points_per_dim < 2 * basis->cutoff + 2)
        throw std::invalid_argument(
            "assemble_weight_matrix: quadrature too sparse for the basis cutoff (aliasing risk)");

    auto nodes = std::make_shared<WeightedNodes>(build_weighted_nodes(w, basis->domain, spec));
    if (enforce_class) check_in_class(*nodes, basis->domain);

    QuadratureInfo info;
    const QuadratureSpec used = w.is_sampled() ? w.grid()->spec() : spec;
    info.panels = used.panels;
    info.order = used.order;
    info.node_count = nodes->size();
    info.boundary_resolved = nodes->boundary_resolved;

    Matrix m;
    if (basis->domain.dim == 2) {
        TwoDimAssembler assembler(*basis, *nodes);
        m = assembler.run();
    } else {
        const auto slots = tensor_slots(*basis);
        Matrix mt = assemble_per_node(*basis, *nodes);
        const std::size_t n = basis->size();
        m = Matrix(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            const double* src = mt.row(slots[j]);
            double* dst = m.row(j);
            for (std::size_t k = 0; k < n; ++k) dst[k] = src[slots[k]];
        }
    }

    return GalerkinSystem(std::move(basis), w, std::move(m), info, std::move(nodes));
}

std::vector<double> eval_series(const Basis& basis, std::span<const double> coeffs,
                                const WeightedNodes& nodes) {
    if (coeffs.size() != basis.size())
        throw std::invalid_argument("eval_series: coefficient count mismatch");
    if (nodes.dim != basis.domain.dim)
        throw std::invalid_argument("eval_series: node dimension mismatch");

    const int dim = basis.domain.dim;
    const int c = basis.cutoff;
    const std::size_t nf = static_cast<std::size_t>(factor_count(basis.domain, c));

    // Coefficients in tensor-slot order.
    const auto slots = tensor_slots(basis);
    std::vector<double> ct(coeffs.size());
    for (std::size_t b = 0; b < coeffs.size(); ++b) ct[slots[b]] = coeffs[b];

    std::array<std::vector<double>, 3> f;
    for (int d = 0; d < dim; ++d) f[static_cast<std::size_t>(d)].assign(nf, 0.0);
    std::vector<double> tmp(dim == 3 ? nf * nf : nf);

    std::vector<double> out(nodes.size());
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        const auto x = nodes.point(q);
        for (int d = 0; d < dim; ++d)
            factor_values(basis.domain, d, c, x[static_cast<std::size_t>(d)],
                          f[static_cast<std::size_t>(d)].data());

        double v = 0.0;
        if (dim == 1) {
            for (std::size_t a = 0; a < nf; ++a) v += ct[a] * f[0][a];
        } else if (dim == 2) {
            for (std::size_t a = 0; a < nf; ++a) {
                const double* row = ct.data() + a * nf;
                double acc = 0.0;
                for (std::size_t b = 0; b < nf; ++b) acc += row[b] * f[1][b];
                v += f[0][a] * acc;
            }
        } else {
            for (std::size_t a = 0; a < nf; ++a) {
                const double* plane = ct.data() + a * nf * nf;
                double acc_a = 0.0;
                for (std::size_t b = 0; b < nf; ++b) {
                    const double* row = plane + b * nf;
                    double acc = 0.0;
                    for (std::size_t e = 0; e < nf; ++e) acc += row[e] * f[2][e];
                    acc_a += f[1][b] * acc;
                }
                v += f[0][a] * acc_a;
            }
        }
        out[q] = v;
    }
    return out;
}

} // namespace specfrac
