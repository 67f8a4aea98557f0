#include "specfrac/pencil.hpp"

#include "specfrac/eigen_solver.hpp"
#include "specfrac/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace specfrac {

namespace {

constexpr double kZeroRel = 1e-14;

Matrix symmetrized_form(const ReducedPencil& p) {
    const std::size_t r = p.size();
    std::vector<double> inv(r);
    for (std::size_t k = 0; k < r; ++k) inv[k] = 1.0 / std::sqrt(p.symbol()[k]);

    Matrix b(r, r);
    const Matrix& mt = p.reduced_matrix();
    for (std::size_t k = 0; k < r; ++k) {
        for (std::size_t j = k; j < r; ++j) {
            const double v = inv[k] * inv[j] * mt(k, j);
            b(k, j) = v;
            b(j, k) = v;
        }
    }
    return b;
}

double zero_threshold(double rho_hi, double rho_lo) {
    return kZeroRel * std::max(std::abs(rho_hi), std::abs(rho_lo));
}

EigenMode make_mode(const ReducedPencil& p, double rho, const Matrix& vectors, std::size_t col) {
    const std::size_t r = p.size();
    EigenMode mode;
    mode.rho = rho;
    mode.lambda = 1.0 / rho;

    // Unit eigenvector y of B has quadratic form y' B y = rho, which is
    // exactly the weighted square integral of the reconstructed function.
    // Dividing by sqrt|rho| normalizes that integral to sign(rho).
    const double scale = 1.0 / std::sqrt(std::abs(rho));
    mode.coeffs.resize(r + 1);
    double c0 = 0.0;
    for (std::size_t k = 0; k < r; ++k) {
        const double ck = vectors(k, col) / std::sqrt(p.symbol()[k]) * scale;
        mode.coeffs[k + 1] = ck;
        c0 += p.coupling()[k] * ck;
    }
    mode.coeffs[0] = -c0 / p.m00();
    return mode;
}

void flip(EigenMode& mode) {
    for (double& c : mode.coeffs) c = -c;
}

// Principal eigenfunctions do not change sign on the favorable set; pick
// the representative that is positive there.
void orient_principal(const ReducedPencil& p, EigenMode& mode) {
    const auto values = eval_series(p.basis(), mode.coeffs, p.nodes());
    const auto& nodes = p.nodes();
    double mass = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q)
        if (nodes.m[q] > 0.0) mass += nodes.weights[q] * values[q];
    if (mass < 0.0) flip(mode);
}

void orient_by_largest(EigenMode& mode) {
    double best = 0.0;
    for (double c : mode.coeffs)
        if (std::abs(c) > std::abs(best)) best = c;
    if (best < 0.0) flip(mode);
}

} // namespace

ReducedPencil build_reduced_pencil(const GalerkinSystem& system, double d, double s) {
    if (!(d > 0.0) || !std::isfinite(d))
        throw std::invalid_argument("build_reduced_pencil: d must be positive");
    if (!(s > 0.0) || !(s <= 1.0))
        throw std::invalid_argument("build_reduced_pencil: s must lie in (0, 1]");
    if (system.size() < 2)
        throw std::invalid_argument("build_reduced_pencil: basis has no nonconstant mode");

    const Matrix& m = system.matrix();
    const double m00 = m(0, 0);
    if (!(m00 < 0.0)) throw NotInClassM("average weight must be negative");

    const std::size_t r = system.size() - 1;
    ReducedPencil p;
    p.basis_ = system.basis_ptr();
    p.nodes_ = system.nodes_ptr();
    p.d_ = d;
    p.s_ = s;
    p.m00_ = m00;

    p.coupling_.resize(r);
    for (std::size_t j = 0; j < r; ++j) p.coupling_[j] = m(0, j + 1);

    p.mtilde_ = Matrix(r, r);
    for (std::size_t k = 0; k < r; ++k) {
        for (std::size_t j = k; j < r; ++j) {
            const double v = m(k + 1, j + 1) - m(k + 1, 0) * m(0, j + 1) / m00;
            p.mtilde_(k, j) = v;
            p.mtilde_(j, k) = v;
        }
    }

    p.symbol_.resize(r);
    const auto& mu = system.mu();
    for (std::size_t k = 0; k < r; ++k) {
        const double base = d * mu[k + 1];
        p.symbol_[k] = s == 1.0 ? base : std::pow(base, s);
    }
    return p;
}

Spectrum solve_spectrum(const ReducedPencil& pencil) {
    const SymmetricEigen eig = eigendecompose_symmetric(symmetrized_form(pencil));
    const std::size_t r = pencil.size();
    const double tol = zero_threshold(eig.values.front(), eig.values.back());

    Spectrum spec;
    spec.rho = eig.values;

    if (!(eig.values.front() > tol))
        throw NoPositivePrincipalEigenvalue(
            "weighted problem has no positive principal eigenvalue at this truncation");
    spec.principal = make_mode(pencil, eig.values.front(), eig.vectors, 0);
    orient_principal(pencil, spec.principal);

    if (!(eig.values.back() < -tol))
        throw NoSecondEigenvalue(
            "weighted problem has no negative eigenvalue at this truncation");
    spec.negative_principal = make_mode(pencil, eig.values.back(), eig.vectors, r - 1);
    orient_by_largest(spec.negative_principal);
    return spec;
}

EigenMode solve_principal(const ReducedPencil& pencil) {
    const SymmetricEigen eig = eigendecompose_symmetric(symmetrized_form(pencil));
    const double tol = zero_threshold(eig.values.front(), eig.values.back());
    if (!(eig.values.front() > tol))
        throw NoPositivePrincipalEigenvalue(
            "weighted problem has no positive principal eigenvalue at this truncation");
    EigenMode mode = make_mode(pencil, eig.values.front(), eig.vectors, 0);
    orient_principal(pencil, mode);
    return mode;
}

ExtremeEigenvalues solve_extremes(const ReducedPencil& pencil) {
    const std::vector<double> rho = eigenvalues_symmetric(symmetrized_form(pencil));
    const double tol = zero_threshold(rho.front(), rho.back());

    ExtremeEigenvalues out;
    if (!(rho.front() > tol))
        throw NoPositivePrincipalEigenvalue(
            "weighted problem has no positive principal eigenvalue at this truncation");
    out.lambda1 = 1.0 / rho.front();
    if (rho.back() < -tol) out.lambda_minus1 = 1.0 / rho.back();
    return out;
}

double solve_lambda1(const ReducedPencil& pencil) { return solve_extremes(pencil).lambda1; }

double solve_lambda_minus1(const ReducedPencil& pencil) {
    const ExtremeEigenvalues ext = solve_extremes(pencil);
    if (!ext.lambda_minus1)
        throw NoSecondEigenvalue("weighted problem has no negative eigenvalue at this truncation");
    return *ext.lambda_minus1;
}

double lambda1_limit_s0(const GalerkinSystem& system) {
    const ReducedPencil p = build_reduced_pencil(system, 1.0, 1.0);
    const std::vector<double> rho = eigenvalues_symmetric(p.reduced_matrix());
    const double tol = zero_threshold(rho.front(), rho.back());
    if (!(rho.front() > tol))
        throw NoPositivePrincipalEigenvalue(
            "reduced weight matrix has no positive eigenvalue at this truncation");
    return 1.0 / rho.front();
}

std::vector<double> reconstruct_function(std::span<const double> coeffs, const Basis& basis,
                                         const QuadratureGrid& grid) {
    if (coeffs.size() != basis.size())
        throw std::invalid_argument("reconstruct_function: coefficient count mismatch");
    if (grid.domain().dim != basis.domain.dim)
        throw std::invalid_argument("reconstruct_function: grid dimension mismatch");

    const int dim = basis.domain.dim;
    const int c = basis.cutoff;
    const std::size_t nf = static_cast<std::size_t>(factor_count(basis.domain, c));

    // Coefficients to tensor-slot order.
    std::vector<double> ct(coeffs.size(), 0.0);
    for (std::size_t b = 0; b < coeffs.size(); ++b) {
        std::size_t t = 0;
        for (int d = 0; d < dim; ++d)
            t = t * nf + static_cast<std::size_t>(factor_slot(basis.domain, basis.modes[b], d));
        ct[t] = coeffs[b];
    }

    // Per-axis factor tables, one row per grid node along that axis.
    std::array<Matrix, 3> f;
    std::array<std::size_t, 3> npts{1, 1, 1};
    for (int d = 0; d < dim; ++d) {
        const std::size_t i = static_cast<std::size_t>(d);
        const auto& xs = grid.axis_nodes(d);
        npts[i] = xs.size();
        f[i] = Matrix(xs.size(), nf);
        for (std::size_t q = 0; q < xs.size(); ++q)
            factor_values(basis.domain, d, c, xs[q], f[i].row(q));
    }

    std::vector<double> out(grid.size(), 0.0);
    if (dim == 1) {
        for (std::size_t q = 0; q < npts[0]; ++q) {
            const double* fq = f[0].row(q);
            double acc = 0.0;
            for (std::size_t t = 0; t < nf; ++t) acc += ct[t] * fq[t];
            out[q] = acc;
        }
        return out;
    }

    if (dim == 2) {
        // tmp(t0, q1) = sum_t1 ct(t0, t1) f1(q1, t1)
        Matrix tmp(nf, npts[1], 0.0);
        for (std::size_t t0 = 0; t0 < nf; ++t0) {
            const double* row = ct.data() + t0 * nf;
            double* dst = tmp.row(t0);
            for (std::size_t q1 = 0; q1 < npts[1]; ++q1) {
                const double* fq = f[1].row(q1);
                double acc = 0.0;
                for (std::size_t t1 = 0; t1 < nf; ++t1) acc += row[t1] * fq[t1];
                dst[q1] = acc;
            }
        }
        for (std::size_t q0 = 0; q0 < npts[0]; ++q0) {
            const double* fq = f[0].row(q0);
            double* dst = out.data() + q0 * npts[1];
            for (std::size_t t0 = 0; t0 < nf; ++t0) {
                const double v = fq[t0];
                const double* src = tmp.row(t0);
                for (std::size_t q1 = 0; q1 < npts[1]; ++q1) dst[q1] += v * src[q1];
            }
        }
        return out;
    }

    // dim == 3: contract axes back to front.
    Matrix tmp2(nf * nf, npts[2], 0.0);  // (t0 t1, q2)
    for (std::size_t t01 = 0; t01 < nf * nf; ++t01) {
        const double* row = ct.data() + t01 * nf;
        double* dst = tmp2.row(t01);
        for (std::size_t q2 = 0; q2 < npts[2]; ++q2) {
            const double* fq = f[2].row(q2);
            double acc = 0.0;
            for (std::size_t t2 = 0; t2 < nf; ++t2) acc += row[t2] * fq[t2];
            dst[q2] = acc;
        }
    }
    Matrix tmp1(nf, npts[1] * npts[2], 0.0);  // (t0, q1 q2)
    for (std::size_t t0 = 0; t0 < nf; ++t0) {
        double* dst = tmp1.row(t0);
        for (std::size_t t1 = 0; t1 < nf; ++t1) {
            const double* src = tmp2.row(t0 * nf + t1);
            for (std::size_t q1 = 0; q1 < npts[1]; ++q1) {
                const double v = f[1](q1, t1);
                if (v == 0.0) continue;
                double* d2 = dst + q1 * npts[2];
                for (std::size_t q2 = 0; q2 < npts[2]; ++q2) d2[q2] += v * src[q2];
            }
        }
    }
    for (std::size_t q0 = 0; q0 < npts[0]; ++q0) {
        double* dst = out.data() + q0 * npts[1] * npts[2];
        for (std::size_t t0 = 0; t0 < nf; ++t0) {
            const double v = f[0](q0, t0);
            const double* src = tmp1.row(t0);
            for (std::size_t q12 = 0; q12 < npts[1] * npts[2]; ++q12) dst[q12] += v * src[q12];
        }
    }
    return out;
}

} // namespace specfrac
