#include "specfrac/eigen_solver.hpp"

#include "specfrac/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specfrac {

namespace {

void require_symmetric(const Matrix& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("eigendecompose_symmetric: matrix must be square");
    const std::size_t n = a.rows();
    const double scale = a.max_abs();
    const double tol = 1e-12 * (scale > 0.0 ? scale : 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(a(i, j) - a(j, i)) > tol)
                throw std::invalid_argument("eigendecompose_symmetric: matrix is not symmetric");
}

// Reduces the symmetric matrix held in the upper triangle of `a` to
// tridiagonal form (diagonal d, off-diagonal e, e[i] couples i and i+1).
// Only the upper triangle is read or written, so every inner loop walks
// rows contiguously. When `tau`/`reflectors` are given, the Householder
// vectors are kept (in the strict upper rows of `a`) for accumulation.
void tridiagonalize_upper(Matrix& a, std::vector<double>& d, std::vector<double>& e,
                          std::vector<double>* tau) {
    const std::size_t n = a.rows();
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    if (tau) tau->assign(n, 0.0);
    if (n == 0) return;

    std::vector<double> p(n), w(n);

    for (std::size_t i = 0; i + 2 < n; ++i) {
        double* ri = a.row(i);
        const std::size_t lo = i + 1;

        double norm2 = 0.0;
        for (std::size_t k = lo; k < n; ++k) norm2 += ri[k] * ri[k];
        const double norm = std::sqrt(norm2);

        d[i] = a(i, i);
        if (norm == 0.0) {
            e[i] = 0.0;
            continue;
        }

        const double alpha = ri[lo] >= 0.0 ? -norm : norm;
        e[i] = alpha;

        // v = u - alpha*e_1 overwrites the row tail; tau_i = 2 / |v|^2.
        ri[lo] -= alpha;
        double vv = 0.0;
        for (std::size_t k = lo; k < n; ++k) vv += ri[k] * ri[k];
        if (vv == 0.0) continue;
        const double t = 2.0 / vv;
        if (tau) (*tau)[i] = t;

        // p = t * B v over the trailing upper block, two accumulations per sweep.
        for (std::size_t k = lo; k < n; ++k) p[k] = 0.0;
        for (std::size_t j = lo; j < n; ++j) {
            const double* rj = a.row(j);
            const double vj = ri[j];
            double acc = rj[j] * vj;
            for (std::size_t k = j + 1; k < n; ++k) {
                const double b = rj[k];
                acc += b * ri[k];
                p[k] += b * vj;
            }
            p[j] += acc;
        }
        double pv = 0.0;
        for (std::size_t k = lo; k < n; ++k) {
            p[k] *= t;
            pv += p[k] * ri[k];
        }
        const double half = 0.5 * t * pv;
        for (std::size_t k = lo; k < n; ++k) w[k] = p[k] - half * ri[k];

        // B <- B - v w^T - w v^T, upper triangle only.
        for (std::size_t j = lo; j < n; ++j) {
            double* rj = a.row(j);
            const double vj = ri[j];
            const double wj = w[j];
            for (std::size_t k = j; k < n; ++k) rj[k] -= vj * w[k] + wj * ri[k];
        }
    }

    if (n >= 2) {
        d[n - 2] = a(n - 2, n - 2);
        e[n - 2] = a(n - 2, n - 1);
    }
    d[n - 1] = a(n - 1, n - 1);
    e[n - 1] = 0.0;
}

// Accumulates Q = H_0 H_1 ... from the reflectors left in the rows of `a`.
Matrix accumulate_q(const Matrix& a, const std::vector<double>& tau) {
    const std::size_t n = a.rows();
    Matrix q = Matrix::identity(n);
    if (n < 3) return q;

    std::vector<double> w(n);
    for (std::size_t ii = n - 2; ii-- > 0;) {
        const double t = tau[ii];
        if (t == 0.0) continue;
        const double* v = a.row(ii);
        const std::size_t lo = ii + 1;
        // w = v^T Q over the trailing block, then Q -= t v w.
        for (std::size_t j = lo; j < n; ++j) w[j] = 0.0;
        for (std::size_t k = lo; k < n; ++k) {
            const double vk = v[k];
            if (vk == 0.0) continue;
            const double* rk = q.row(k);
            for (std::size_t j = lo; j < n; ++j) w[j] += vk * rk[j];
        }
        for (std::size_t k = lo; k < n; ++k) {
            const double f = t * v[k];
            if (f == 0.0) continue;
            double* rk = q.row(k);
            for (std::size_t j = lo; j < n; ++j) rk[j] -= f * w[j];
        }
    }
    return q;
}

// Implicit-shift QL on the tridiagonal (d, e); e[i] couples i and i+1.
// When v is given its columns are rotated along, so v ends up holding
// the eigenvectors of the original matrix.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, Matrix* v) {
    const std::size_t n = d.size();
    if (n == 0) return;
    const double eps = std::ldexp(1.0, -52);

    double f = 0.0;
    double tst1 = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;

        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 64)
                    throw Error("eigendecompose_symmetric: QL iteration failed to converge");

                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0.0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t i = m; i-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    if (v) {
                        for (std::size_t k = 0; k < v->rows(); ++k) {
                            double* rk = v->row(k);
                            h = rk[i + 1];
                            rk[i + 1] = s * rk[i] + c * h;
                            rk[i] = c * rk[i] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

} // namespace

SymmetricEigen eigendecompose_symmetric(const Matrix& a) {
    require_symmetric(a);
    const std::size_t n = a.rows();

    Matrix work = a;
    std::vector<double> d, e, tau;
    tridiagonalize_upper(work, d, e, &tau);
    Matrix q = accumulate_q(work, tau);
    tridiagonal_ql(d, e, &q);

    // Sort descending, carrying eigenvector columns along.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::size_t kmax = i;
        for (std::size_t j = i + 1; j < n; ++j)
            if (d[j] > d[kmax]) kmax = j;
        if (kmax != i) {
            std::swap(d[i], d[kmax]);
            for (std::size_t r = 0; r < n; ++r) std::swap(q(r, i), q(r, kmax));
        }
    }

    SymmetricEigen out;
    out.values = std::move(d);
    out.vectors = std::move(q);
    return out;
}

std::vector<double> eigenvalues_symmetric(const Matrix& a) {
    require_symmetric(a);
    Matrix work = a;
    std::vector<double> d, e;
    tridiagonalize_upper(work, d, e, nullptr);
    tridiagonal_ql(d, e, nullptr);
    std::sort(d.begin(), d.end(), std::greater<double>());
    return d;
}

} // namespace specfrac
