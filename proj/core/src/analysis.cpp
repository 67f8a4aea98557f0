#include "specfrac/analysis.hpp"

#include "specfrac/errors.hpp"
#include "specfrac/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

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

void validate_s_grid(std::span<const double> s_grid) {
    if (s_grid.empty()) throw std::invalid_argument("s grid must be nonempty");
    double prev = 0.0;
    for (double s : s_grid) {
        if (!(s > prev)) throw std::invalid_argument("s grid must be strictly increasing");
        if (!(s <= 1.0)) throw std::invalid_argument("s grid must lie in (0, 1]");
        prev = s;
    }
}

// Rescaled classification without re-solving: values d^s * lambda1(1, s).
CurveShape classify_rescaled(std::span<const double> s_grid, std::span<const double> unit_lambda1,
                             double d) {
    std::vector<double> values(unit_lambda1.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = std::pow(d, s_grid[i]) * unit_lambda1[i];
    return classify_curve(values);
}

} // namespace

CurveShape classify_curve(std::span<const double> values, double rel_tol) {
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    const double tol = rel_tol * scale;

    // Signs of first differences, ties dropped, runs collapsed.
    std::vector<int> runs;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double diff = values[i + 1] - values[i];
        if (std::abs(diff) <= tol) continue;
        const int sign = diff > 0.0 ? 1 : -1;
        if (runs.empty() || runs.back() != sign) runs.push_back(sign);
    }
    if (runs.empty()) return CurveShape::Other;

    int down_up = 0, up_down = 0;
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
        if (runs[i] < 0 && runs[i + 1] > 0) ++down_up;
        if (runs[i] > 0 && runs[i + 1] < 0) ++up_down;
    }

    if (down_up >= 1) return CurveShape::HasInteriorMin;
    if (up_down == 0) return runs.front() > 0 ? CurveShape::Increasing : CurveShape::Decreasing;
    if (up_down == 1) return CurveShape::SingleInteriorMax;
    return CurveShape::Other;
}

const char* to_string(CurveShape shape) {
    switch (shape) {
        case CurveShape::Increasing: return "Increasing";
        case CurveShape::Decreasing: return "Decreasing";
        case CurveShape::SingleInteriorMax: return "SingleInteriorMax";
        case CurveShape::HasInteriorMin: return "HasInteriorMin";
        case CurveShape::Other: return "Other";
    }
    return "Other";
}

std::vector<double> default_s_grid() {
    std::vector<double> grid(100);
    for (int i = 1; i <= 100; ++i) grid[static_cast<std::size_t>(i - 1)] = i / 100.0;
    return grid;
}

SSweep sweep_s(const GalerkinSystem& system, double d, std::span<const double> s_grid) {
    if (!(d > 0.0) || !std::isfinite(d))
        throw std::invalid_argument("sweep_s: d must be positive");
    validate_s_grid(s_grid);

    SSweep sweep;
    sweep.d = d;
    sweep.s_grid.assign(s_grid.begin(), s_grid.end());

    const std::size_t n = s_grid.size();
    std::vector<double> unit_lambda1(n);
    sweep.neg_lambda_minus1.assign(n, 0.0);

    parallel_for(n, [&](std::size_t i) {
        const ReducedPencil pencil = build_reduced_pencil(system, 1.0, s_grid[i]);
        const ExtremeEigenvalues ext = solve_extremes(pencil);
        unit_lambda1[i] = ext.lambda1;
        sweep.neg_lambda_minus1[i] = ext.lambda_minus1
                                         ? -*ext.lambda_minus1
                                         : std::numeric_limits<double>::infinity();
    });

    sweep.lambda1.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        sweep.lambda1[i] = std::pow(d, s_grid[i]) * unit_lambda1[i];

    sweep.lambda1_at_0 = lambda1_limit_s0(system);
    sweep.classification = classify_curve(sweep.lambda1);
    return sweep;
}

SSweep rescale_sweep(const SSweep& unit, double d) {
    if (unit.d != 1.0) throw std::invalid_argument("rescale_sweep needs a unit-motility sweep");
    if (!(d > 0.0) || !std::isfinite(d))
        throw std::invalid_argument("rescale_sweep: d must be positive");
    SSweep out = unit;
    out.d = d;
    for (std::size_t i = 0; i < out.lambda1.size(); ++i)
        out.lambda1[i] = std::pow(d, unit.s_grid[i]) * unit.lambda1[i];
    out.classification = classify_curve(out.lambda1);
    return out;
}

CriticalMotility critical_d(const GalerkinSystem& system) {
    CriticalMotility out;
    out.lambda1_unit_s1 = solve_lambda1(build_reduced_pencil(system, 1.0, 1.0));
    out.lambda1_at_0 = lambda1_limit_s0(system);
    out.d_star = out.lambda1_at_0 / out.lambda1_unit_s1;
    return out;
}

DirichletBallConstants dirichlet_ball_constants(int dim) {
    DirichletBallConstants c;
    c.dim = dim;
    switch (dim) {
        case 1:
            c.lambda1_dir = M_PI * M_PI / 4.0;
            c.sphere_area = 2.0;
            break;
        case 2: {
            // square of the first zero of the Bessel function J_0
            const double j01 = 2.404825557695773;
            c.lambda1_dir = j01 * j01;
            c.sphere_area = 2.0 * M_PI;
            break;
        }
        case 3:
            c.lambda1_dir = M_PI * M_PI;
            c.sphere_area = 4.0 * M_PI;
            break;
        default:
            throw std::invalid_argument("dirichlet_ball_constants: dimension must be 1, 2 or 3");
    }
    return c;
}

ConditionReport check_conditions(const GalerkinSystem& system, const BallCertificate& certificate,
                                 std::span<const double> s_grid, const SSweep* unit_sweep) {
    validate_s_grid(s_grid);
    verify_certificate(system.nodes(), system.basis().domain, certificate);

    SSweep local;
    if (unit_sweep) {
        if (unit_sweep->d != 1.0)
            throw std::invalid_argument("check_conditions: precomputed sweep must be at d = 1");
        if (unit_sweep->s_grid.size() != s_grid.size() ||
            !std::equal(s_grid.begin(), s_grid.end(), unit_sweep->s_grid.begin()))
            throw std::invalid_argument("check_conditions: precomputed sweep grid mismatch");
    } else {
        local = sweep_s(system, 1.0, s_grid);
    }
    const SSweep& sweep = unit_sweep ? *unit_sweep : local;

    ConditionReport rep;
    rep.s_grid.assign(s_grid.begin(), s_grid.end());
    rep.constants = dirichlet_ball_constants(system.basis().domain.dim);
    rep.mu1 = system.mu()[1];

    rep.spectral_gap.resize(s_grid.size());
    rep.spectral_gap_all = true;
    rep.spectral_gap_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        const double gap = sweep.neg_lambda_minus1[i] - sweep.lambda1[i];
        rep.spectral_gap[i] = gap > 0.0;
        if (!rep.spectral_gap[i]) rep.spectral_gap_all = false;
        if (gap < rep.spectral_gap_margin) {
            rep.spectral_gap_margin = gap;
            rep.spectral_gap_worst_s = s_grid[i];
        }
    }

    const double bound = certificate.bound;
    const double delta = certificate.delta;
    const double rho = certificate.radius;

    // lambda_1(1, 1): from the sweep when its grid ends at s = 1.
    const double lambda1_s1 = s_grid.back() == 1.0
                                  ? sweep.lambda1.back()
                                  : solve_lambda1(build_reduced_pencil(system, 1.0, 1.0));
    rep.reduced.lhs = lambda1_s1;
    rep.reduced.rhs = rep.mu1 / bound;
    rep.reduced.holds = rep.reduced.lhs < rep.reduced.rhs;

    rep.fragmentation.lhs = delta / bound * rho * rho * rep.mu1;
    rep.fragmentation.rhs = rep.constants.lambda1_dir;
    rep.fragmentation.holds = rep.fragmentation.lhs > rep.fragmentation.rhs;

    const int dim = system.basis().domain.dim;
    const double integral = system.average_weight() * system.basis().domain.volume();
    const double denom = bound * rep.constants.lambda1_dir - rep.mu1 * delta * rho * rho;
    rep.average_window.lhs = integral;
    if (denom > 0.0) {
        const double a = std::sqrt(2.0 * rep.constants.sphere_area / rep.constants.lambda1_dir) *
                         rep.mu1 * delta * delta * std::pow(rho, 2.0 + dim * 0.5) / denom;
        rep.amplitude = a;
        rep.average_window.rhs = -a;
        rep.average_window.holds = -a < integral && integral < 0.0;
    } else {
        rep.average_window.rhs = 0.0;
        rep.average_window.holds = false;
    }
    return rep;
}

MonotoneRegime monotone_regime_bounds(const GalerkinSystem& system, double a,
                                      const SSweep* unit_sweep) {
    if (!(a > 0.0) || !(a < 1.0))
        throw std::invalid_argument("monotone_regime_bounds: a must lie in (0, 1)");

    SSweep local;
    if (unit_sweep) {
        if (unit_sweep->d != 1.0)
            throw std::invalid_argument("monotone_regime_bounds: precomputed sweep must be at d = 1");
    } else {
        local = sweep_s(system, 1.0, default_s_grid());
    }
    const SSweep& sweep = unit_sweep ? *unit_sweep : local;

    // Restrict the unit curve to [a, 1]; candidate classifications then
    // cost one rescale each.
    std::vector<double> s_cut, unit_cut;
    for (std::size_t i = 0; i < sweep.s_grid.size(); ++i)
        if (sweep.s_grid[i] >= a) {
            s_cut.push_back(sweep.s_grid[i]);
            // sweep.lambda1 is at sweep.d; undo to unit motility.
            unit_cut.push_back(sweep.lambda1[i] / std::pow(sweep.d, sweep.s_grid[i]));
        }
    if (s_cut.size() < 2)
        throw std::invalid_argument("monotone_regime_bounds: sweep grid has fewer than 2 points above a");

    MonotoneRegime out;
    out.d_upper = 1.0 / system.mu()[1];

    const int max_iter = 60;
    int used = 0;
    double hi = out.d_upper;
    double lo = 0.0;
    bool found = false;
    for (double d = out.d_upper / 2.0; used < max_iter; d /= 2.0) {
        ++used;
        if (classify_rescaled(s_cut, unit_cut, d) == CurveShape::Decreasing) {
            lo = d;
            found = true;
            break;
        }
        hi = d;
    }
    if (!found) {
        out.iterations = used;
        return out;
    }

    // Sharpen the boundary; keep the certified-Decreasing endpoint.
    while (used < max_iter) {
        ++used;
        const double mid = 0.5 * (lo + hi);
        if (classify_rescaled(s_cut, unit_cut, mid) == CurveShape::Decreasing)
            lo = mid;
        else
            hi = mid;
    }
    out.d_lower = lo;
    out.iterations = used;
    return out;
}

Lambda1Bounds lambda1_bounds(const GalerkinSystem& system, double d, double s,
                             double lambda1_at_s1) {
    if (!(d > 0.0) || !(s > 0.0) || !(s <= 1.0))
        throw std::invalid_argument("lambda1_bounds: need d > 0 and s in (0, 1]");

    const auto& nodes = system.nodes();
    KahanSum integral, l2;
    double sup = -std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        integral.add(nodes.weights[q] * nodes.m[q]);
        l2.add(nodes.weights[q] * nodes.m[q] * nodes.m[q]);
        sup = std::max(sup, nodes.m[q]);
    }
    const double abs_integral = std::abs(integral.sum);
    const double mu1 = system.mu()[1];

    Lambda1Bounds b;
    b.upper = std::pow(d * mu1, s - 1.0) * lambda1_at_s1;
    b.lower = std::pow(d, s) * std::pow(mu1, s) * abs_integral /
              (sup * abs_integral + l2.sum);
    return b;
}

} // namespace specfrac
