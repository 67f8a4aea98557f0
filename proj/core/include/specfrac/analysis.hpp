#pragma once

#include "specfrac/pencil.hpp"

#include <optional>
#include <span>
#include <vector>

namespace specfrac {

// Shape of a sampled curve, by signs of first differences. Differences
// smaller than a relative tolerance are ties and collapse into the
// neighboring runs; an all-tie curve is Other.
enum class CurveShape { Increasing, Decreasing, SingleInteriorMax, HasInteriorMin, Other };

CurveShape classify_curve(std::span<const double> values, double rel_tol = 1e-9);

const char* to_string(CurveShape shape);

// Eigenvalue sweep over the fractional order. lambda1 holds
// lambda_1(d, s_i); the solve runs once at d = 1 and is rescaled by the
// exact law lambda_1(d, s) = d^s lambda_1(1, s). neg_lambda_minus1 holds
// -lambda_{-1}(1, s_i), always at unit motility (the spectral-gap
// condition is stated there); +infinity marks grid points where the
// truncated problem has no negative eigenvalue.
struct SSweep {
    double d = 1.0;
    std::vector<double> s_grid;
    std::vector<double> lambda1;
    std::vector<double> neg_lambda_minus1;
    double lambda1_at_0 = 0.0;  // s -> 0+ limit, independent of d
    CurveShape classification = CurveShape::Other;
};

// The hundred-point grid {i/100 : i = 1..100}.
std::vector<double> default_s_grid();

// Requires an increasing s_grid inside (0, 1]. Solver failures at any
// grid point propagate.
SSweep sweep_s(const GalerkinSystem& system, double d, std::span<const double> s_grid);

// Retargets a unit-motility sweep to another d through the exact scaling
// law, including reclassification; no eigenvalue solves. The input must
// have d = 1.
SSweep rescale_sweep(const SSweep& unit, double d);

// Critical motility d* = lambda_1(1, 0+) / lambda_1(1, 1): below it the
// infimum of s -> lambda_1(d, s) sits at s = 1, above it at s -> 0+.
struct CriticalMotility {
    double d_star = 0.0;
    double lambda1_unit_s1 = 0.0;  // lambda_1(1, 1)
    double lambda1_at_0 = 0.0;

    double inf_lambda1(double d) const {
        return d <= d_star ? d * lambda1_unit_s1 : lambda1_at_0;
    }
};

CriticalMotility critical_d(const GalerkinSystem& system);

// First Dirichlet eigenvalue of the unit ball and the unit sphere area,
// tabulated for dimensions 1..3.
struct DirichletBallConstants {
    int dim = 0;
    double lambda1_dir = 0.0;
    double sphere_area = 0.0;
};

DirichletBallConstants dirichlet_ball_constants(int dim);

struct ConditionTerm {
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
};

// The four sufficient conditions evaluated for a weight with a ball
// certificate (delta on a radius-rho ball, bounded below by -bound):
//   spectral_gap[i]  : -lambda_{-1}(1, s_i) > lambda_1(1, s_i)
//   reduced          : lambda_1(1, 1) < mu_1 / bound
//   fragmentation    : (delta / bound) rho^2 mu_1 > lambda1_dir
//   average_window   : -A < integral of m < 0, with the explicit
//                      amplitude A; absent when its denominator
//                      bound * lambda1_dir - mu_1 delta rho^2 is not
//                      positive (fragmentation then already holds)
struct ConditionReport {
    std::vector<double> s_grid;
    std::vector<bool> spectral_gap;
    bool spectral_gap_all = false;
    double spectral_gap_margin = 0.0;  // min over s of (-lambda_-1) - lambda_1
    double spectral_gap_worst_s = 0.0;

    ConditionTerm reduced;
    ConditionTerm fragmentation;
    ConditionTerm average_window;  // lhs: integral of m, rhs: -A (or 0 when A absent)
    std::optional<double> amplitude;

    DirichletBallConstants constants;
    double mu1 = 0.0;
};

// The certificate is sample-verified against the system's quadrature
// nodes first (CertificateRejected on failure). An already-computed unit
// sweep on the same grid can be passed to skip the eigenvalue solves.
ConditionReport check_conditions(const GalerkinSystem& system, const BallCertificate& certificate,
                                 std::span<const double> s_grid,
                                 const SSweep* unit_sweep = nullptr);

// Motility regime of the curve shape: above 1/mu_1 the curve is
// increasing; d_lower is an empirically bisected motility whose curve
// restricted to s in [a, 1] classifies Decreasing, or absent if 60
// halvings never reach one.
struct MonotoneRegime {
    double d_upper = 0.0;
    std::optional<double> d_lower;
    int iterations = 0;
};

MonotoneRegime monotone_regime_bounds(const GalerkinSystem& system, double a,
                                      const SSweep* unit_sweep = nullptr);

// Two-sided envelope for lambda_1(d, s) from the s = 1 value and the
// weight statistics:
//   upper: (d mu_1)^(s-1) * lambda_1(d, 1)
//   lower: d^s mu_1^s |int m| / (sup m * |int m| + int m^2)
struct Lambda1Bounds {
    double upper = 0.0;
    double lower = 0.0;
};

Lambda1Bounds lambda1_bounds(const GalerkinSystem& system, double d, double s,
                             double lambda1_at_s1);

} // namespace specfrac
