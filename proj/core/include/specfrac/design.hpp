#pragma once

#include "specfrac/pencil.hpp"
#include "specfrac/weight.hpp"

#include <memory>
#include <span>
#include <vector>

namespace specfrac {

// Two-valued environment class: m_bar on a set D, -m_under outside, with
// prescribed average m0. The average pins the measure of D exactly:
// |D| = |Omega| (m_under + m0) / (m_under + m_bar).
struct BangBangParams {
    double m_bar = 0.0;    // favorable value, > 0
    double m_under = 0.0;  // unfavorable magnitude, > 0
    double m0 = 0.0;       // prescribed average, in (-m_under, 0)

    double target_measure(double volume) const {
        return volume * (m_under + m0) / (m_under + m_bar);
    }
};

// One bathtub step: D = {psi^2 > t} with the threshold t chosen as the
// quadrature-mass quantile hitting target_measure to within one node
// (the crossing node joins D only if that lands the mass closer to the
// target). Near-ties of psi^2 within 1e-12 relative are broken by node
// order, so the selected set is stable under eigenvector perturbations
// far below solver accuracy. Returns the grid-sampled two-valued weight.
// Throws RearrangementDegenerate when psi is constant on the grid or the
// target measure is below grid resolution.
Weight rearrange_step(std::span<const double> psi_values,
                      std::shared_ptr<const QuadratureGrid> grid, const BangBangParams& params);

// Deterministic in-class starting point: a slab {x_0 < c} of the target
// measure, built by the same quantile machinery.
Weight slab_initial_weight(std::shared_ptr<const QuadratureGrid> grid,
                           const BangBangParams& params);

struct RearrangementTrace {
    std::vector<double> lambda1;  // best-so-far iterates, strictly decreasing
    std::vector<double> d_mass;   // quadrature measure of {m = m_bar} per recorded iterate
    bool converged = false;       // mask fixed point or eigenvalue change below tol
    int iterations = 0;           // rounds executed, recorded or not
    Weight final_weight;          // best iterate visited, sampled on grid
    std::vector<unsigned char> final_mask;  // 1 on D
    std::shared_ptr<const QuadratureGrid> grid;
};

// Alternates eigen-solve and rearrangement from the slab (or a caller
// initial weight, resampled onto the optimizer grid) until the mask is a
// fixed point, the eigenvalue change drops below tol relative, or
// max_iter rounds pass. On the exact class each rearrangement cannot
// increase lambda_1; node-mass quantization can still wobble a discrete
// step upward near a plateau, so the state keeps iterating through such
// rounds while the trace and the answer track only best-so-far iterates.
// A run that stops at max_iter without a fixed point reports
// converged = false; no global optimality is claimed either way.
RearrangementTrace optimize_weight(std::shared_ptr<const Basis> basis,
                                   const BangBangParams& params, double d, double s,
                                   double tol = 1e-8, int max_iter = 60,
                                   const Weight* initial = nullptr);

} // namespace specfrac
