#pragma once

#include "specfrac/assembly.hpp"
#include "specfrac/quadrature.hpp"

#include <span>
#include <string>
#include <vector>

namespace specfrac {

enum class Verdict { Survived, Extinct, Undecided };

std::string to_string(Verdict v);

struct SimConfig {
    double d = 1.0;
    double s = 1.0;
    double dt = 0.01;
    double t_end = 10.0;
    std::vector<double> initial;  // values on simulation_grid(system), all >= 0
    double survival_floor_rel = 1e-6;
    int sample_every = 1;
    bool linear_only = false;  // drop the -u^2 saturation term
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> masses;        // integral of u at each sample
    std::vector<double> clipped_mass;  // negativity removed since the previous sample
    std::vector<double> final_state;   // grid values at t_end
    Verdict verdict = Verdict::Undecided;
    double drift = 0.0;  // relative mass variation over the trailing tenth of the run
};

// Tensor grid used for the time stepper and residual checks: the
// recommended quadrature for the system's basis cutoff.
QuadratureGrid simulation_grid(const GalerkinSystem& system);

// First-order exponential integrator for u_t + (d L)^s u = u (m - u) in
// coefficient space: the stiff diffusion factor is integrated exactly and
// the reaction term enters through the phi_1 filter, so steady states of
// the truncated system are fixed points of the map regardless of dt.
// State values are clipped at zero after every step; the removed mass is
// reported, never silently dropped. Throws SimulationBlowup if the mass
// exceeds 1e12 times its initial value or turns non-finite.
Trajectory simulate(const GalerkinSystem& system, const SimConfig& config);

// Relative norm of the truncated steady-state equation at the given grid
// state: ||(d mu)^s u_hat - P(m u - u^2)|| / ||P(m u)||. Zero state gives
// zero by convention.
double steady_state_residual(std::span<const double> state, const GalerkinSystem& system,
                             double d, double s);

} // namespace specfrac
