#include "specfrac/dynamics.hpp"

#include "specfrac/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace specfrac {

namespace {

// phi_1(z) = (e^z - 1)/z, the first exponential-integrator filter
double phi1(double z) { return z == 0.0 ? 1.0 : std::expm1(z) / z; }

std::vector<double> weight_on_grid(const GalerkinSystem& system, const QuadratureGrid& grid) {
    std::vector<double> m(grid.size());
    const int dim = grid.domain().dim;
    for (std::size_t q = 0; q < grid.size(); ++q) {
        const auto pt = grid.node(q);
        m[q] = eval_weight(system.weight(), std::span<const double>(pt.data(), dim));
    }
    return m;
}

std::vector<double> fractional_symbol(const Basis& basis, double d, double s) {
    std::vector<double> sym(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const double dm = d * basis.mu[k];
        sym[k] = (s == 1.0) ? dm : std::pow(dm, s);
    }
    return sym;
}

// u_hat = P u: weighted inner products against every mode
void analyze(const Matrix& phi, std::span<const double> w, std::span<const double> u,
             std::vector<double>& uhat) {
    const std::size_t n = phi.rows(), qn = phi.cols();
    for (std::size_t k = 0; k < n; ++k) {
        const double* row = phi.row(k);
        double acc = 0.0;
        for (std::size_t q = 0; q < qn; ++q) acc += w[q] * row[q] * u[q];
        uhat[k] = acc;
    }
}

void synthesize(const Matrix& phi, std::span<const double> uhat, std::vector<double>& u) {
    const std::size_t n = phi.rows(), qn = phi.cols();
    std::fill(u.begin(), u.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double c = uhat[k];
        if (c == 0.0) continue;
        const double* row = phi.row(k);
        for (std::size_t q = 0; q < qn; ++q) u[q] += c * row[q];
    }
}

} // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Survived: return "survived";
        case Verdict::Extinct: return "extinct";
        default: return "undecided";
    }
}

QuadratureGrid simulation_grid(const GalerkinSystem& system) {
    return QuadratureGrid(system.basis().domain, recommended_quadrature(system.basis()));
}

Trajectory simulate(const GalerkinSystem& system, const SimConfig& config) {
    if (!(config.dt > 0.0) || !std::isfinite(config.dt))
        throw std::invalid_argument("time step must be positive");
    if (!(config.t_end >= config.dt))
        throw std::invalid_argument("final time must cover at least one step");
    if (config.sample_every < 1)
        throw std::invalid_argument("sample interval must be at least one step");
    if (!(config.d > 0.0) || !std::isfinite(config.d))
        throw std::invalid_argument("motility must be positive");
    if (!(config.s > 0.0) || !(config.s <= 1.0))
        throw std::invalid_argument("order must lie in (0, 1]");
    if (!(config.survival_floor_rel > 0.0))
        throw std::invalid_argument("survival floor must be positive");

    const QuadratureGrid grid = simulation_grid(system);
    if (config.initial.size() != grid.size())
        throw std::invalid_argument("initial state does not match the simulation grid");
    for (double v : config.initial)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("initial state must be nonnegative and finite");

    const Basis& basis = system.basis();
    const Matrix phi = eval_mode_grid(basis, grid);
    const std::vector<double> w = grid.all_weights();
    const std::vector<double> m = weight_on_grid(system, grid);
    const std::vector<double> sym = fractional_symbol(basis, config.d, config.s);

    const std::size_t n = basis.size(), qn = grid.size();
    std::vector<double> decay(n), filter(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double z = -sym[k] * config.dt;
        decay[k] = std::exp(z);
        filter[k] = config.dt * phi1(z);
    }

    std::vector<double> u = config.initial;
    std::vector<double> uhat(n), nhat(n), react(qn);

    auto mass_of = [&](const std::vector<double>& v) {
        double acc = 0.0;
        for (std::size_t q = 0; q < qn; ++q) acc += w[q] * v[q];
        return acc;
    };

    const double mass0 = mass_of(u);
    if (!(mass0 > 0.0)) throw std::invalid_argument("initial state must carry positive mass");
    const double floor = config.survival_floor_rel * mass0;
    const double blowup = 1e12 * mass0;

    const long nsteps = std::lround(std::ceil(config.t_end / config.dt - 1e-9));

    Trajectory out;
    out.times.push_back(0.0);
    out.masses.push_back(mass0);
    out.clipped_mass.push_back(0.0);

    double clipped_window = 0.0;
    for (long step = 1; step <= nsteps; ++step) {
        for (std::size_t q = 0; q < qn; ++q) {
            const double uv = u[q];
            react[q] = config.linear_only ? m[q] * uv : uv * (m[q] - uv);
        }
        analyze(phi, w, u, uhat);
        analyze(phi, w, react, nhat);
        for (std::size_t k = 0; k < n; ++k) uhat[k] = decay[k] * uhat[k] + filter[k] * nhat[k];
        synthesize(phi, uhat, u);

        for (std::size_t q = 0; q < qn; ++q) {
            if (u[q] < 0.0) {
                clipped_window -= w[q] * u[q];
                u[q] = 0.0;
            }
        }

        const double mass = mass_of(u);
        if (!std::isfinite(mass) || mass > blowup)
            throw SimulationBlowup("population mass left the trusted range");

        if (step % config.sample_every == 0 || step == nsteps) {
            out.times.push_back(static_cast<double>(step) * config.dt);
            out.masses.push_back(mass);
            out.clipped_mass.push_back(clipped_window);
            clipped_window = 0.0;
        }
    }

    out.final_state = u;

    // verdict: extinct below the floor, survived if the trailing tenth of
    // the run is flat in mass, otherwise undecided
    const double t_final = out.times.back();
    const double t_tail = 0.9 * t_final - 1e-12 * t_final;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < out.times.size(); ++i) {
        if (out.times[i] < t_tail) continue;
        lo = std::min(lo, out.masses[i]);
        hi = std::max(hi, out.masses[i]);
        sum += out.masses[i];
        ++count;
    }
    const double mean = count ? sum / static_cast<double>(count) : 0.0;
    out.drift = mean > 0.0 ? (hi - lo) / mean : 0.0;

    if (out.masses.back() < floor)
        out.verdict = Verdict::Extinct;
    else if (out.drift < 1e-4)
        out.verdict = Verdict::Survived;
    else
        out.verdict = Verdict::Undecided;
    return out;
}

double steady_state_residual(std::span<const double> state, const GalerkinSystem& system,
                             double d, double s) {
    if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("motility must be positive");
    if (!(s > 0.0) || !(s <= 1.0)) throw std::invalid_argument("order must lie in (0, 1]");

    const QuadratureGrid grid = simulation_grid(system);
    if (state.size() != grid.size())
        throw std::invalid_argument("state does not match the simulation grid");

    const Basis& basis = system.basis();
    const Matrix phi = eval_mode_grid(basis, grid);
    const std::vector<double> w = grid.all_weights();
    const std::vector<double> m = weight_on_grid(system, grid);
    const std::vector<double> sym = fractional_symbol(basis, d, s);

    const std::size_t n = basis.size(), qn = grid.size();
    std::vector<double> uhat(n), ghat(n), lhat(n), growth(qn), linear(qn);
    for (std::size_t q = 0; q < qn; ++q) {
        growth[q] = state[q] * (m[q] - state[q]);
        linear[q] = m[q] * state[q];
    }
    analyze(phi, w, state, uhat);
    analyze(phi, w, growth, ghat);
    analyze(phi, w, linear, lhat);

    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = sym[k] * uhat[k] - ghat[k];
        num += r * r;
        den += lhat[k] * lhat[k];
    }
    num = std::sqrt(num);
    den = std::sqrt(den);
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

} // namespace specfrac
