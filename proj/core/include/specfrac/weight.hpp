#pragma once

#include "specfrac/domain.hpp"
#include "specfrac/quadrature.hpp"

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace specfrac {

struct BallRegion {
    std::array<double, 3> center{0.0, 0.0, 0.0};
    double radius = 1.0;
};

struct BoxRegion {
    std::array<double, 3> lo{0.0, 0.0, 0.0};
    std::array<double, 3> hi{0.0, 0.0, 0.0};
};

struct Shape {
    std::variant<BallRegion, BoxRegion> region;
    double value = 0.0;
};

// Bounded weight on a box: a background value overridden by a list of
// shapes (later entries win), or a table of values sampled on a fixed
// quadrature grid. The sampled form is what the rearrangement optimizer
// produces; it bypasses the shape algebra entirely.
class Weight {
public:
    Weight() = default;
    explicit Weight(double background) : background_(background) {}

    static Weight constant(double value) { return Weight(value); }

    static Weight sampled(std::shared_ptr<const QuadratureGrid> grid, std::vector<double> values);

    Weight& add_ball(std::span<const double> center, double radius, double value);
    Weight& add_box(std::span<const double> lo, std::span<const double> hi, double value);

    double background() const { return background_; }
    const std::vector<Shape>& shapes() const { return shapes_; }

    bool is_sampled() const { return grid_ != nullptr; }
    const std::shared_ptr<const QuadratureGrid>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }

private:
    double background_ = 0.0;
    std::vector<Shape> shapes_;
    std::shared_ptr<const QuadratureGrid> grid_;
    std::vector<double> values_;
};

// Pointwise evaluation. Shape weights scan the shape list back to front
// (last match wins); sampled weights return the value at the nearest
// grid node, which is exact on the grid itself.
double eval_weight(const Weight& w, std::span<const double> x);

// Witness for the favorable-core weight class: m >= delta on the ball
// B_rho(center), m >= -bound everywhere, and the ball fits in the domain.
struct BallCertificate {
    std::array<double, 3> center{0.0, 0.0, 0.0};
    double radius = 0.0;
    double delta = 0.0;
    double bound = 0.0;  // uniform lower bound: m >= -bound
};

struct WeightReport {
    double integral = 0.0;       // quadrature integral of m
    double average = 0.0;        // m0 = integral / |Omega|
    double sup = 0.0;            // max over quadrature nodes
    double inf = 0.0;            // min over quadrature nodes
    double positive_mass = 0.0;  // integral of max(m, 0)
    double l2_sq = 0.0;          // integral of m^2
    bool in_class_M = false;     // integral < 0 and positive part present
    std::optional<BallCertificate> certificate;
};

// Quadrature nodes with the weight evaluated at each one. For shape
// weights the node layout resolves every shape boundary: box faces are
// snapped to panel breakpoints and panels straddling a ball boundary are
// subdivided, then split along quadrature lines at the exact crossing.
struct WeightedNodes {
    int dim = 1;
    std::vector<double> coords;  // size() * dim, interleaved
    std::vector<double> weights;
    std::vector<double> m;
    bool boundary_resolved = false;

    std::size_t size() const { return weights.size(); }
    std::span<const double> point(std::size_t q) const {
        return {coords.data() + q * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
};

WeightedNodes build_weighted_nodes(const Weight& w, const BoxDomain& domain,
                                   const QuadratureSpec& spec);

// Integral, bounds, positive-part mass and the sign-class flag. The flag
// uses relative tolerances: integral < -1e-10 * |Omega| * sup|m| and
// positive mass > 1e-10 * |Omega| * sup|m|. A certificate, when passed,
// is sample-verified (CertificateRejected on failure) and embedded.
WeightReport analyze_weight(const Weight& w, const BoxDomain& domain, const QuadratureSpec& spec,
                            const BallCertificate* certificate = nullptr);

// Sample verification of a certificate against precomputed nodes.
// Throws CertificateRejected when the ball leaves the domain or a node
// violates one of the two bounds.
void verify_certificate(const WeightedNodes& nodes, const BoxDomain& domain,
                        const BallCertificate& certificate);

} // namespace specfrac
