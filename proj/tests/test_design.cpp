#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "specfrac/design.hpp"
#include "specfrac/errors.hpp"
#include "specfrac/pencil.hpp"
#include "specfrac/presets.hpp"

using namespace specfrac;

namespace {
constexpr double kPi = std::numbers::pi;

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

std::shared_ptr<const QuadratureGrid> square_grid(int panels, int order) {
    return std::make_shared<const QuadratureGrid>(preset_domain(), QuadratureSpec{panels, order});
}

double mask_measure(const std::vector<unsigned char>& mask, const QuadratureGrid& grid) {
    double mass = 0.0;
    for (std::size_t q = 0; q < mask.size(); ++q)
        if (mask[q]) mass += grid.weight(q);
    return mass;
}

std::vector<unsigned char> favorable_mask(const Weight& w, double m_bar) {
    REQUIRE(w.is_sampled());
    std::vector<unsigned char> mask(w.values().size(), 0);
    for (std::size_t q = 0; q < mask.size(); ++q)
        if (w.values()[q] == m_bar) mask[q] = 1;
    return mask;
}
}  // namespace

TEST_CASE("prescribed average pins the favorable measure") {
    for (const char* name : {"m1", "m2"}) {
        const auto p = preset_bang_bang(name);
        CHECK(p.m_bar > 0.0);
        CHECK(p.m_under == 1.0);
        CHECK(p.m0 > -p.m_under);
        CHECK(p.m0 < 0.0);
        // Both presets carve out a quarter-disk's worth of favorable area.
        CHECK(std::abs(p.target_measure(kPi * kPi) - kPi / 4.0) < 1e-14);
    }
    CHECK(preset_bang_bang("m1").m_bar == 8.0);
    CHECK(preset_bang_bang("m2").m_bar == 1.0);
    CHECK_THROWS_AS(preset_bang_bang("nope"), UnknownPreset);
}

TEST_CASE("slab start is a two-valued in-class weight of the target measure") {
    auto grid = square_grid(16, 8);
    const auto params = preset_bang_bang("m1");
    const Weight slab = slab_initial_weight(grid, params);

    REQUIRE(slab.is_sampled());
    for (double v : slab.values()) CHECK((v == params.m_bar || v == -params.m_under));

    double max_node = 0.0;
    for (std::size_t q = 0; q < grid->size(); ++q) max_node = std::max(max_node, grid->weight(q));
    const auto mask = favorable_mask(slab, params.m_bar);
    CHECK(std::abs(mask_measure(mask, *grid) - kPi / 4.0) <= max_node);

    // The slab lives at small x_0: every selected node sits left of every
    // unselected one, up to the node spacing.
    double in_max = 0.0, out_min = kPi;
    for (std::size_t q = 0; q < mask.size(); ++q) {
        if (mask[q]) in_max = std::max(in_max, grid->node(q)[0]);
        else out_min = std::min(out_min, grid->node(q)[0]);
    }
    CHECK(in_max < out_min + 0.06);
}

TEST_CASE("radial scores rearrange into the corner quarter-disc") {
    auto grid = square_grid(16, 8);
    const auto params = preset_bang_bang("m1");

    std::vector<double> psi(grid->size());
    std::vector<double> radius(grid->size());
    for (std::size_t q = 0; q < grid->size(); ++q) {
        const auto x = grid->node(q);
        radius[q] = std::sqrt(x[0] * x[0] + x[1] * x[1]);
        psi[q] = std::exp(-radius[q] * radius[q]);
    }
    const Weight w = rearrange_step(psi, grid, params);
    const auto mask = favorable_mask(w, params.m_bar);

    // Superlevel sets of a radial score are discs; the target measure
    // pi/4 makes the radius exactly 1. Node spacing blurs the boundary.
    double in_max = 0.0, out_min = 10.0;
    for (std::size_t q = 0; q < mask.size(); ++q) {
        if (mask[q]) in_max = std::max(in_max, radius[q]);
        else out_min = std::min(out_min, radius[q]);
    }
    CHECK(in_max < out_min + 0.06);
    CHECK(std::abs(in_max - 1.0) < 0.06);

    double max_node = 0.0;
    for (std::size_t q = 0; q < grid->size(); ++q) max_node = std::max(max_node, grid->weight(q));
    CHECK(std::abs(mask_measure(mask, *grid) - kPi / 4.0) <= max_node);
}

TEST_CASE("rearrangement fills by score and lands near the target mass") {
    auto grid = square_grid(6, 8);
    const auto params = preset_bang_bang("m1");
    const double target = params.target_measure(kPi * kPi);

    std::mt19937 rng(20260817u);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> psi(grid->size());
    for (double& v : psi) v = uni(rng);

    const Weight w = rearrange_step(psi, grid, params);
    const auto mask = favorable_mask(w, params.m_bar);

    // Selected scores dominate unselected ones, up to the documented
    // 1e-9-relative tie bucket.
    double span = 0.0;
    for (double v : psi) span = std::max(span, v * v);
    double in_min = 1e300, out_max = -1e300;
    for (std::size_t q = 0; q < mask.size(); ++q) {
        const double sq = psi[q] * psi[q];
        if (mask[q]) in_min = std::min(in_min, sq);
        else out_max = std::max(out_max, sq);
    }
    CHECK(in_min >= out_max - 2e-9 * span);

    double max_node = 0.0;
    for (std::size_t q = 0; q < grid->size(); ++q) max_node = std::max(max_node, grid->weight(q));
    const double mass = mask_measure(mask, *grid);
    CHECK(std::abs(mass - target) <= max_node);

    // Bathtub optimality: no same-mass mask scores a higher weighted sum.
    auto objective = [&](const std::vector<unsigned char>& m) {
        double acc = 0.0;
        for (std::size_t q = 0; q < m.size(); ++q)
            if (m[q]) acc += grid->weight(q) * psi[q] * psi[q];
        return acc;
    };
    const double best = objective(mask);
    std::vector<std::uint32_t> order(grid->size());
    std::iota(order.begin(), order.end(), 0u);
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<unsigned char> alt(grid->size(), 0);
        double acc = 0.0;
        for (std::uint32_t q : order) {
            if (acc + grid->weight(q) > mass) continue;
            alt[q] = 1;
            acc += grid->weight(q);
        }
        CHECK(objective(alt) <= best + 1e-12 * best);
    }
}

TEST_CASE("rearrangement is deterministic") {
    auto grid = square_grid(6, 8);
    const auto params = preset_bang_bang("m2");
    std::vector<double> psi(grid->size());
    for (std::size_t q = 0; q < psi.size(); ++q)
        psi[q] = std::sin(0.37 * static_cast<double>(q));

    const Weight a = rearrange_step(psi, grid, params);
    const Weight b = rearrange_step(psi, grid, params);
    REQUIRE(a.values().size() == b.values().size());
    for (std::size_t q = 0; q < a.values().size(); ++q) CHECK(a.values()[q] == b.values()[q]);
}

TEST_CASE("degenerate scores and unresolvable targets are rejected") {
    auto grid = square_grid(4, 8);
    const auto params = preset_bang_bang("m1");

    std::vector<double> flat(grid->size(), 0.7);
    CHECK_THROWS_AS(rearrange_step(flat, grid, params), RearrangementDegenerate);

    // Average so close to -m_under that D falls below grid resolution.
    BangBangParams tiny = params;
    tiny.m0 = -tiny.m_under + 1e-12;
    std::vector<double> psi(grid->size());
    for (std::size_t q = 0; q < psi.size(); ++q) psi[q] = static_cast<double>(q);
    CHECK_THROWS_AS(rearrange_step(psi, grid, tiny), RearrangementDegenerate);
    CHECK_THROWS_AS(slab_initial_weight(grid, tiny), RearrangementDegenerate);

    BangBangParams bad = params;
    bad.m0 = 0.1;  // must be negative
    CHECK_THROWS_AS(rearrange_step(psi, grid, bad), std::invalid_argument);
    bad.m0 = -2.0;  // below -m_under
    CHECK_THROWS_AS(rearrange_step(psi, grid, bad), std::invalid_argument);
    bad = params;
    bad.m_bar = 0.0;
    CHECK_THROWS_AS(slab_initial_weight(grid, bad), std::invalid_argument);
    bad = params;
    bad.m_under = -1.0;
    CHECK_THROWS_AS(slab_initial_weight(grid, bad), std::invalid_argument);

    std::vector<double> short_psi(grid->size() - 1, 1.0);
    CHECK_THROWS_AS(rearrange_step(short_psi, grid, params), std::invalid_argument);
    CHECK_THROWS_AS(rearrange_step(psi, nullptr, params), std::invalid_argument);
}

TEST_CASE("optimizer descends to the frozen two-valued design") {
    auto basis = std::make_shared<Basis>(enumerate_modes(preset_domain(), 16));
    const auto params = preset_bang_bang("m1");
    const auto trace = optimize_weight(basis, params, 1.0, 1.0);

    CHECK(trace.converged);
    REQUIRE(!trace.lambda1.empty());
    for (std::size_t i = 0; i + 1 < trace.lambda1.size(); ++i)
        CHECK(trace.lambda1[i + 1] < trace.lambda1[i]);

    CHECK(rel_diff(trace.lambda1.front(), 0.158602478281) < 1e-11);
    CHECK(rel_diff(trace.lambda1.back(), 0.081174192766855224) < 1e-12);

    // The optimized class beats the quarter-disk layout of the same mass.
    const auto sys =
        testsupport::assemble_system(preset_weight("m1"), preset_domain(), 16);
    CHECK(trace.lambda1.back() <
          solve_lambda1(build_reduced_pencil(sys, 1.0, 1.0)));

    // Mass constraint held to the node quantization of the design grid.
    REQUIRE(!trace.d_mass.empty());
    CHECK(std::abs(trace.d_mass.back() - kPi / 4.0) / (kPi / 4.0) < 1e-3);
    REQUIRE(trace.grid != nullptr);
    CHECK(trace.grid->points_per_dim() == 288);

    // The reported weight matches the reported mask.
    const auto mask = favorable_mask(trace.final_weight, params.m_bar);
    REQUIRE(mask.size() == trace.final_mask.size());
    for (std::size_t q = 0; q < mask.size(); ++q) CHECK(mask[q] == trace.final_mask[q]);
    CHECK(std::abs(mask_measure(mask, *trace.grid) - trace.d_mass.back()) < 1e-12);

    // Restarting from the answer does not move it.
    const auto again = optimize_weight(basis, params, 1.0, 1.0, 1e-8, 3, &trace.final_weight);
    CHECK(rel_diff(again.lambda1.back(), trace.lambda1.back()) < 1e-10);
}

TEST_CASE("rearranged set does not depend on the motility") {
    auto basis = std::make_shared<Basis>(enumerate_modes(preset_domain(), 12));
    const auto params = preset_bang_bang("m1");

    const auto slow = optimize_weight(basis, params, 0.3, 0.7);
    const auto fast = optimize_weight(basis, params, 3.0, 0.7);
    CHECK(slow.converged);
    CHECK(fast.converged);
    // lambda scales but the optimal set is motility-free: same masks.
    REQUIRE(slow.final_mask.size() == fast.final_mask.size());
    for (std::size_t q = 0; q < slow.final_mask.size(); ++q)
        CHECK(slow.final_mask[q] == fast.final_mask[q]);

    // And the whole run is reproducible, trace and all.
    const auto rerun = optimize_weight(basis, params, 0.3, 0.7);
    REQUIRE(rerun.lambda1.size() == slow.lambda1.size());
    for (std::size_t i = 0; i < rerun.lambda1.size(); ++i)
        CHECK(rerun.lambda1[i] == slow.lambda1[i]);
    CHECK(rerun.iterations == slow.iterations);
}

TEST_CASE("optimizer validates arguments") {
    auto basis = std::make_shared<Basis>(enumerate_modes(preset_domain(), 4));
    const auto params = preset_bang_bang("m1");
    CHECK_THROWS_AS(optimize_weight(nullptr, params, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(optimize_weight(basis, params, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(optimize_weight(basis, params, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(optimize_weight(basis, params, 1.0, 1.1), std::invalid_argument);
    CHECK_THROWS_AS(optimize_weight(basis, params, 1.0, 1.0, 1e-8, 0), std::invalid_argument);
    CHECK_THROWS_AS(optimize_weight(basis, params, 1.0, 1.0, -1.0), std::invalid_argument);
}
