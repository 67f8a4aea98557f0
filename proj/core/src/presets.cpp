#include "specfrac/presets.hpp"

#include "specfrac/errors.hpp"

#include <numbers>

namespace specfrac {

namespace {

constexpr double kPi = std::numbers::pi;

double ball_value(const std::string& name) {
    if (name == "m1") return 8.0;
    if (name == "m2") return 1.0;
    throw UnknownPreset("unknown preset weight '" + name + "'");
}

} // namespace

BoxDomain preset_domain() {
    BoxDomain dom;
    dom.dim = 2;
    dom.lengths = {kPi, kPi, 0.0};
    dom.boundary = BoundaryKind::Neumann;
    return dom;
}

Weight preset_weight(const std::string& name) {
    const double value = ball_value(name);
    Weight w(-1.0);
    const double center[2] = {0.0, 0.0};
    w.add_ball(center, 1.0, value);
    return w;
}

BallCertificate preset_certificate(const std::string& name) {
    BallCertificate cert;
    cert.center = {0.5, 0.5, 0.0};
    cert.radius = 0.29;  // the ball at (0.5,0.5) stays inside the favorable corner
    cert.delta = ball_value(name);
    cert.bound = 1.0;
    return cert;
}

BangBangParams preset_bang_bang(const std::string& name) {
    BangBangParams p;
    p.m_bar = ball_value(name);
    p.m_under = 1.0;
    // average of the preset: favorable quarter-disc of area pi/4 in a
    // square of area pi^2
    const double quarter = kPi / 4.0;
    const double volume = kPi * kPi;
    p.m0 = (p.m_bar * quarter - (volume - quarter)) / volume;
    return p;
}

std::vector<std::string> preset_names() { return {"m1", "m2"}; }

} // namespace specfrac
