#pragma once

#include "specfrac/design.hpp"
#include "specfrac/domain.hpp"
#include "specfrac/weight.hpp"

#include <string>
#include <vector>

namespace specfrac {

// Named example environments on the square (0,pi)^2 with Neumann walls:
// a favorable ball of radius 1 at the corner over a -1 background, with
// ball value 8 ("m1") or 1 ("m2"). Both have negative average and a
// positive part, and they straddle the persistence conditions in
// opposite ways, which is what makes them useful fixtures.
BoxDomain preset_domain();
Weight preset_weight(const std::string& name);

// Interior ball certificate matching the preset: m >= delta on the ball
// at (0.5, 0.5) of radius 0.29, and m >= -1 everywhere.
BallCertificate preset_certificate(const std::string& name);

// Two-valued class of the preset: same levels, same average.
BangBangParams preset_bang_bang(const std::string& name);

std::vector<std::string> preset_names();

} // namespace specfrac
