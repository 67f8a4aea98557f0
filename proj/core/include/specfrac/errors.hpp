#pragma once

#include <stdexcept>
#include <string>

namespace specfrac {

// Base for every failure mode the solvers can signal. Argument misuse
// (wrong sizes, values outside documented ranges) throws std::invalid_argument
// or std::domain_error instead; these types mark states the math rules out.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Weight fails the sign conditions: nonnegative average or vanishing
// positive part. Eigenvalue solves refuse to run on such weights.
class NotInClassM : public Error {
public:
    using Error::Error;
};

// Truncated spectrum has no positive reciprocal eigenvalue.
class NoPositivePrincipalEigenvalue : public Error {
public:
    using Error::Error;
};

// Truncated spectrum has no negative reciprocal eigenvalue, so the
// negative principal eigenvalue does not exist at this cutoff.
class NoSecondEigenvalue : public Error {
public:
    using Error::Error;
};

// Rearrangement target is degenerate: the level-set mass cannot be met
// (constant profile, empty or full target measure).
class RearrangementDegenerate : public Error {
public:
    using Error::Error;
};

// Ball certificate failed sample verification or does not fit the domain.
class CertificateRejected : public Error {
public:
    using Error::Error;
};

// Named preset does not exist.
class UnknownPreset : public Error {
public:
    using Error::Error;
};

// Time integration diverged (mass grew past the blow-up guard);
// indicates the reaction step size is too large.
class SimulationBlowup : public Error {
public:
    using Error::Error;
};

} // namespace specfrac
