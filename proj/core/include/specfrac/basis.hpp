#pragma once

#include "specfrac/domain.hpp"
#include "specfrac/matrix.hpp"
#include "specfrac/quadrature.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace specfrac {

enum class ModeParity : unsigned char { Cos = 0, Sin = 1 };

// One tensor eigenfunction of the box Laplacian: per-dimension wave numbers
// plus, for periodic boxes, the per-dimension cos/sin choice (sin requires
// a nonzero wave number in that dimension).
struct ModeIndex {
    std::array<int, 3> k{0, 0, 0};
    std::array<ModeParity, 3> parity{ModeParity::Cos, ModeParity::Cos, ModeParity::Cos};
};

// Truncated L2-orthonormal eigenbasis on a box. Modes are sorted by
// (eigenvalue, lexicographic wave numbers, cos before sin); the constant
// mode sits at position 0 with eigenvalue exactly 0.
struct Basis {
    BoxDomain domain;
    int cutoff = 0;
    std::vector<ModeIndex> modes;
    std::vector<double> mu;     // Laplace eigenvalues, nondecreasing
    std::vector<double> norms;  // per-mode normalization constants

    std::size_t size() const { return modes.size(); }
};

// All modes with every per-dimension wave number <= cutoff.
// Neumann: (K+1)^N modes; periodic: (2K+1)^N counting cos/sin pairs.
Basis enumerate_modes(const BoxDomain& domain, int cutoff);

// The truncated basis is a full tensor product of one-dimensional factor
// families. Factors are addressed by slot: Neumann slot k holds cos_k,
// periodic slots are 0 -> constant, 2k-1 -> cos_k, 2k -> sin_k. These
// helpers let callers contract along one axis at a time.
int factor_count(const BoxDomain& domain, int cutoff);
int factor_slot(const BoxDomain& domain, const ModeIndex& mode, int axis);
void factor_values(const BoxDomain& domain, int axis, int cutoff, double x, double* out);

// Value of mode j at a point of the closed box. Points outside are rejected.
double eval_mode(const Basis& basis, std::size_t j, std::span<const double> x);

// Mode values tabulated on a quadrature grid: result(j, q) = phi_j(x_q).
Matrix eval_mode_grid(const Basis& basis, const QuadratureGrid& grid);

} // namespace specfrac
