#pragma once

#include "specfrac/matrix.hpp"

#include <vector>

namespace specfrac {

// Full spectral decomposition of a real symmetric matrix.
// values are sorted descending; vectors.col(i) pairs with values[i]
// and the columns are orthonormal.
struct SymmetricEigen {
    std::vector<double> values;
    Matrix vectors;
};

// Householder tridiagonalization followed by implicit-shift QL.
// The input must be square and symmetric to 1e-12 relative to its
// largest entry; anything else is rejected.
SymmetricEigen eigendecompose_symmetric(const Matrix& a);

// Eigenvalues only (descending). Same reduction without accumulating
// transformations; the fast path for spectral sweeps.
std::vector<double> eigenvalues_symmetric(const Matrix& a);

} // namespace specfrac
