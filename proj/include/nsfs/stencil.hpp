#pragma once

#include "nsfs/field.hpp"

namespace nsfs {

// Finite-difference operators on the cell-centred grid. Interior points use
// central stencils of the requested order (2 or 4); the two (order 4) or one
// (order 2) points nearest each box face use one-sided stencils of the same
// order. All operators require N >= 8.

ScalarField derivative(const ScalarField& s, int axis, int order, Exec exec = Exec::parallel);
ScalarField second_derivative(const ScalarField& s, int axis, int order, Exec exec = Exec::parallel);

/// Entry (i, k) is d_k v_i.
GradientField gradient(const VectorField& v, int order, Exec exec = Exec::parallel);
VectorField gradient(const ScalarField& s, int order, Exec exec = Exec::parallel);
ScalarField divergence(const VectorField& v, int order, Exec exec = Exec::parallel);
ScalarField laplacian(const ScalarField& s, int order, Exec exec = Exec::parallel);
VectorField laplacian(const VectorField& v, int order, Exec exec = Exec::parallel);

namespace reference {

// Line-by-line serial implementations kept as the test oracle for the
// OpenMP kernels above.
ScalarField derivative(const ScalarField& s, int axis, int order);
ScalarField second_derivative(const ScalarField& s, int axis, int order);

}  // namespace reference

}  // namespace nsfs
