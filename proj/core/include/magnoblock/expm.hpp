#pragma once

#include "magnoblock/basis.hpp"
#include "magnoblock/generator.hpp"

namespace magnoblock {

/// Matrix exponential by scaling and squaring with a diagonal Pade core
/// (degree 3/5/7/9/13 chosen from the 1-norm, Higham 2005).
GeneratorMatrix expm(const GeneratorMatrix& a);

/// exp(-i M t) * initial. Exact propagator of the linear amplitude equations;
/// serves as the reference solution for the Radau integrator.
StateVector expm_propagate(const Generator& gen, const StateVector& initial, double t);

} // namespace magnoblock
