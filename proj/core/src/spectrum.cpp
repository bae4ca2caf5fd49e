#include "magnoblock/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace magnoblock {

StiffnessReport stiffness_ratio(const Generator& gen) {
    const GeneratorMatrix j = gen.entries * cplx{0.0, -1.0};
    Eigen::ComplexEigenSolver<GeneratorMatrix> solver(j, /*computeEigenvectors=*/false);

    StiffnessReport rep;
    const auto& ev = solver.eigenvalues();
    rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());

    // Rounding in the eigensolve leaves |Re| ~ eps * ||M|| on a Hermitian M.
    const double zero_tol = 1e3 * std::numeric_limits<double>::epsilon() *
                            std::max(1.0, j.cwiseAbs().rowwise().sum().maxCoeff());
    double fastest = 0.0;
    double slowest = std::numeric_limits<double>::infinity();
    for (const cplx& l : rep.eigenvalues) {
        const double d = std::abs(l.real());
        if (d <= zero_tol) continue;
        fastest = std::max(fastest, d);
        slowest = std::min(slowest, d);
    }
    if (fastest > 0.0) {
        rep.fastest_decay = fastest;
        rep.slowest_decay = slowest;
        rep.ratio = fastest / slowest;
    }
    return rep;
}

} // namespace magnoblock
