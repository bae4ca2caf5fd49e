#pragma once

#include <cstdint>
#include <iosfwd>

#include <Eigen/Core>

#include "magnoblock/basis.hpp"
#include "magnoblock/params.hpp"

namespace magnoblock {

using GeneratorMatrix = Eigen::Matrix<cplx, 10, 10>;

/// Effective Hamiltonian over hbar on the truncated basis: dC/dt = -i M C.
///
/// Rows and columns follow BasisIndex::flat. Decay enters only through the
/// imaginary parts of the diagonal.
struct Generator {
    GeneratorMatrix entries = GeneratorMatrix::Zero();
    std::uint64_t params_fingerprint = 0;

    cplx operator()(BasisIndex row, BasisIndex col) const {
        return entries(static_cast<Eigen::Index>(row.flat()), static_cast<Eigen::Index>(col.flat()));
    }
};

Generator build_generator(const SystemParams& params);

/// Diagonal decay removed (diagonal replaced by its real part). Hermitian.
Generator lossless_part(const Generator& gen);

/// CSV dump with header `row,col,re,im`, one line per entry in row-major order.
void write_generator_csv(std::ostream& os, const Generator& gen);

} // namespace magnoblock
