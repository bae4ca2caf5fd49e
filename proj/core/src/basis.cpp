#include "magnoblock/basis.hpp"

#include <string>

#include "magnoblock/errors.hpp"

namespace magnoblock {

BasisIndex BasisIndex::of(int n_photon, int n_magnon, int n_phonon) {
    for (std::size_t k = 0; k < kBasisSize; ++k) {
        if (kTable[k][0] == n_photon && kTable[k][1] == n_magnon && kTable[k][2] == n_phonon)
            return BasisIndex(k);
    }
    throw BasisError("occupation |" + std::to_string(n_photon) + std::to_string(n_magnon) +
                     std::to_string(n_phonon) + "> is outside the two-excitation basis");
}

BasisIndex BasisIndex::at(std::size_t flat) {
    if (flat >= kBasisSize) throw BasisError("flat basis index " + std::to_string(flat) + " out of range");
    return BasisIndex(flat);
}

StateVector StateVector::vacuum() { return basis_state(BasisIndex::of(0, 0, 0)); }

StateVector StateVector::basis_state(BasisIndex k) {
    StateVector s;
    s[k] = 1.0;
    return s;
}

} // namespace magnoblock
