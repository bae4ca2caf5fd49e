#pragma once

#include <array>
#include <complex>
#include <cstddef>

#include <Eigen/Core>

namespace magnoblock {

using cplx = std::complex<double>;

inline constexpr std::size_t kBasisSize = 10;

/// One of the ten admissible occupations |n_photon n_magnon n_phonon>.
///
/// Flat order: 000, 100, 010, 001, 110, 101, 011, 200, 020, 002.
class BasisIndex {
public:
    /// Throws BasisError for triples outside the truncation.
    static BasisIndex of(int n_photon, int n_magnon, int n_phonon);
    static BasisIndex at(std::size_t flat);

    constexpr int n_photon() const { return kTable[flat_][0]; }
    constexpr int n_magnon() const { return kTable[flat_][1]; }
    constexpr int n_phonon() const { return kTable[flat_][2]; }
    constexpr std::size_t flat() const { return flat_; }

    friend constexpr bool operator==(BasisIndex, BasisIndex) = default;

    static constexpr std::array<std::array<int, 3>, kBasisSize> kTable{{
        {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0},
        {1, 0, 1}, {0, 1, 1}, {2, 0, 0}, {0, 2, 0}, {0, 0, 2},
    }};

private:
    constexpr explicit BasisIndex(std::size_t flat) : flat_(flat) {}
    std::size_t flat_;
};

namespace idx {
inline constexpr std::size_t k000 = 0, k100 = 1, k010 = 2, k001 = 3, k110 = 4, k101 = 5,
                             k011 = 6, k200 = 7, k020 = 8, k002 = 9;
}

using AmplitudeVector = Eigen::Matrix<cplx, 10, 1>;

/// Amplitudes C_ijk of the truncated wavefunction.
class StateVector {
public:
    StateVector() : c_(AmplitudeVector::Zero()) {}
    explicit StateVector(const AmplitudeVector& c) : c_(c) {}

    /// C000 = 1, everything else zero.
    static StateVector vacuum();
    static StateVector basis_state(BasisIndex k);

    cplx& operator[](BasisIndex k) { return c_(static_cast<Eigen::Index>(k.flat())); }
    cplx operator[](BasisIndex k) const { return c_(static_cast<Eigen::Index>(k.flat())); }
    cplx& operator[](std::size_t flat) { return c_(static_cast<Eigen::Index>(flat)); }
    cplx operator[](std::size_t flat) const { return c_(static_cast<Eigen::Index>(flat)); }

    const AmplitudeVector& amplitudes() const { return c_; }
    AmplitudeVector& amplitudes() { return c_; }

    double norm2() const { return c_.squaredNorm(); }
    bool is_finite() const { return c_.allFinite(); }

    /// max_k |a_k - b_k|
    friend double max_abs_diff(const StateVector& a, const StateVector& b) {
        return (a.c_ - b.c_).cwiseAbs().maxCoeff();
    }

private:
    AmplitudeVector c_;
};

} // namespace magnoblock
