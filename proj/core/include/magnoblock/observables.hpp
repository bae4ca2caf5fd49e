#pragma once

#include <optional>
#include <span>

#include "magnoblock/basis.hpp"

namespace magnoblock {

/// Floor applied to g2 before taking log10.
inline constexpr double kG2Floor = 1e-16;

struct PhotonStats {
    double n_photon = 0.0;     // <c^dagger c>
    std::optional<double> g2;  // empty when n_photon == 0
    std::optional<double> log10_g2;
};

/// Equal-time photon correlation on the truncated state:
/// g2 = 2|C200|^2 / (|C100|^2 + |C110|^2 + |C101|^2 + 2|C200|^2)^2.
PhotonStats g2_zero(const StateVector& state);

/// <m^dagger m> = |C010|^2 + |C110|^2 + |C011|^2 + 2|C020|^2.
double magnon_number(const StateVector& state);

double log10_floored(double g2);

/// Mean g2 over the samples with a defined value; empty if none.
std::optional<double> mean_g2(std::span<const StateVector> states);

} // namespace magnoblock
