#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "magnoblock/units.hpp"

namespace magnoblock {

using cplx = std::complex<double>;

/// Physical parameters of the driven cavity-magnon-phonon system.
///
/// All rates are angular frequencies with hbar = 1. `omega_mech` is the
/// mechanical mode frequency and `kappa_mech` its damping.
struct SystemParams {
    AngularFrequency omega_c;      // cavity
    AngularFrequency omega_m;      // magnon (Kittel mode)
    AngularFrequency omega_mech;   // phonon
    AngularFrequency kappa_c;
    AngularFrequency kappa_m;
    AngularFrequency kappa_mech;
    AngularFrequency g_mc;         // photon-magnon beam splitter
    AngularFrequency g_md;         // magnon-phonon radiation pressure
    AngularFrequency omega_drive;  // pump frequency, shared by magnon drive and feedback
    AngularFrequency drive_E;      // magnon drive strength
    AngularFrequency feedback_amp; // Omega*mu, never split
    Phase phi;                     // feedback phase
    double temperature = 0.0;      // kelvin; carried through, not used by the model

    /// Reference device values plus the feedback defaults used throughout:
    /// Omega*mu = 2pi*1 kHz, omega_drive = omega_c, phi = pi and the matching
    /// optimal drive E = 2pi*156.25 Hz.
    static SystemParams defaults();

    std::uint64_t fingerprint() const;
};

/// Complex detunings of the non-Hermitian rotating-frame Hamiltonian.
struct Detunings {
    cplx delta_c;
    cplx delta_m;
    cplx delta_mech;
    double delta_r = 0.0; // Re delta_m
    double delta_i = 0.0; // -Im delta_m, >= 0 for physical kappa_m
};

Detunings compute_detunings(const SystemParams& params);

struct Violation {
    std::string field;
    std::string rule;
};

/// Empty iff every invariant of SystemParams holds.
std::vector<Violation> validate_params(const SystemParams& params);

std::string to_string(const Violation& v);

} // namespace magnoblock
