#include "magnoblock/params.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace magnoblock {

SystemParams SystemParams::defaults() {
    SystemParams p;
    p.omega_c = AngularFrequency::from_hz(10.0e9);
    p.omega_m = AngularFrequency::from_hz(10.0e9);
    p.omega_mech = AngularFrequency::from_hz(10.0e6);
    p.kappa_c = AngularFrequency::from_hz(1.0e6);
    p.kappa_m = AngularFrequency::from_hz(1.0e6);
    p.kappa_mech = AngularFrequency::from_hz(100.0);
    p.g_mc = AngularFrequency::from_hz(3.2e6);
    p.g_md = AngularFrequency::from_hz(3.2e6);
    p.omega_drive = p.omega_c;
    p.feedback_amp = AngularFrequency::from_hz(1.0e3);
    p.phi = Phase(std::numbers::pi);
    p.drive_E = AngularFrequency::from_hz(156.25);
    p.temperature = 10.0e-3;
    return p;
}

namespace {

// FNV-1a over the raw bit patterns.
struct Fnv1a {
    std::uint64_t h = 1469598103934665603ull;
    void add(double x) {
        auto bits = std::bit_cast<std::uint64_t>(x);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    }
};

} // namespace

std::uint64_t SystemParams::fingerprint() const {
    Fnv1a f;
    for (auto w : {omega_c, omega_m, omega_mech, kappa_c, kappa_m, kappa_mech, g_mc, g_md,
                   omega_drive, drive_E, feedback_amp})
        f.add(w.hz());
    f.add(phi.radians());
    f.add(temperature);
    return f.h;
}

Detunings compute_detunings(const SystemParams& p) {
    Detunings d;
    d.delta_c = {(p.omega_c - p.omega_drive).rad_per_s(), -0.5 * p.kappa_c.rad_per_s()};
    d.delta_m = {(p.omega_m - p.omega_drive).rad_per_s(), -0.5 * p.kappa_m.rad_per_s()};
    d.delta_mech = {p.omega_mech.rad_per_s(), -0.5 * p.kappa_mech.rad_per_s()};
    d.delta_r = d.delta_m.real();
    d.delta_i = -d.delta_m.imag();
    return d;
}

std::vector<Violation> validate_params(const SystemParams& p) {
    std::vector<Violation> out;
    auto rate = [&](const char* name, AngularFrequency w) {
        if (!w.is_finite())
            out.push_back({name, "must be finite"});
        else if (w.hz() < 0.0)
            out.push_back({name, "must be >= 0"});
    };
    rate("omega_c", p.omega_c);
    rate("omega_m", p.omega_m);
    rate("omega_mech", p.omega_mech);
    rate("kappa_c", p.kappa_c);
    rate("kappa_m", p.kappa_m);
    rate("kappa_mech", p.kappa_mech);
    rate("g_mc", p.g_mc);
    rate("g_md", p.g_md);
    rate("omega_drive", p.omega_drive);
    rate("drive_E", p.drive_E);
    rate("feedback_amp", p.feedback_amp);

    const double phi = p.phi.radians();
    if (!std::isfinite(phi))
        out.push_back({"phi", "must be finite"});
    else if (!(phi > -std::numbers::pi && phi <= std::numbers::pi))
        out.push_back({"phi", "must be reduced to (-pi, pi]"});

    if (!std::isfinite(p.temperature))
        out.push_back({"temperature", "must be finite"});
    else if (p.temperature < 0.0)
        out.push_back({"temperature", "must be >= 0"});
    return out;
}

std::string to_string(const Violation& v) { return v.field + ": " + v.rule; }

} // namespace magnoblock
