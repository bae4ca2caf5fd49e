#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "magnoblock/params.hpp"
#include "magnoblock/radau.hpp"

namespace magnoblock {

/// Sweep settings shared by the figure commands.
struct SweepSettings {
    /// "model": [omega_c - 2 omega_mech, omega_c + 2 omega_mech];
    /// "results": [omega_c - 2 omega_mech, omega_c + 3 omega_mech].
    std::string omega0_range = "model";
    std::size_t omega0_points = 201;
    double omega_m_ratio_min = 0.5;
    double omega_m_ratio_max = 3.0;
    std::size_t omega_m_ratio_points = 101;
    Phase constant_phi{3.141592653589793};
    AngularFrequency constant_E = AngularFrequency::from_hz(1.0e5);
    double horizon_s = 0.0; // <= 0: 20 / kappa_c
    std::size_t samples = 200;
    std::vector<double> slice_ratios{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    double comparison_omega_m_ratio = 2.0;
};

struct RunConfig {
    SystemParams params = SystemParams::defaults();
    RadauConfig integrator;
    SweepSettings sweep;
};

/// Parses a JSON config. Frequencies are given in Hz (`omega_c_hz`, ...); missing
/// keys keep their defaults. Unknown keys, wrong types and malformed JSON throw
/// ConfigError. An empty document yields the defaults.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved config as JSON; parse_config(to_json(c)) reproduces c exactly.
std::string to_json(const RunConfig& cfg, int indent = 2);

} // namespace magnoblock
