#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

#include "magnoblock/params.hpp"

namespace magnoblock::testing {

/// Admissible parameters scattered around the defaults. The magnon stays within
/// 1% of the cavity so a full 20 / kappa_c horizon stays cheap to integrate.
inline SystemParams random_params(std::mt19937_64& rng) {
    auto u = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    auto hz = AngularFrequency::from_hz;
    SystemParams p = SystemParams::defaults();
    p.omega_mech = hz(u(5e6, 20e6));
    p.omega_m = hz(p.omega_c.hz() * u(0.99, 1.01));
    p.omega_drive = hz(p.omega_c.hz() + u(-3.0, 3.0) * p.omega_mech.hz());
    p.kappa_c = hz(u(0.3e6, 3e6));
    p.kappa_m = hz(u(0.3e6, 3e6));
    p.kappa_mech = hz(u(10.0, 1000.0));
    p.g_mc = hz(u(0.5e6, 5e6));
    p.g_md = hz(u(0.5e6, 5e6));
    p.feedback_amp = hz(u(0.0, 1e4));
    p.phi = Phase(u(-4.0, 4.0));
    p.drive_E = hz(u(0.0, 1e5));
    return p;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// File content with the first (provenance) line removed.
inline std::string without_first_line(const std::string& text) {
    const auto nl = text.find('\n');
    return nl == std::string::npos ? std::string{} : text.substr(nl + 1);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() /
               ("magnoblock-" + name + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace magnoblock::testing
