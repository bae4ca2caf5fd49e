#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "magnoblock/basis.hpp"
#include "magnoblock/params.hpp"
#include "magnoblock/radau.hpp"

namespace magnoblock {

enum class DriveMode { OptimalFeedback, NoFeedback, ConstantDrive };

std::string_view to_string(DriveMode mode);
std::optional<DriveMode> parse_drive_mode(std::string_view name);

/// Integration horizon used when none is configured: 20 cavity lifetimes, 20 / kappa_c.
double default_horizon(const SystemParams& params);

inline constexpr std::size_t kDefaultSamples = 200;

/// Drive-frequency grid over [omega_c - lo * omega_mech, omega_c + hi * omega_mech].
std::vector<AngularFrequency> omega0_grid(const SystemParams& params, double lo, double hi,
                                          std::size_t points);
/// The default 201-point grid with lo = hi = 2.
std::vector<AngularFrequency> default_omega0_grid(const SystemParams& params);
std::vector<double> linspace(double a, double b, std::size_t n);

struct SweepSpec {
    std::vector<AngularFrequency> omega0_grid;
    std::optional<std::vector<double>> omega_m_ratios; // omega_m / omega_c
    DriveMode mode = DriveMode::OptimalFeedback;
    Phase constant_phi{3.141592653589793};
    AngularFrequency constant_E = AngularFrequency::from_hz(1.0e5);
    SystemParams base = SystemParams::defaults();
    RadauConfig integrator;
    double horizon = 0.0; // s; <= 0 selects default_horizon(base)
    std::size_t samples = kDefaultSamples;
    std::size_t workers = 1;

    std::optional<std::string> check() const;
};

struct SweepRecord {
    double omega0_hz = 0.0;
    double omega_m_ratio = 0.0;
    DriveMode mode = DriveMode::OptimalFeedback;
    std::optional<double> phi_used; // empty in no-feedback mode
    AngularFrequency E_used;
    AngularFrequency feedback_used;
    std::optional<double> g2_final;
    std::optional<double> g2_avg;
    std::optional<double> log10_g2_avg;
    double n_photon = 0.0;
    bool steady_reached = false;
    bool hierarchy_warning = false;
    std::string error;
};

/// Result of integrating from the vacuum until the trailing g2 average settles.
struct SteadyRun {
    StateVector state;
    bool steady_reached = false;
    std::optional<double> g2_final;
    std::optional<double> g2_avg; // mean over the last 10% of samples
    double n_photon = 0.0;
    double horizon_used = 0.0;
    StepStats stats;
};

/// Integrates from C000 = 1 with `samples` uniformly spaced samples. Steady when the
/// mean g2 of the last 10% of samples differs from the preceding 10% window by less
/// than 1e-4 relative; otherwise the run is extended once to twice the horizon.
SteadyRun evolve_to_steady(const SystemParams& params, const RadauConfig& cfg, double horizon,
                           std::size_t samples = kDefaultSamples);

/// Parameters actually integrated at one grid point (drive fixed per mode).
SystemParams point_params(const SweepSpec& spec, AngularFrequency omega0, double omega_m_ratio);

SweepRecord run_point(const SweepSpec& spec, AngularFrequency omega0, double omega_m_ratio);

std::vector<SweepRecord> sweep_1d(const SweepSpec& spec);

struct SweepGrid {
    std::vector<double> omega_m_ratios;
    std::vector<double> omega0_hz;
    std::vector<SweepRecord> records; // row-major: ratio index * cols + omega0 index

    const SweepRecord& at(std::size_t row, std::size_t col) const {
        return records[row * omega0_hz.size() + col];
    }
};

SweepGrid sweep_2d(const SweepSpec& spec);

struct LocusPoint {
    double omega0_hz = 0.0;
    std::optional<double> phi_star; // empty at a degenerate detuning
    std::optional<double> e_star;   // rad/s
};

std::vector<LocusPoint> phase_drive_locus(const SystemParams& base,
                                          const std::vector<AngularFrequency>& omega0_grid);

struct PairedRecord {
    SweepRecord optimal;
    SweepRecord constant;
};

std::vector<PairedRecord> compare_optimal_vs_constant(const SweepSpec& spec);

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Results must be written
/// to index-addressed storage by fn; ordering is the caller's.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

} // namespace magnoblock
