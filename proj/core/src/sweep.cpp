#include "magnoblock/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <span>
#include <thread>

#include "magnoblock/observables.hpp"
#include "magnoblock/steady.hpp"

namespace magnoblock {

std::string_view to_string(DriveMode mode) {
    switch (mode) {
    case DriveMode::OptimalFeedback: return "optimal-feedback";
    case DriveMode::NoFeedback: return "no-feedback";
    case DriveMode::ConstantDrive: return "constant-drive";
    }
    return "?";
}

std::optional<DriveMode> parse_drive_mode(std::string_view name) {
    for (auto m : {DriveMode::OptimalFeedback, DriveMode::NoFeedback, DriveMode::ConstantDrive})
        if (to_string(m) == name) return m;
    return std::nullopt;
}

double default_horizon(const SystemParams& params) { return 20.0 / params.kappa_c.rad_per_s(); }

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = a;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

std::vector<AngularFrequency> omega0_grid(const SystemParams& params, double lo, double hi,
                                          std::size_t points) {
    const double c = params.omega_c.hz();
    const double m = params.omega_mech.hz();
    std::vector<AngularFrequency> out;
    out.reserve(points);
    for (double x : linspace(-lo, hi, points)) out.push_back(AngularFrequency::from_hz(c + x * m));
    return out;
}

std::vector<AngularFrequency> default_omega0_grid(const SystemParams& params) {
    return omega0_grid(params, 2.0, 2.0, 201);
}

namespace {

bool strictly_increasing(const auto& v) {
    return std::adjacent_find(v.begin(), v.end(), [](auto a, auto b) { return !(a < b); }) == v.end();
}

} // namespace

std::optional<std::string> SweepSpec::check() const {
    if (omega0_grid.empty()) return "omega0 grid is empty";
    if (!strictly_increasing(omega0_grid)) return "omega0 grid must be strictly increasing";
    if (omega_m_ratios) {
        if (omega_m_ratios->empty()) return "omega_m ratio grid is empty";
        if (!strictly_increasing(*omega_m_ratios)) return "omega_m ratio grid must be strictly increasing";
    }
    if (mode != DriveMode::OptimalFeedback && !(constant_E.is_finite() && constant_E.hz() >= 0.0))
        return "constant_E must be finite and >= 0";
    if (samples < 20) return "need at least 20 samples for the steady-state windows";
    if (auto bad = integrator.check()) return *bad;
    return std::nullopt;
}

SteadyRun evolve_to_steady(const SystemParams& params, const RadauConfig& cfg, double horizon,
                           std::size_t samples) {
    const Generator gen = build_generator(params);
    RadauIntegrator integrator(gen, cfg);
    const double dt = horizon / static_cast<double>(samples);
    Trajectory traj = integrator.evolve(StateVector::vacuum(), horizon, dt);

    SteadyRun run;
    auto windows = [&]() {
        // Samples exclude t = 0.
        const std::size_t n = traj.states.size() - 1;
        const std::size_t w = std::max<std::size_t>(1, n / 10);
        std::span<const StateVector> all(traj.states);
        const auto last = mean_g2(all.last(w));
        const auto prev = mean_g2(all.subspan(all.size() - 2 * w, w));
        bool steady = false;
        if (!last && !prev)
            steady = true;
        else if (last && prev)
            steady = *last == *prev || std::abs(*last - *prev) < 1e-4 * std::abs(*last);
        return std::pair{last, steady};
    };

    auto [avg, steady] = windows();
    run.horizon_used = horizon;
    if (!steady) {
        integrator.extend(traj, 2.0 * horizon, dt);
        std::tie(avg, steady) = windows();
        run.horizon_used = 2.0 * horizon;
    }

    run.state = traj.final_state();
    run.steady_reached = steady;
    run.g2_avg = avg;
    const PhotonStats stats = g2_zero(run.state);
    run.g2_final = stats.g2;
    run.n_photon = stats.n_photon;
    run.stats = traj.step_stats;
    return run;
}

SystemParams point_params(const SweepSpec& spec, AngularFrequency omega0, double omega_m_ratio) {
    SystemParams p = spec.base;
    p.omega_drive = omega0;
    if (spec.omega_m_ratios) p.omega_m = omega_m_ratio * p.omega_c;
    switch (spec.mode) {
    case DriveMode::OptimalFeedback: {
        const OptimalDrive opt = optimal_drive(p);
        p.phi = opt.phi_star;
        p.drive_E = AngularFrequency::from_rad_per_s(opt.e_star);
        break;
    }
    case DriveMode::NoFeedback:
        p.feedback_amp = AngularFrequency::from_hz(0.0);
        p.phi = Phase(0.0);
        p.drive_E = spec.constant_E;
        break;
    case DriveMode::ConstantDrive:
        p.phi = spec.constant_phi;
        p.drive_E = spec.constant_E;
        break;
    }
    return p;
}

SweepRecord run_point(const SweepSpec& spec, AngularFrequency omega0, double omega_m_ratio) {
    SweepRecord rec;
    rec.omega0_hz = omega0.hz();
    rec.mode = spec.mode;
    rec.omega_m_ratio = spec.omega_m_ratios ? omega_m_ratio : spec.base.omega_m.hz() / spec.base.omega_c.hz();
    try {
        const SystemParams p = point_params(spec, omega0, omega_m_ratio);
        if (spec.mode != DriveMode::NoFeedback) rec.phi_used = p.phi.radians();
        rec.E_used = p.drive_E;
        rec.feedback_used = p.feedback_amp;

        try {
            rec.hierarchy_warning = steady_amplitudes(p, compute_detunings(p)).hierarchy_violated;
        } catch (const SingularSystemError&) {
            rec.hierarchy_warning = true;
        }

        const double horizon = spec.horizon > 0.0 ? spec.horizon : default_horizon(p);
        const SteadyRun run = evolve_to_steady(p, spec.integrator, horizon, spec.samples);
        rec.g2_final = run.g2_final;
        rec.g2_avg = run.g2_avg;
        if (run.g2_avg) rec.log10_g2_avg = log10_floored(*run.g2_avg);
        rec.n_photon = run.n_photon;
        rec.steady_reached = run.steady_reached;
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    return rec;
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

std::vector<SweepRecord> sweep_1d(const SweepSpec& spec) {
    if (auto bad = spec.check()) throw Error("sweep_1d: " + *bad);
    if (spec.omega_m_ratios) throw Error("sweep_1d: omega_m grid given; use sweep_2d");
    std::vector<SweepRecord> out(spec.omega0_grid.size());
    parallel_for(out.size(), spec.workers,
                 [&](std::size_t i) { out[i] = run_point(spec, spec.omega0_grid[i], 0.0); });
    return out;
}

SweepGrid sweep_2d(const SweepSpec& spec) {
    if (auto bad = spec.check()) throw Error("sweep_2d: " + *bad);
    if (!spec.omega_m_ratios) throw Error("sweep_2d: omega_m grid required");
    SweepGrid grid;
    grid.omega_m_ratios = *spec.omega_m_ratios;
    for (auto w : spec.omega0_grid) grid.omega0_hz.push_back(w.hz());
    const std::size_t cols = spec.omega0_grid.size();
    grid.records.resize(grid.omega_m_ratios.size() * cols);
    parallel_for(grid.records.size(), spec.workers, [&](std::size_t i) {
        grid.records[i] = run_point(spec, spec.omega0_grid[i % cols], grid.omega_m_ratios[i / cols]);
    });
    return grid;
}

std::vector<LocusPoint> phase_drive_locus(const SystemParams& base,
                                          const std::vector<AngularFrequency>& omega0_grid) {
    std::vector<LocusPoint> out;
    out.reserve(omega0_grid.size());
    for (auto w0 : omega0_grid) {
        SystemParams p = base;
        p.omega_drive = w0;
        LocusPoint pt;
        pt.omega0_hz = w0.hz();
        try {
            const OptimalDrive opt = optimal_drive(p);
            pt.phi_star = opt.phi_star.radians();
            pt.e_star = opt.e_star;
        } catch (const FeedbackError&) {
        }
        out.push_back(pt);
    }
    return out;
}

std::vector<PairedRecord> compare_optimal_vs_constant(const SweepSpec& spec) {
    SweepSpec opt = spec;
    opt.mode = DriveMode::OptimalFeedback;
    opt.omega_m_ratios.reset();
    SweepSpec cst = opt;
    cst.mode = DriveMode::ConstantDrive;

    const auto a = sweep_1d(opt);
    const auto b = sweep_1d(cst);
    std::vector<PairedRecord> out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back({a[i], b[i]});
    return out;
}

} // namespace magnoblock
