// Acceptance checks, one per criterion. Usage: magnoblock_acceptance N | all
// Prints one "criterion N: PASS|FAIL ..." line per check; exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "magnoblock/expm.hpp"
#include "magnoblock/observables.hpp"
#include "magnoblock/radau.hpp"
#include "magnoblock/steady.hpp"
#include "magnoblock/sweep.hpp"
#include "support.hpp"

using namespace magnoblock;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

fs::path artifact_dir() {
    const char* env = std::getenv("MAGNOBLOCK_ARTIFACT_DIR");
    fs::path dir = env && *env ? fs::path(env) : fs::path(MAGNOBLOCK_DEFAULT_ARTIFACT_DIR);
    fs::create_directories(dir);
    return dir;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t workers() {
    if (const char* env = std::getenv("MAGNOBLOCK_WORKERS")) return std::max(1, std::atoi(env));
    return 1;
}

SystemParams with_optimal_drive(SystemParams p) {
    const OptimalDrive opt = optimal_drive(p);
    p.phi = opt.phi_star;
    p.drive_E = AngularFrequency::from_rad_per_s(opt.e_star);
    return p;
}

// x = (omega0 - omega_c) / omega_mech
double rel(const SystemParams& p, double omega0_hz) { return (omega0_hz - p.omega_c.hz()) / p.omega_mech.hz(); }

const SweepRecord* argmin_g2(const std::vector<SweepRecord>& recs) {
    const SweepRecord* best = nullptr;
    for (const auto& r : recs)
        if (r.g2_avg && (!best || *r.g2_avg < *best->g2_avg)) best = &r;
    return best;
}

// ---- criteria ----

Outcome oracle_equivalence() {
    std::mt19937_64 rng(20240601);
    double worst = 0.0;
    int failures = 0;
    for (int i = 0; i < 100; ++i) {
        const SystemParams p = testing::random_params(rng);
        const Generator g = build_generator(p);
        const double t = default_horizon(p);
        const double d = max_abs_diff(radau_evolve(g, StateVector::vacuum(), t, RadauConfig{}).final_state(),
                                      expm_propagate(g, StateVector::vacuum(), t));
        worst = std::max(worst, d);
        if (!(d <= 10 * RadauConfig{}.rel_tol)) ++failures;
    }
    return {failures == 0, fmt("100 random sets, worst max-norm gap %.3e (limit %.1e), %d over", worst,
                               10 * RadauConfig{}.rel_tol, failures)};
}

Outcome convergence_order() {
    const Generator g = build_generator(SystemParams::defaults());
    const double t = 100e-9;
    const StateVector ref = expm_propagate(g, StateVector::vacuum(), t);
    double e[3];
    // Smaller steps reach round-off: the default drive keeps amplitudes near 1e-4.
    const double h[3] = {4e-9, 2e-9, 1e-9};
    for (int i = 0; i < 3; ++i) e[i] = max_abs_diff(radau_fixed_step(g, StateVector::vacuum(), t, h[i]), ref);
    const double p1 = std::log2(e[0] / e[1]), p2 = std::log2(e[1] / e[2]);
    const bool ok = p1 >= 4.6 && p1 <= 5.4 && p2 >= 4.6 && p2 <= 5.4;
    return {ok, fmt("errors %.3e %.3e %.3e at h = 4, 2, 1 ns; orders %.3f %.3f; ratio h/(h/2) = %.2f", e[0],
                    e[1], e[2], p1, p2, e[0] / e[1])};
}

Outcome norm_behaviour() {
    SystemParams p = with_optimal_drive([] {
        SystemParams q = SystemParams::defaults();
        q.omega_drive = q.omega_c - q.omega_mech;
        return q;
    }());
    const double horizon = default_horizon(p);
    SystemParams lossless = p;
    lossless.kappa_c = lossless.kappa_m = lossless.kappa_mech = AngularFrequency::from_hz(0.0);
    const Trajectory a = radau_evolve(build_generator(lossless), StateVector::vacuum(), horizon, RadauConfig{},
                                      horizon / kDefaultSamples);
    double drift = 0.0;
    for (const auto& s : a.states) drift = std::max(drift, std::abs(s.norm2() - 1.0));

    const Trajectory b = radau_evolve(build_generator(p), StateVector::vacuum(), horizon, RadauConfig{},
                                      horizon / kDefaultSamples);
    double worst_rise = -1.0;
    for (std::size_t i = 1; i < b.states.size(); ++i)
        worst_rise = std::max(worst_rise, std::sqrt(b.states[i].norm2()) - std::sqrt(b.states[i - 1].norm2()));
    const bool ok = drift < 1e-9 && worst_rise <= 1e-9;
    return {ok, fmt("lossless max |norm2 - 1| = %.3e; lossy largest norm increase between samples = %.3e", drift,
                    worst_rise)};
}

Outcome feedback_optimum() {
    const SystemParams base = SystemParams::defaults();
    const auto grid = default_omega0_grid(base);
    double worst = 0.0;
    bool signs = true;
    for (std::size_t k = 0; k < grid.size(); k += 4) { // 50 points
        SystemParams p = base;
        p.omega_drive = grid[k];
        const Detunings d = compute_detunings(p);
        const OptimalDrive opt = optimal_drive(p);
        const double phi = opt.phi_star.radians();
        worst = std::max(worst, std::abs(d.delta_r * std::cos(phi) + d.delta_i * std::sin(phi)) / std::abs(d.delta_m));
        signs = signs && opt.e_star >= 0.0;
    }
    const double e0 = optimal_drive(base).e_star;
    const double want = base.feedback_amp.rad_per_s() * base.kappa_m.rad_per_s() / (2 * base.g_mc.rad_per_s());
    const double rel_err = std::abs(e0 - want) / want;
    const bool ok = worst < 1e-12 && signs && rel_err < 1e-12 && std::abs(want - 2 * pi * 156.25) < 1e-9;
    return {ok, fmt("50 points: max constraint residual %.3e, all E* >= 0: %s; E*(Delta_r = 0)/2pi = %.12g Hz, "
                    "relative error %.2e",
                    worst, signs ? "yes" : "no", e0 / (2 * pi), rel_err)};
}

Outcome steady_residual() {
    std::mt19937_64 rng(424242);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const SystemParams p = testing::random_params(rng);
        worst = std::max(worst, steady_amplitudes(p, compute_detunings(p)).relative_residual);
    }
    return {worst < 1e-10, fmt("50 random sets, worst relative residual %.3e (limit 1e-10)", worst)};
}

Outcome fig3_location() {
    SweepSpec s;
    s.omega0_grid = default_omega0_grid(s.base);
    s.workers = workers();
    const auto recs = sweep_1d(s);
    const SweepRecord* best = argmin_g2(recs);
    if (!best) return {false, "no defined g2 on the grid"};
    const SweepRecord* best_left = nullptr;
    for (const auto& r : recs)
        if (r.omega0_hz < s.base.omega_c.hz() && r.g2_avg && (!best_left || *r.g2_avg < *best_left->g2_avg))
            best_left = &r;
    const double x = rel(s.base, best->omega0_hz);
    return {x < 0.0, fmt("global minimum log10 g2_avg = %.3f at (omega0 - omega_c)/omega_mech = %+.2f; "
                         "best with omega0 < omega_c: %.3f at %+.2f",
                         *best->log10_g2_avg, x, best_left ? *best_left->log10_g2_avg : NAN,
                         best_left ? rel(s.base, best_left->omega0_hz) : NAN)};
}

Outcome fig6_location() {
    SweepSpec s;
    s.mode = DriveMode::NoFeedback;
    s.constant_E = AngularFrequency::from_hz(1e5);
    s.base.omega_m = s.base.omega_c;
    s.omega0_grid = default_omega0_grid(s.base);
    s.workers = workers();
    const auto recs = sweep_1d(s);
    const SweepRecord* best = argmin_g2(recs);
    if (!best) return {false, "no defined g2 on the grid"};
    const double off = (best->omega0_hz - s.base.omega_m.hz()) / s.base.omega_mech.hz();
    return {std::abs(off) <= 0.2, fmt("minimum log10 g2_avg = %.3f at (omega0 - omega_m)/omega_mech = %+.2f "
                                      "(window +-0.2)",
                                      *best->log10_g2_avg, off)};
}

Outcome depth() {
    const fs::path out = artifact_dir() / "criterion8_depth.txt";
    std::ofstream log(out);

    SweepSpec s;
    s.omega0_grid = omega0_grid(s.base, 2.0, 2.0, 41);
    s.omega_m_ratios = linspace(0.5, 3.0, 21);
    s.workers = workers();
    const auto t0 = std::chrono::steady_clock::now();
    const SweepGrid coarse = sweep_2d(s);
    const double elapsed = seconds_since(t0);
    const SweepRecord* best = argmin_g2(coarse.records);
    if (!best) return {false, "no defined g2 on the coarse grid"};
    bool ok = elapsed < 120.0 && *best->g2_avg <= 1e-8;
    std::string detail = fmt("coarse 21x41: min g2_avg %.4e at omega_m/omega_c = %.3f, (omega0 - omega_c)/omega_mech "
                             "= %+.2f, %.1f s (limits 1e-8, 120 s)",
                             *best->g2_avg, best->omega_m_ratio, rel(s.base, best->omega0_hz), elapsed);
    log << "coarse_21x41 min_g2_avg " << fmt("%.12e", *best->g2_avg) << " ratio " << best->omega_m_ratio
        << " omega0_hz " << fmt("%.12e", best->omega0_hz) << " seconds " << elapsed << '\n';

    const char* full = std::getenv("MAGNOBLOCK_FULL_GRID");
    if (full && std::string(full) == "1") {
        s.omega0_grid = default_omega0_grid(s.base);
        s.omega_m_ratios = linspace(0.5, 3.0, 101);
        const auto t1 = std::chrono::steady_clock::now();
        const SweepGrid fine = sweep_2d(s);
        const SweepRecord* fb = argmin_g2(fine.records);
        ok = ok && fb && *fb->g2_avg <= 1e-10;
        if (fb) {
            detail += fmt("; full 101x201: min g2_avg %.4e at omega_m/omega_c = %.3f, %+.2f, %.0f s (limit 1e-10)",
                          *fb->g2_avg, fb->omega_m_ratio, rel(s.base, fb->omega0_hz), seconds_since(t1));
            log << "full_101x201 min_g2_avg " << fmt("%.12e", *fb->g2_avg) << " ratio " << fb->omega_m_ratio
                << " omega0_hz " << fmt("%.12e", fb->omega0_hz) << '\n';
        }
    } else {
        detail += "; full grid skipped (set MAGNOBLOCK_FULL_GRID=1)";
    }
    return {ok, detail + "; baseline in " + out.string()};
}

Outcome fig7_dominance() {
    SweepSpec s;
    s.base.omega_m = 2.0 * s.base.omega_c;
    s.omega0_grid = default_omega0_grid(s.base);
    s.workers = workers();
    const auto pairs = compare_optimal_vs_constant(s);
    std::size_t below = 0, total = 0;
    for (const auto& p : pairs) {
        if (!p.optimal.log10_g2_avg || !p.constant.log10_g2_avg) continue;
        ++total;
        if (*p.optimal.log10_g2_avg <= *p.constant.log10_g2_avg) ++below;
    }
    const double frac = total ? static_cast<double>(below) / total : 0.0;
    std::string detail = fmt("omega_m = 2 omega_c: optimal <= constant at %zu / %zu points (%.1f%%, need 80%%)", below,
                             total, 100 * frac);

    // Same comparison with the magnon on resonance, for the record.
    s.base.omega_m = s.base.omega_c;
    std::size_t below1 = 0, total1 = 0;
    for (const auto& p : compare_optimal_vs_constant(s)) {
        if (!p.optimal.log10_g2_avg || !p.constant.log10_g2_avg) continue;
        ++total1;
        if (*p.optimal.log10_g2_avg <= *p.constant.log10_g2_avg) ++below1;
    }
    detail += fmt("; omega_m = omega_c (informational): %zu / %zu", below1, total1);
    return {frac >= 0.8, detail};
}

Outcome formula_gap() {
    const SystemParams base = SystemParams::defaults();
    const auto grid = default_omega0_grid(base);
    const fs::path out = artifact_dir() / "criterion10_formula_gap.csv";
    std::ofstream csv(out);
    csv << "omega0_hz,phi_star_rad,E_formula_hz,E_root_hz,formula_gap,c200_at_root,note\n";
    double worst = 0.0;
    int ok_points = 0;
    for (std::size_t k : {0, 20, 40, 60, 80, 100, 120, 140, 160, 200}) {
        SystemParams p = base;
        p.omega_drive = grid[k];
        const Detunings d = compute_detunings(p);
        const double phi = optimal_phase(d).radians();
        try {
            const RootCheck rc = c200_root_check(p, d, phi);
            csv << fmt("%.12e,%.12e,%.12e,%.12e,%.6e,%.6e,", grid[k].hz(), phi, rc.e_formula / (2 * pi),
                       rc.e_root / (2 * pi), rc.formula_gap, rc.c200_at_root)
                << '\n';
            worst = std::max(worst, rc.formula_gap);
            ++ok_points;
        } catch (const FeedbackError& e) {
            csv << fmt("%.12e,%.12e,,,,,", grid[k].hz(), phi) << e.what() << '\n';
        }
    }
    return {csv.good(), fmt("%d / 10 frequencies located; largest relative gap %.3e; series in %s", ok_points, worst,
                            out.string().c_str())};
}

Outcome determinism() {
    const fs::path root = testing::scratch_dir("determinism");
    std::ofstream(root / "small.json") << R"({"sweep": {"omega0_points": 9, "omega_m_ratio_min": 0.9,
        "omega_m_ratio_max": 1.1, "omega_m_ratio_points": 3, "slice_ratios": [1.0, 1.05]}})";
    struct Run {
        std::string fig;
        bool small;
    };
    const std::vector<Run> runs{{"fig2", false}, {"fig3", false}, {"fig4", true},
                                {"fig5", true},  {"fig6", true},  {"fig7", true}};
    std::vector<std::string> mismatched;
    std::size_t compared = 0;
    std::ostringstream sink;
    for (const auto& r : runs) {
        for (const char* pass : {"a", "b"}) {
            std::vector<std::string> args;
            if (r.small) args = {"--config", (root / "small.json").string()};
            args.insert(args.end(), {"--out", (root / pass / r.fig).string(), "--workers", pass[0] == 'a' ? "1" : "2",
                                     "figure", r.fig});
            if (cli::run(args, sink, sink) != cli::kOk) return {false, r.fig + " failed: " + sink.str()};
        }
        for (const auto& entry : fs::directory_iterator(root / "a" / r.fig)) {
            if (entry.path().extension() != ".csv") continue;
            const auto other = root / "b" / r.fig / entry.path().filename();
            ++compared;
            if (testing::without_first_line(testing::slurp(entry.path())) !=
                testing::without_first_line(testing::slurp(other)))
                mismatched.push_back(entry.path().filename().string());
        }
    }
    fs::remove_all(root);
    std::string detail = fmt("%zu CSV files from fig2..fig7 compared across two runs (1 and 2 workers)", compared);
    if (!mismatched.empty()) {
        detail += "; differing:";
        for (const auto& m : mismatched) detail += " " + m;
    }
    return {mismatched.empty() && compared >= 6, detail};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

const std::vector<Criterion> kCriteria{
    {1, "oracle equivalence", oracle_equivalence},
    {2, "order of convergence", convergence_order},
    {3, "norm conservation and monotonicity", norm_behaviour},
    {4, "feedback-optimum consistency", feedback_optimum},
    {5, "steady-state residual", steady_residual},
    {6, "1-D optimal minimum below omega_c", fig3_location},
    {7, "no-feedback minimum near omega0 = omega_m", fig6_location},
    {8, "2-D depth", depth},
    {9, "optimal vs constant dominance", fig7_dominance},
    {10, "closed-form vs oracle drive gap", formula_gap},
    {11, "determinism", determinism},
};

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: magnoblock_acceptance N|all\n";
        return 2;
    }
    const std::string which = argv[1];
    bool all_pass = true;
    bool ran = false;
    for (const auto& c : kCriteria) {
        if (which != "all" && which != std::to_string(c.id)) continue;
        ran = true;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << "criterion " << c.id << " (" << c.name << "): " << (o.pass ? "PASS" : "FAIL") << " - "
                  << o.detail << fmt(" [%.1f s]", seconds_since(t0)) << std::endl;
        all_pass = all_pass && o.pass;
    }
    if (!ran) {
        std::cerr << "unknown criterion '" << which << "'\n";
        return 2;
    }
    return all_pass ? 0 : 1;
}
