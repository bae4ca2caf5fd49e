#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "magnoblock/config.hpp"
#include "magnoblock/csv.hpp"
#include "magnoblock/errors.hpp"
#include "magnoblock/generator.hpp"
#include "magnoblock/radau.hpp"
#include "magnoblock/spectrum.hpp"
#include "magnoblock/steady.hpp"
#include "magnoblock/svg.hpp"
#include "magnoblock/sweep.hpp"

namespace magnoblock::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Failure {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, std::string message) { throw Failure{code, std::move(message)}; }

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string num(double x, int precision = 6) {
    std::ostringstream os;
    os.precision(precision);
    os << x;
    return os.str();
}

std::string cnum(cplx z) { return num(z.real()) + (z.imag() < 0 ? " - " : " + ") + num(std::abs(z.imag())) + "i"; }

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::size_t> workers;
    bool svg = false;
    bool seed_free = false; // nothing here draws random numbers; accepted for harness symmetry
};

RunConfig read_config(const std::string& path) {
    if (path.empty()) return RunConfig{};
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    // A run manifest can be fed back in: its snapshot is a complete config.
    const json j = json::parse(text, nullptr, false);
    if (!j.is_discarded() && j.is_object() && j.contains("config_snapshot")) text = j["config_snapshot"].dump();
    return parse_config(text);
}

std::size_t resolve_workers(std::optional<std::size_t> flag) {
    if (flag) {
        if (*flag == 0) fail(kUsage, "--workers must be >= 1");
        return *flag;
    }
    if (const char* env = std::getenv("MAGNOBLOCK_WORKERS"); env && *env) {
        std::size_t n = 0;
        const char* end = env + std::char_traits<char>::length(env);
        const auto [p, ec] = std::from_chars(env, end, n);
        if (ec != std::errc{} || p != end || n == 0)
            fail(kUsage, std::string("MAGNOBLOCK_WORKERS must be a positive integer, got '") + env + "'");
        return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Per-invocation state: resolved config, output bookkeeping, manifest.
class Session {
public:
    Session(const Options& opt, std::ostream& out, std::ostream& err)
        : opt_(opt), out_(out), err_(err), started_(utc_now()) {}

    void load() {
        cfg = read_config(opt_.config_path);
        workers = resolve_workers(opt_.workers);
    }

    void require_valid() const {
        const auto violations = validate_params(cfg.params);
        if (violations.empty()) return;
        std::string msg = "invalid parameters:";
        for (const auto& v : violations) msg += "\n  " + to_string(v);
        fail(kValidation, msg);
    }

    fs::path out_path(const std::string& name) const { return fs::path(opt_.out_dir) / name; }

    std::string provenance() const { return provenance_line(started_); }

    void write(const fs::path& path, const std::function<void(std::ostream&)>& body) {
        std::error_code ec;
        if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
        if (ec) fail(kRuntime, "cannot create directory " + path.parent_path().string() + ": " + ec.message());
        std::ofstream os(path, std::ios::binary);
        if (!os) fail(kRuntime, "cannot write " + path.string());
        body(os);
        os.close();
        if (!os) fail(kRuntime, "error while writing " + path.string());
        outputs_.push_back(path.string());
    }

    void maybe_svg(const fs::path& path, const std::function<void(std::ostream&)>& body) {
        if (opt_.svg) write(path, body);
    }

    void manifest(const fs::path& path, const std::string& command) {
        json m;
        m["tool_version"] = MAGNOBLOCK_VERSION;
        m["command"] = command;
        m["started"] = started_;
        m["finished"] = utc_now();
        m["workers"] = workers;
        m["config_snapshot"] = json::parse(to_json(cfg));
        m["output_paths"] = outputs_;
        const std::string text = m.dump(2) + "\n";
        write(path, [&](std::ostream& os) { os << text; });
        out_ << "wrote";
        for (const auto& p : outputs_) out_ << ' ' << p;
        out_ << '\n';
    }

    std::ostream& out() { return out_; }
    std::ostream& err() { return err_; }
    bool svg() const { return opt_.svg; }

    RunConfig cfg;
    std::size_t workers = 1;

private:
    const Options& opt_;
    std::ostream& out_;
    std::ostream& err_;
    std::string started_;
    std::vector<std::string> outputs_;
};

std::vector<AngularFrequency> config_grid(const RunConfig& c) {
    const double hi = c.sweep.omega0_range == "results" ? 3.0 : 2.0;
    return omega0_grid(c.params, 2.0, hi, c.sweep.omega0_points);
}

SweepSpec make_spec(const Session& s, DriveMode mode) {
    SweepSpec spec;
    spec.base = s.cfg.params;
    spec.integrator = s.cfg.integrator;
    spec.mode = mode;
    spec.constant_phi = s.cfg.sweep.constant_phi;
    spec.constant_E = s.cfg.sweep.constant_E;
    spec.horizon = s.cfg.sweep.horizon_s;
    spec.samples = s.cfg.sweep.samples;
    spec.workers = s.workers;
    spec.omega0_grid = config_grid(s.cfg);
    return spec;
}

void check_spec(const SweepSpec& spec) {
    if (auto bad = spec.check()) fail(kUsage, "invalid sweep settings: " + *bad);
}

// x axis for plots: (omega0 - omega_c) / omega_mech.
double rel_detuning(const SystemParams& p, double omega0_hz) {
    return (omega0_hz - p.omega_c.hz()) / p.omega_mech.hz();
}

PlotSeries g2_series(const SystemParams& p, const std::vector<SweepRecord>& recs, std::string label) {
    PlotSeries s;
    s.label = std::move(label);
    for (const auto& r : recs) {
        s.x.push_back(rel_detuning(p, r.omega0_hz));
        s.y.push_back(r.log10_g2_avg);
    }
    return s;
}

const PlotLabels kG2Axes{"", "(omega0 - omega_c) / omega_mech", "log10 g2(0)"};

void write_heatmap(std::ostream& os, const SystemParams& p, const SweepGrid& grid, std::string title) {
    std::vector<double> x;
    for (double w : grid.omega0_hz) x.push_back(rel_detuning(p, w));
    std::vector<std::vector<std::optional<double>>> v(grid.omega_m_ratios.size());
    for (std::size_t r = 0; r < v.size(); ++r)
        for (std::size_t c = 0; c < x.size(); ++c) v[r].push_back(grid.at(r, c).log10_g2_avg);
    write_heatmap_svg(os, {std::move(title), kG2Axes.x_label, "omega_m / omega_c"}, x, grid.omega_m_ratios, v);
}

void summarize(std::ostream& out, const std::string& what, const std::vector<SweepRecord>& recs) {
    const SweepRecord* best = nullptr;
    std::size_t unsteady = 0, errors = 0;
    for (const auto& r : recs) {
        if (!r.error.empty()) ++errors;
        else if (!r.steady_reached) ++unsteady;
        if (r.g2_avg && (!best || *r.g2_avg < *best->g2_avg)) best = &r;
    }
    out << what << ": " << recs.size() << " points";
    if (best)
        out << ", min g2_avg " << num(*best->g2_avg, 4) << " at omega0 = " << num(best->omega0_hz, 12)
            << " Hz, omega_m/omega_c = " << num(best->omega_m_ratio, 4);
    out << ", " << unsteady << " not steady, " << errors << " failed\n";
}

// ---- commands ----

int cmd_check(Session& s) {
    auto& out = s.out();
    out << "magnoblock " MAGNOBLOCK_VERSION " check\n";
    if (to_json(s.cfg) == to_json(RunConfig{})) out << "all settings at built-in defaults\n";

    const auto violations = validate_params(s.cfg.params);
    if (!violations.empty()) {
        out << "violations:\n";
        for (const auto& v : violations) out << "  " << to_string(v) << '\n';
        return kValidation;
    }
    out << "parameters: ok\n";

    const Detunings d = compute_detunings(s.cfg.params);
    out << "Delta_c    = " << cnum(d.delta_c) << " rad/s\n"
        << "Delta_m    = " << cnum(d.delta_m) << " rad/s\n"
        << "Delta_mech = " << cnum(d.delta_mech) << " rad/s\n"
        << "Delta_r    = " << num(d.delta_r) << " rad/s, Delta_i = " << num(d.delta_i) << " rad/s\n";

    const StiffnessReport st = stiffness_ratio(build_generator(s.cfg.params));
    if (st.ratio)
        out << "stiffness ratio = " << num(*st.ratio) << (st.stiff() ? "" : " (below 1e3: mildly stiff at most)")
            << '\n';
    else
        out << "stiffness ratio: not stiff by this measure\n";

    const auto grid = config_grid(s.cfg);
    for (AngularFrequency w0 : {grid.front(), grid.back()}) {
        SystemParams p = s.cfg.params;
        p.omega_drive = w0;
        out << "omega0 = " << num(w0.hz(), 12) << " Hz: ";
        try {
            const OptimalDrive opt = optimal_drive(p);
            out << "phi* = " << num(opt.phi_star.radians(), 10)
                << " rad, E*/2pi = " << num(AngularFrequency::from_rad_per_s(opt.e_star).hz(), 10) << " Hz\n";
        } catch (const FeedbackError& e) {
            out << e.what() << '\n';
        }
    }
    return kOk;
}

struct EvolveArgs {
    double t_end = 0.0;
    std::size_t samples = 0;
    std::string output;
    bool optimal_drive = false;
};

int cmd_evolve(Session& s, const EvolveArgs& a) {
    s.require_valid();
    SystemParams p = s.cfg.params;
    if (a.optimal_drive) {
        const OptimalDrive opt = optimal_drive(p);
        p.phi = opt.phi_star;
        p.drive_E = AngularFrequency::from_rad_per_s(opt.e_star);
    }
    const double t_end = a.t_end > 0.0 ? a.t_end : default_horizon(p);
    const std::size_t samples = a.samples > 0 ? a.samples : s.cfg.sweep.samples;
    const Trajectory traj =
        radau_evolve(build_generator(p), StateVector::vacuum(), t_end, s.cfg.integrator, t_end / samples);

    const fs::path csv = a.output.empty() ? s.out_path("trajectory.csv") : fs::path(a.output);
    s.write(csv, [&](std::ostream& os) { write_trajectory_csv(os, traj, s.provenance()); });
    s.out() << "steps accepted " << traj.step_stats.accepted << ", rejected " << traj.step_stats.rejected
            << ", final norm2 " << num(traj.final_state().norm2(), 12) << '\n';
    fs::path manifest = csv;
    manifest.replace_extension(".manifest.json");
    s.manifest(manifest, "evolve");
    return kOk;
}

int cmd_optimal(Session& s, const std::string& output) {
    s.require_valid();
    std::ostringstream body;
    body << s.provenance() << '\n' << "omega0_hz,phi_star_rad,E_star_hz,formula_gap\n";
    for (AngularFrequency w0 : config_grid(s.cfg)) {
        SystemParams p = s.cfg.params;
        p.omega_drive = w0;
        char row[160];
        try {
            const OptimalDrive opt = optimal_drive(p);
            std::string gap = "undefined";
            try {
                const RootCheck rc = c200_root_check(p, compute_detunings(p), opt.phi_star.radians());
                char g[32];
                std::snprintf(g, sizeof g, "%.12e", rc.formula_gap);
                gap = g;
            } catch (const Error&) {
            }
            std::snprintf(row, sizeof row, "%.12e,%.12e,%.12e,%s", w0.hz(), opt.phi_star.radians(),
                          AngularFrequency::from_rad_per_s(opt.e_star).hz(), gap.c_str());
        } catch (const FeedbackError&) {
            std::snprintf(row, sizeof row, "%.12e,undefined,undefined,undefined", w0.hz());
        }
        body << row << '\n';
    }
    if (output.empty()) {
        s.out() << body.str();
        return kOk;
    }
    s.write(output, [&](std::ostream& os) { os << body.str(); });
    fs::path manifest = output;
    manifest.replace_extension(".manifest.json");
    s.manifest(manifest, "optimal");
    return kOk;
}

DriveMode mode_from(const std::string& name) {
    if (auto m = parse_drive_mode(name)) return *m;
    fail(kUsage, "unknown mode '" + name + "'; valid: optimal-feedback, no-feedback, constant-drive");
}

int cmd_sweep1d(Session& s, const std::string& mode_name, std::optional<double> ratio) {
    s.require_valid();
    SweepSpec spec = make_spec(s, mode_from(mode_name));
    if (ratio) {
        spec.base.omega_m = *ratio * spec.base.omega_c;
        s.cfg.params.omega_m = spec.base.omega_m;
    }
    check_spec(spec);
    const auto recs = sweep_1d(spec);
    s.write(s.out_path("sweep1d.csv"), [&](std::ostream& os) { write_sweep_csv(os, recs, s.provenance()); });
    s.maybe_svg(s.out_path("sweep1d.svg"), [&](std::ostream& os) {
        PlotLabels l = kG2Axes;
        l.title = "sweep1d " + mode_name;
        write_line_plot_svg(os, l, {g2_series(spec.base, recs, mode_name)});
    });
    summarize(s.out(), "sweep1d", recs);
    s.manifest(s.out_path("sweep1d.manifest.json"), "sweep1d --mode " + mode_name);
    return kOk;
}

SweepGrid run_grid(SweepSpec spec, std::vector<double> ratios) {
    spec.omega_m_ratios = std::move(ratios);
    check_spec(spec);
    return sweep_2d(spec);
}

std::vector<double> config_ratios(const RunConfig& c) {
    return linspace(c.sweep.omega_m_ratio_min, c.sweep.omega_m_ratio_max, c.sweep.omega_m_ratio_points);
}

void emit_grid(Session& s, const std::string& stem, const SweepGrid& grid, const std::string& title) {
    s.write(s.out_path(stem + ".csv"), [&](std::ostream& os) { write_sweep_csv(os, grid.records, s.provenance()); });
    s.write(s.out_path(stem + "_matrix.csv"), [&](std::ostream& os) { write_matrix_csv(os, grid, s.provenance()); });
    s.maybe_svg(s.out_path(stem + ".svg"),
                [&](std::ostream& os) { write_heatmap(os, s.cfg.params, grid, title); });
    summarize(s.out(), stem, grid.records);
}

int cmd_sweep2d(Session& s, const std::string& mode_name) {
    s.require_valid();
    const SweepGrid grid = run_grid(make_spec(s, mode_from(mode_name)), config_ratios(s.cfg));
    emit_grid(s, "sweep2d", grid, "sweep2d " + mode_name);
    s.manifest(s.out_path("sweep2d.manifest.json"), "sweep2d --mode " + mode_name);
    return kOk;
}

void fig2(Session& s) {
    const auto locus = phase_drive_locus(s.cfg.params, config_grid(s.cfg));
    s.write(s.out_path("fig2_locus.csv"), [&](std::ostream& os) { write_locus_csv(os, locus, s.provenance()); });
    s.maybe_svg(s.out_path("fig2_locus.svg"), [&](std::ostream& os) {
        PlotSeries series{"E*(phi*)", {}, {}};
        for (const auto& p : locus) {
            if (!p.phi_star) continue;
            series.x.push_back(*p.phi_star);
            series.y.push_back(AngularFrequency::from_rad_per_s(*p.e_star).hz());
        }
        write_line_plot_svg(os, {"optimal drive locus", "phi* (rad)", "E*/2pi (Hz)"}, {series});
    });
    s.out() << "fig2: " << locus.size() << " locus points\n";
}

void fig3(Session& s) {
    const SweepSpec spec = make_spec(s, DriveMode::OptimalFeedback);
    check_spec(spec);
    const auto recs = sweep_1d(spec);
    s.write(s.out_path("fig3_sweep.csv"), [&](std::ostream& os) { write_sweep_csv(os, recs, s.provenance()); });
    s.maybe_svg(s.out_path("fig3_sweep.svg"), [&](std::ostream& os) {
        PlotLabels l = kG2Axes;
        l.title = "optimal feedback";
        write_line_plot_svg(os, l, {g2_series(spec.base, recs, "optimal feedback")});
    });
    summarize(s.out(), "fig3", recs);
}

void fig5(Session& s) {
    std::vector<double> ratios = s.cfg.sweep.slice_ratios;
    std::sort(ratios.begin(), ratios.end());
    ratios.erase(std::unique(ratios.begin(), ratios.end()), ratios.end());
    const SweepGrid grid = run_grid(make_spec(s, DriveMode::OptimalFeedback), ratios);
    s.write(s.out_path("fig5_slices.csv"),
            [&](std::ostream& os) { write_sweep_csv(os, grid.records, s.provenance()); });
    s.maybe_svg(s.out_path("fig5_slices.svg"), [&](std::ostream& os) {
        std::vector<PlotSeries> series;
        const std::size_t cols = grid.omega0_hz.size();
        for (std::size_t r = 0; r < grid.omega_m_ratios.size(); ++r) {
            const std::vector<SweepRecord> row(grid.records.begin() + r * cols,
                                               grid.records.begin() + (r + 1) * cols);
            series.push_back(g2_series(s.cfg.params, row, "omega_m/omega_c = " + num(grid.omega_m_ratios[r], 4)));
        }
        PlotLabels l = kG2Axes;
        l.title = "fixed omega_m slices";
        write_line_plot_svg(os, l, series);
    });
    summarize(s.out(), "fig5", grid.records);
}

void fig7(Session& s) {
    SweepSpec spec = make_spec(s, DriveMode::OptimalFeedback);
    spec.base.omega_m = s.cfg.sweep.comparison_omega_m_ratio * spec.base.omega_c;
    check_spec(spec);
    const auto pairs = compare_optimal_vs_constant(spec);
    s.write(s.out_path("fig7_compare.csv"), [&](std::ostream& os) { write_paired_csv(os, pairs, s.provenance()); });
    s.maybe_svg(s.out_path("fig7_compare.svg"), [&](std::ostream& os) {
        std::vector<SweepRecord> a, b;
        for (const auto& p : pairs) {
            a.push_back(p.optimal);
            b.push_back(p.constant);
        }
        PlotLabels l = kG2Axes;
        l.title = "optimal feedback vs constant drive";
        write_line_plot_svg(os, l, {g2_series(spec.base, a, "optimal feedback"), g2_series(spec.base, b, "constant drive")});
    });
    std::size_t below = 0, total = 0;
    for (const auto& p : pairs) {
        if (!p.optimal.log10_g2_avg || !p.constant.log10_g2_avg) continue;
        ++total;
        if (*p.optimal.log10_g2_avg <= *p.constant.log10_g2_avg) ++below;
    }
    s.out() << "fig7: optimal <= constant at " << below << " of " << total << " points\n";
}

int cmd_figure(Session& s, const std::string& name) {
    if (std::find(std::begin(kFigureNames), std::end(kFigureNames), name) == std::end(kFigureNames)) {
        std::string valid;
        for (const char* n : kFigureNames) valid += std::string(valid.empty() ? "" : ", ") + n;
        fail(kUsage, "unknown figure '" + name + "'; valid names: " + valid);
    }
    s.require_valid();
    if (name == "fig2") fig2(s);
    else if (name == "fig3") fig3(s);
    else if (name == "fig4")
        emit_grid(s, "fig4_surface", run_grid(make_spec(s, DriveMode::OptimalFeedback), config_ratios(s.cfg)),
                  "optimal feedback");
    else if (name == "fig5") fig5(s);
    else if (name == "fig6")
        emit_grid(s, "fig6_surface", run_grid(make_spec(s, DriveMode::NoFeedback), config_ratios(s.cfg)),
                  "no feedback");
    else fig7(s);
    s.manifest(s.out_path(name + ".manifest.json"), "figure " + name);
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"magnoblock: photon blockade in a feedback-driven cavity magnomechanical system"};
    app.set_version_flag("--version", std::string(MAGNOBLOCK_VERSION));
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    std::size_t workers = 0;
    app.add_option("--config", opt.config_path, "JSON config file (or a run manifest)");
    app.add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    auto* workers_opt = app.add_option("--workers", workers, "worker threads (overrides MAGNOBLOCK_WORKERS)");
    app.add_flag("--svg", opt.svg, "also write SVG plots");
    app.add_flag("--seed-free", opt.seed_free, "assert the run uses no randomness (always true)");

    auto* check = app.add_subcommand("check", "validate parameters and print derived quantities");

    EvolveArgs ev;
    auto* evolve = app.add_subcommand("evolve", "integrate one trajectory from the vacuum");
    evolve->add_option("--t-end", ev.t_end, "end time in seconds (default 20 / kappa_c)");
    evolve->add_option("--samples", ev.samples, "number of sample intervals");
    evolve->add_option("-o,--output", ev.output, "trajectory CSV path (default OUT/trajectory.csv)");
    evolve->add_flag("--optimal-drive", ev.optimal_drive, "replace phi and E by the feedback optimum");

    std::string optimal_out;
    auto* optimal = app.add_subcommand("optimal", "optimal phase and drive over the omega0 grid");
    optimal->add_option("-o,--output", optimal_out, "CSV path (default: standard output)");

    std::string mode1 = "optimal-feedback";
    std::optional<double> ratio;
    auto* sweep1 = app.add_subcommand("sweep1d", "sweep the drive frequency");
    sweep1->add_option("--mode", mode1, "optimal-feedback | no-feedback | constant-drive")->capture_default_str();
    sweep1->add_option("--omega-m-ratio", ratio, "set omega_m / omega_c for this sweep");

    std::string mode2 = "optimal-feedback";
    auto* sweep2 = app.add_subcommand("sweep2d", "sweep drive frequency and magnon frequency");
    sweep2->add_option("--mode", mode2, "optimal-feedback | no-feedback | constant-drive")->capture_default_str();

    std::string figure_name;
    auto* figure = app.add_subcommand("figure", "reproduce one figure: fig2 ... fig7");
    figure->add_option("name", figure_name, "figure name")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }
    if (*workers_opt) opt.workers = workers;

    Session s(opt, out, err);
    try {
        s.load();
        if (*check) return cmd_check(s);
        if (*evolve) return cmd_evolve(s, ev);
        if (*optimal) return cmd_optimal(s, optimal_out);
        if (*sweep1) return cmd_sweep1d(s, mode1, ratio);
        if (*sweep2) return cmd_sweep2d(s, mode2);
        return cmd_figure(s, figure_name);
    } catch (const Failure& f) {
        err << "magnoblock: " << f.message << '\n';
        return f.code;
    } catch (const ConfigError& e) {
        err << "magnoblock: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "magnoblock: " << e.what() << '\n';
        return kRuntime;
    }
}

} // namespace magnoblock::cli
