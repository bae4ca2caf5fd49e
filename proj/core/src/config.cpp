#include "magnoblock/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "magnoblock/errors.hpp"

namespace magnoblock {

using nlohmann::json;

namespace {

struct FreqKey {
    const char* key;
    AngularFrequency SystemParams::*field;
};

constexpr FreqKey kFreqKeys[] = {
    {"omega_c_hz", &SystemParams::omega_c},
    {"omega_m_hz", &SystemParams::omega_m},
    {"omega_mech_hz", &SystemParams::omega_mech},
    {"kappa_c_hz", &SystemParams::kappa_c},
    {"kappa_m_hz", &SystemParams::kappa_m},
    {"kappa_mech_hz", &SystemParams::kappa_mech},
    {"g_mc_hz", &SystemParams::g_mc},
    {"g_md_hz", &SystemParams::g_md},
    {"omega_drive_hz", &SystemParams::omega_drive},
    {"drive_E_hz", &SystemParams::drive_E},
    {"feedback_amp_hz", &SystemParams::feedback_amp},
};

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError("config: '" + where + "' must be a number");
    return j.get<double>();
}

std::size_t count(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 0)
        throw ConfigError("config: '" + where + "' must be a non-negative integer");
    return j.get<std::size_t>();
}

void read_integrator(const json& j, RadauConfig& r) {
    if (!j.is_object()) throw ConfigError("config: 'integrator' must be an object");
    for (const auto& [k, v] : j.items()) {
        const std::string where = "integrator." + k;
        if (k == "rel_tol") r.rel_tol = number(v, where);
        else if (k == "abs_tol") r.abs_tol = number(v, where);
        else if (k == "h_init_s") r.h_init = number(v, where);
        else if (k == "h_min_s") r.h_min = number(v, where);
        else if (k == "h_max_s") r.h_max = number(v, where);
        else if (k == "max_steps") r.max_steps = count(v, where);
        else throw ConfigError("config: unknown key '" + where + "'");
    }
    if (auto bad = r.check()) throw ConfigError("config: integrator: " + *bad);
}

void read_sweep(const json& j, SweepSettings& s) {
    if (!j.is_object()) throw ConfigError("config: 'sweep' must be an object");
    for (const auto& [k, v] : j.items()) {
        const std::string where = "sweep." + k;
        if (k == "omega0_range") {
            if (!v.is_string() || (v != "model" && v != "results"))
                throw ConfigError("config: 'sweep.omega0_range' must be \"model\" or \"results\"");
            s.omega0_range = v.get<std::string>();
        } else if (k == "omega0_points") s.omega0_points = count(v, where);
        else if (k == "omega_m_ratio_min") s.omega_m_ratio_min = number(v, where);
        else if (k == "omega_m_ratio_max") s.omega_m_ratio_max = number(v, where);
        else if (k == "omega_m_ratio_points") s.omega_m_ratio_points = count(v, where);
        else if (k == "constant_phi") s.constant_phi = Phase(number(v, where));
        else if (k == "constant_E_hz") s.constant_E = AngularFrequency::from_hz(number(v, where));
        else if (k == "horizon_s") s.horizon_s = number(v, where);
        else if (k == "samples") s.samples = count(v, where);
        else if (k == "comparison_omega_m_ratio") s.comparison_omega_m_ratio = number(v, where);
        else if (k == "slice_ratios") {
            if (!v.is_array()) throw ConfigError("config: 'sweep.slice_ratios' must be an array");
            s.slice_ratios.clear();
            for (const auto& x : v) s.slice_ratios.push_back(number(x, where));
        } else throw ConfigError("config: unknown key '" + where + "'");
    }
    if (s.omega0_points == 0 || s.omega_m_ratio_points == 0)
        throw ConfigError("config: sweep grids need at least one point");
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
    if (blank) return cfg;

    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");

    for (const auto& [k, v] : j.items()) {
        bool handled = false;
        for (const auto& fk : kFreqKeys) {
            if (k == fk.key) {
                cfg.params.*fk.field = AngularFrequency::from_hz(number(v, k));
                handled = true;
                break;
            }
        }
        if (handled) continue;
        if (k == "phi") cfg.params.phi = Phase(number(v, k));
        else if (k == "temperature_k") cfg.params.temperature = number(v, k);
        else if (k == "integrator") read_integrator(v, cfg.integrator);
        else if (k == "sweep") read_sweep(v, cfg.sweep);
        else throw ConfigError("config: unknown key '" + k + "'");
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_json(const RunConfig& cfg, int indent) {
    json j = json::object();
    for (const auto& fk : kFreqKeys) j[fk.key] = (cfg.params.*fk.field).hz();
    j["phi"] = cfg.params.phi.radians();
    j["temperature_k"] = cfg.params.temperature;
    j["integrator"] = {
        {"rel_tol", cfg.integrator.rel_tol}, {"abs_tol", cfg.integrator.abs_tol},
        {"h_init_s", cfg.integrator.h_init}, {"h_min_s", cfg.integrator.h_min},
        {"h_max_s", cfg.integrator.h_max},   {"max_steps", cfg.integrator.max_steps},
    };
    const auto& s = cfg.sweep;
    j["sweep"] = {
        {"omega0_range", s.omega0_range},
        {"omega0_points", s.omega0_points},
        {"omega_m_ratio_min", s.omega_m_ratio_min},
        {"omega_m_ratio_max", s.omega_m_ratio_max},
        {"omega_m_ratio_points", s.omega_m_ratio_points},
        {"constant_phi", s.constant_phi.radians()},
        {"constant_E_hz", s.constant_E.hz()},
        {"horizon_s", s.horizon_s},
        {"samples", s.samples},
        {"slice_ratios", s.slice_ratios},
        {"comparison_omega_m_ratio", s.comparison_omega_m_ratio},
    };
    return j.dump(indent);
}

} // namespace magnoblock
