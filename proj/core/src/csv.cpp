#include "magnoblock/csv.hpp"

#include "magnoblock/observables.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <ostream>

namespace magnoblock {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", x);
    return buf;
}

std::string fmt(const std::optional<double>& x, const char* missing = "undefined") {
    return x ? fmt(*x) : missing;
}

std::string clean(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

} // namespace

std::string provenance_line(const std::string& timestamp) {
    return "# magnoblock " MAGNOBLOCK_VERSION " generated " + timestamp;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::string& provenance) {
    os << provenance << '\n' << "t_s";
    for (const auto& occ : BasisIndex::kTable) {
        const std::string label = "C" + std::to_string(occ[0]) + std::to_string(occ[1]) + std::to_string(occ[2]);
        os << ',' << label << "_re," << label << "_im";
    }
    os << ",norm2,n_photon\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        os << fmt(traj.times[i]);
        const auto& s = traj.states[i];
        for (std::size_t k = 0; k < kBasisSize; ++k) os << ',' << fmt(s[k].real()) << ',' << fmt(s[k].imag());
        os << ',' << fmt(s.norm2()) << ',' << fmt(g2_zero(s).n_photon) << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records,
                     const std::string& provenance) {
    os << provenance << '\n'
       << "omega0_hz,omega_m_over_omega_c,mode,phi_used_rad,E_used_hz,g2_final,g2_avg,"
          "log10_g2_avg,n_photon,steady_reached,hierarchy_warning,error\n";
    for (const auto& r : records) {
        os << fmt(r.omega0_hz) << ',' << fmt(r.omega_m_ratio) << ',' << to_string(r.mode) << ','
           << fmt(r.phi_used, "unused") << ',' << fmt(r.E_used.hz()) << ',' << fmt(r.g2_final) << ','
           << fmt(r.g2_avg) << ',' << fmt(r.log10_g2_avg) << ',' << fmt(r.n_photon) << ','
           << (r.steady_reached ? "true" : "false") << ',' << (r.hierarchy_warning ? "true" : "false")
           << ',' << clean(r.error) << '\n';
    }
}

void write_matrix_csv(std::ostream& os, const SweepGrid& grid, const std::string& provenance) {
    os << provenance << '\n' << "omega_m_over_omega_c";
    for (double w : grid.omega0_hz) os << ',' << fmt(w);
    os << '\n';
    for (std::size_t r = 0; r < grid.omega_m_ratios.size(); ++r) {
        os << fmt(grid.omega_m_ratios[r]);
        for (std::size_t c = 0; c < grid.omega0_hz.size(); ++c) os << ',' << fmt(grid.at(r, c).log10_g2_avg);
        os << '\n';
    }
}

void write_locus_csv(std::ostream& os, const std::vector<LocusPoint>& locus,
                     const std::string& provenance) {
    os << provenance << '\n' << "phi_rad,E_hz,omega0_hz\n";
    for (const auto& p : locus) {
        std::optional<double> e_hz;
        if (p.e_star) e_hz = AngularFrequency::from_rad_per_s(*p.e_star).hz();
        os << fmt(p.phi_star) << ',' << fmt(e_hz) << ',' << fmt(p.omega0_hz) << '\n';
    }
}

void write_paired_csv(std::ostream& os, const std::vector<PairedRecord>& pairs,
                      const std::string& provenance) {
    os << provenance << '\n'
       << "omega0_hz,log10_g2_avg_optimal,log10_g2_avg_constant,phi_optimal_rad,E_optimal_hz,"
          "phi_constant_rad,E_constant_hz\n";
    for (const auto& p : pairs) {
        os << fmt(p.optimal.omega0_hz) << ',' << fmt(p.optimal.log10_g2_avg) << ','
           << fmt(p.constant.log10_g2_avg) << ',' << fmt(p.optimal.phi_used, "unused") << ','
           << fmt(p.optimal.E_used.hz()) << ',' << fmt(p.constant.phi_used, "unused") << ','
           << fmt(p.constant.E_used.hz()) << '\n';
    }
}

} // namespace magnoblock
