#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "magnoblock/radau.hpp"
#include "magnoblock/sweep.hpp"

namespace magnoblock {

/// Every CSV starts with one `# ...` provenance line (tool version and timestamp);
/// it is the only line that varies between identical runs.
std::string provenance_line(const std::string& timestamp);

/// t_s, re/im of the ten amplitudes in basis order, norm2 (23 columns).
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::string& provenance);

/// omega0_hz, omega_m_over_omega_c, mode, phi_used_rad, E_used_hz, g2_final, g2_avg,
/// log10_g2_avg, n_photon, steady_reached, hierarchy_warning, error
void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records,
                     const std::string& provenance);

/// Rows omega_m / omega_c, columns omega0_hz, values log10_g2_avg.
void write_matrix_csv(std::ostream& os, const SweepGrid& grid, const std::string& provenance);

/// phi_rad, E_hz, omega0_hz
void write_locus_csv(std::ostream& os, const std::vector<LocusPoint>& locus,
                     const std::string& provenance);

void write_paired_csv(std::ostream& os, const std::vector<PairedRecord>& pairs,
                      const std::string& provenance);

} // namespace magnoblock
