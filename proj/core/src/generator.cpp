#include "magnoblock/generator.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace magnoblock {

Generator build_generator(const SystemParams& p) {
    using namespace idx;
    const Detunings d = compute_detunings(p);
    const double fb = p.feedback_amp.rad_per_s();
    const double E = p.drive_E.rad_per_s();
    const double g = p.g_mc.rad_per_s();
    const double gmd = p.g_md.rad_per_s();
    const double phi = p.phi.radians();
    const double s2 = std::numbers::sqrt2;
    const cplx up = fb * std::polar(1.0, phi);    // Omega mu e^{+i phi}, raises photon number
    const cplx down = fb * std::polar(1.0, -phi); // Omega mu e^{-i phi}, lowers photon number
    const cplx iE{0.0, E};

    Generator gen;
    auto& M = gen.entries;

    M(k000, k100) = down;
    M(k000, k010) = -iE;

    M(k100, k000) = up;
    M(k100, k100) = d.delta_c;
    M(k100, k010) = g;
    M(k100, k110) = -iE;
    M(k100, k200) = down * s2;

    M(k010, k000) = iE;
    M(k010, k100) = g;
    M(k010, k010) = d.delta_m;
    M(k010, k110) = down;
    M(k010, k011) = gmd;
    M(k010, k020) = -iE * s2;

    M(k001, k001) = d.delta_mech;
    M(k001, k101) = down;
    M(k001, k011) = -iE;

    M(k110, k100) = iE;
    M(k110, k010) = up;
    M(k110, k110) = d.delta_c + d.delta_m;
    M(k110, k200) = g * s2;
    M(k110, k020) = g * s2;

    M(k101, k001) = up;
    M(k101, k101) = d.delta_c + d.delta_mech;
    M(k101, k011) = g;

    M(k011, k010) = gmd;
    M(k011, k001) = iE;
    M(k011, k101) = g;
    M(k011, k011) = d.delta_m + d.delta_mech;

    M(k200, k100) = up * s2;
    M(k200, k110) = g * s2;
    M(k200, k200) = 2.0 * d.delta_c;

    M(k020, k010) = iE * s2;
    M(k020, k110) = g * s2;
    M(k020, k020) = 2.0 * d.delta_m;

    M(k002, k002) = 2.0 * d.delta_mech;

    gen.params_fingerprint = p.fingerprint();
    return gen;
}

Generator lossless_part(const Generator& gen) {
    Generator out = gen;
    for (Eigen::Index k = 0; k < out.entries.rows(); ++k)
        out.entries(k, k) = out.entries(k, k).real();
    return out;
}

void write_generator_csv(std::ostream& os, const Generator& gen) {
    os << "row,col,re,im\n";
    char buf[96];
    for (Eigen::Index r = 0; r < gen.entries.rows(); ++r) {
        for (Eigen::Index c = 0; c < gen.entries.cols(); ++c) {
            const cplx v = gen.entries(r, c);
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", static_cast<int>(r),
                          static_cast<int>(c), v.real(), v.imag());
            os << buf;
        }
    }
}

} // namespace magnoblock
