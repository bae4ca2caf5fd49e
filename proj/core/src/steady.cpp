#include "magnoblock/steady.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <Eigen/Core>
#include <Eigen/LU>

namespace magnoblock {

namespace {

constexpr double kSingularTol = 1e-14;

// Unknown order: C100, C010, C001 | C110, C101, C011, C200, C020, C002.
enum : Eigen::Index { u100, u010, u001, u110, u101, u011, u200, u020, u002 };

using Mat9 = Eigen::Matrix<cplx, 9, 9>;
using Vec9 = Eigen::Matrix<cplx, 9, 1>;

// Steady-state rows K x + b = 0 with C000 = 1 folded into b.
void steady_system(const SystemParams& p, const Detunings& d, Mat9& k, Vec9& b) {
    const double s2 = std::numbers::sqrt2;
    const cplx up = p.feedback_amp.rad_per_s() * std::polar(1.0, p.phi.radians());
    const cplx iE{0.0, p.drive_E.rad_per_s()};
    const double g = p.g_mc.rad_per_s();
    const double gmd = p.g_md.rad_per_s();

    k.setZero();
    b.setZero();

    b(u100) = up;
    k(u100, u100) = d.delta_c;
    k(u100, u010) = g;

    b(u010) = iE;
    k(u010, u100) = g;
    k(u010, u010) = d.delta_m;

    k(u001, u001) = d.delta_mech;

    k(u110, u100) = iE;
    k(u110, u010) = up;
    k(u110, u110) = d.delta_c + d.delta_m;
    k(u110, u200) = g * s2;
    k(u110, u020) = g * s2;

    // Feedback enters every row as Omega * mu, including this one.
    k(u101, u001) = up;
    k(u101, u101) = d.delta_c + d.delta_mech;
    k(u101, u011) = g;

    k(u011, u010) = gmd;
    k(u011, u001) = iE;
    k(u011, u101) = g;
    k(u011, u011) = d.delta_m + d.delta_mech;

    k(u200, u100) = up * s2;
    k(u200, u110) = g * s2;
    k(u200, u200) = 2.0 * d.delta_c;

    k(u020, u010) = iE * s2;
    k(u020, u110) = g * s2;
    k(u020, u020) = 2.0 * d.delta_m;

    k(u002, u002) = 2.0 * d.delta_mech;
}

// |det| against the Hadamard bound (product of row norms).
template <typename M>
double relative_determinant(const M& m, cplx det) {
    double bound = 1.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) bound *= m.row(r).norm();
    return bound > 0.0 ? std::abs(det) / bound : 0.0;
}

double c200_magnitude(SystemParams p, const Detunings& det, double e_rad) {
    p.drive_E = AngularFrequency::from_rad_per_s(e_rad);
    return std::abs(steady_amplitudes(p, det).c200);
}

} // namespace

Phase optimal_phase(const Detunings& det) {
    if (det.delta_r == 0.0 && det.delta_i == 0.0)
        throw FeedbackError(FeedbackError::Kind::DegenerateDetuning,
                            "optimal_phase: Delta_r = Delta_i = 0 leaves the phase unconstrained");
    Phase phi(std::atan2(-det.delta_r, det.delta_i));
    const double e_sign = det.delta_r * std::sin(phi.radians()) - det.delta_i * std::cos(phi.radians());
    if (e_sign < 0.0) phi = Phase(phi.radians() + std::numbers::pi);
    return phi;
}

double optimal_E(const SystemParams& params, const Detunings& det, double phi) {
    const double g = params.g_mc.rad_per_s();
    if (!(g > 0.0))
        throw FeedbackError(FeedbackError::Kind::NoCoupling, "optimal_E: g_mc must be > 0");
    const double scale = params.feedback_amp.rad_per_s() / g;
    const double re = scale * (det.delta_r * std::sin(phi) - det.delta_i * std::cos(phi));
    const double im = scale * (det.delta_r * std::cos(phi) + det.delta_i * std::sin(phi));
    if (std::abs(im) > 1e-9 * std::abs(re))
        throw FeedbackError(FeedbackError::Kind::InvalidPhase,
                            "optimal_E: phase does not make the drive strength real");
    if (re < 0.0)
        throw FeedbackError(FeedbackError::Kind::NegativeDrive,
                            "optimal_E: negative drive strength, phase is on the wrong branch");
    return re;
}

OptimalDrive optimal_drive(const SystemParams& params) {
    const Detunings det = compute_detunings(params);
    OptimalDrive out;
    out.phi_star = optimal_phase(det);
    out.e_star = optimal_E(params, det, out.phi_star.radians());
    return out;
}

SteadyAmplitudes steady_amplitudes(const SystemParams& params, const Detunings& det) {
    Mat9 k;
    Vec9 b;
    steady_system(params, det, k, b);

    SteadyAmplitudes out;
    const bool phonon_free = det.delta_mech == cplx{0.0, 0.0};
    out.phonon_indeterminate = phonon_free;

    Vec9 x = Vec9::Zero();

    const Eigen::Matrix<cplx, 2, 2> first = k.block<2, 2>(u100, u100);
    const cplx det1 = first.determinant();
    if (relative_determinant(first, det1) <= kSingularTol)
        throw SingularSystemError("steady_amplitudes: singular first-order block "
                                  "(Delta_c Delta_m - g_mc^2 = 0)",
                                  std::abs(det1));
    x.segment<2>(u100) = first.partialPivLu().solve(-b.segment<2>(u100));
    // Delta_mech C001 = 0 gives C001 = 0; with Delta_mech = 0 it is undetermined.
    x(u001) = 0.0;

    Eigen::Matrix<cplx, 6, 6> second = k.block<6, 6>(u110, u110);
    Eigen::Matrix<cplx, 6, 1> src = b.segment<6>(u110) + k.block<6, 3>(u110, u100) * x.head<3>();
    if (phonon_free) {
        second.row(u002 - u110).setZero();
        second(u002 - u110, u002 - u110) = 1.0;
        src(u002 - u110) = 0.0;
    }
    Eigen::PartialPivLU<Eigen::Matrix<cplx, 6, 6>> lu(second);
    const cplx det2 = lu.determinant();
    if (relative_determinant(second, det2) <= kSingularTol)
        throw SingularSystemError("steady_amplitudes: singular second-order block", std::abs(det2));
    x.segment<6>(u110) = lu.solve(-src);

    out.c100 = x(u100);
    out.c010 = x(u010);
    out.c001 = x(u001);
    out.c110 = x(u110);
    out.c101 = x(u101);
    out.c011 = x(u011);
    out.c200 = x(u200);
    out.c020 = x(u020);
    out.c002 = x(u002);

    Vec9 r = k * x + b;
    if (phonon_free) r(u001) = r(u002) = 0.0;
    double scale = 0.0;
    for (Eigen::Index i = 0; i < 9; ++i) {
        double terms = std::abs(b(i));
        for (Eigen::Index j = 0; j < 9; ++j) terms += std::abs(k(i, j) * x(j));
        scale = std::max(scale, terms);
    }
    out.residual = r.cwiseAbs().maxCoeff();
    out.relative_residual = scale > 0.0 ? out.residual / scale : out.residual;
    out.largest_coefficient = std::max(k.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());

    const double first_order = std::max(std::abs(out.c100), std::abs(out.c010));
    const double second_order = std::max({std::abs(out.c110), std::abs(out.c200), std::abs(out.c020)});
    out.hierarchy_violated = second_order > 0.1 * first_order;
    return out;
}

RootCheck c200_root_check(const SystemParams& params, const Detunings& det, double phi,
                          std::optional<std::pair<double, double>> bracket) {
    const double g = params.g_mc.rad_per_s();
    if (!(g > 0.0))
        throw FeedbackError(FeedbackError::Kind::NoCoupling, "c200_root_check: g_mc must be > 0");

    SystemParams p = params;
    p.phi = Phase(phi);
    const double fb = p.feedback_amp.rad_per_s();
    const double ph = p.phi.radians();
    RootCheck out;
    out.e_formula = fb / g * (det.delta_r * std::sin(ph) - det.delta_i * std::cos(ph));
    if (fb == 0.0 && !bracket) return out;

    const auto [lo, hi] = bracket.value_or(std::pair{0.0, 10.0 * std::abs(out.e_formula)});
    if (!(hi > lo))
        throw FeedbackError(FeedbackError::Kind::ScanFailed, "c200_root_check: empty bracket");

    constexpr int kScan = 400;
    std::array<double, kScan + 1> vals{};
    int best = 0;
    for (int i = 0; i <= kScan; ++i) {
        vals[i] = c200_magnitude(p, det, lo + (hi - lo) * i / kScan);
        if (vals[i] < vals[best]) best = i;
    }
    if (best == 0 || best == kScan) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "c200_root_check: no interior minimum of |C200| in E/2pi = [%.6g, %.6g] Hz",
                      lo / kTwoPi, hi / kTwoPi);
        throw FeedbackError(FeedbackError::Kind::ScanFailed, msg);
    }

    // Golden-section refinement on the two cells around the scan minimum.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo + (hi - lo) * (best - 1) / kScan;
    double c = lo + (hi - lo) * (best + 1) / kScan;
    double x1 = c - inv_phi * (c - a);
    double x2 = a + inv_phi * (c - a);
    double f1 = c200_magnitude(p, det, x1);
    double f2 = c200_magnitude(p, det, x2);
    const double target = 1e-10 * std::max(std::abs(out.e_formula), (hi - lo) / kScan);
    while (c - a > target) {
        if (f1 < f2) {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - inv_phi * (c - a);
            f1 = c200_magnitude(p, det, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (c - a);
            f2 = c200_magnitude(p, det, x2);
        }
    }
    out.e_root = 0.5 * (a + c);
    out.c200_at_root = c200_magnitude(p, det, out.e_root);
    out.formula_gap = out.e_formula != 0.0 ? std::abs(out.e_root - out.e_formula) / std::abs(out.e_formula)
                                           : std::abs(out.e_root);
    return out;
}

} // namespace magnoblock
