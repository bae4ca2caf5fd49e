#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "magnoblock/expm.hpp"
#include "magnoblock/observables.hpp"
#include "magnoblock/steady.hpp"
#include "magnoblock/sweep.hpp"
#include "support.hpp"

using namespace magnoblock;

namespace {
constexpr double pi = std::numbers::pi;
auto hz(double v) { return AngularFrequency::from_hz(v); }

SystemParams at(double x_mech) {
    SystemParams p = SystemParams::defaults();
    p.omega_drive = hz(p.omega_c.hz() + x_mech * p.omega_mech.hz());
    return p;
}
} // namespace

TEST_SUITE("steady-feedback") {

TEST_CASE("optimal drive at zero magnon detuning") {
    const OptimalDrive opt = optimal_drive(SystemParams::defaults());
    CHECK(opt.phi_star.radians() == doctest::Approx(pi));
    CHECK(opt.e_star == doctest::Approx(2 * pi * 156.25).epsilon(1e-12));
    const SystemParams p = SystemParams::defaults();
    const double closed = p.feedback_amp.rad_per_s() * p.kappa_m.rad_per_s() / (2 * p.g_mc.rad_per_s());
    CHECK(opt.e_star == doctest::Approx(closed).epsilon(1e-12));
}

TEST_CASE("phase constraint and sign on the grid") {
    for (AngularFrequency w0 : default_omega0_grid(SystemParams::defaults())) {
        SystemParams p = SystemParams::defaults();
        p.omega_drive = w0;
        const Detunings d = compute_detunings(p);
        const OptimalDrive opt = optimal_drive(p);
        const double phi = opt.phi_star.radians();
        CHECK(std::abs(d.delta_r * std::cos(phi) + d.delta_i * std::sin(phi)) / std::abs(d.delta_m) < 1e-12);
        CHECK(opt.e_star >= 0.0);
        CHECK(phi > -pi);
        CHECK(phi <= pi);
    }
}

TEST_CASE("phase symmetry under Delta_r -> -Delta_r") {
    for (double x : {0.3, 1.0, 1.7}) {
        const double a = optimal_drive(at(x)).phi_star.radians();
        const double b = optimal_drive(at(-x)).phi_star.radians();
        CHECK(std::tan(a) == doctest::Approx(-std::tan(b)).epsilon(1e-9));
    }
}

TEST_CASE("degenerate and invalid phases") {
    SystemParams p = SystemParams::defaults();
    p.kappa_m = hz(0.0);
    try {
        optimal_drive(p);
        FAIL("expected an exception");
    } catch (const FeedbackError& e) {
        CHECK(e.kind() == FeedbackError::Kind::DegenerateDetuning);
    }

    const Detunings d = compute_detunings(at(-1.0));
    const double phi = optimal_phase(d).radians();
    try {
        optimal_E(at(-1.0), d, phi + pi);
        FAIL("expected an exception");
    } catch (const FeedbackError& e) {
        CHECK(e.kind() == FeedbackError::Kind::NegativeDrive);
    }
    try {
        optimal_E(at(-1.0), d, phi + 0.5);
        FAIL("expected an exception");
    } catch (const FeedbackError& e) {
        CHECK(e.kind() == FeedbackError::Kind::InvalidPhase);
    }
}

TEST_CASE("steady residual on random parameter sets") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const SystemParams p = testing::random_params(rng);
        const SteadyAmplitudes s = steady_amplitudes(p, compute_detunings(p));
        CAPTURE(i);
        CHECK(s.relative_residual < 1e-10);
        CHECK(s.residual < 1e-10 * std::max(1.0, s.largest_coefficient));
        CHECK(s.c001 == cplx(0.0, 0.0));
        CHECK(s.c002 == cplx(0.0, 0.0));
    }
}

TEST_CASE("optimal drive nulls C200 at the lower sideband") {
    SystemParams p = at(-1.0);
    const OptimalDrive opt = optimal_drive(p);
    p.phi = opt.phi_star;
    p.drive_E = hz(opt.e_star / (2 * pi));
    const SteadyAmplitudes s = steady_amplitudes(p, compute_detunings(p));
    const double first = std::max(std::abs(s.c100), std::abs(s.c010));
    CHECK(std::abs(s.c200) / (first * first) < 1e-3);
}

TEST_CASE("steady state matches the long-time integration without magnomechanics") {
    for (double x : {-1.0, 0.0, 0.5}) {
        SystemParams p = at(x);
        p.g_md = hz(0.0);
        const OptimalDrive opt = optimal_drive(p);
        p.phi = opt.phi_star;
        p.drive_E = AngularFrequency::from_rad_per_s(opt.e_star);
        const SteadyAmplitudes s = steady_amplitudes(p, compute_detunings(p));
        const StateVector st = expm_propagate(build_generator(p), StateVector::vacuum(), default_horizon(p));
        const cplx c010 = st[BasisIndex::of(0, 1, 0)] / st[0];
        const cplx c100 = st[BasisIndex::of(1, 0, 0)] / st[0];
        CAPTURE(x);
        CHECK(std::abs(c010 - s.c010) < 1e-4 * std::abs(s.c010));
        CHECK(std::abs(c100 - s.c100) < 1e-3 * std::abs(s.c010));
    }
}

TEST_CASE("magnomechanical back-action is outside the closed hierarchy") {
    // C011 is fed at first order through g_md and pushes C100 away from zero.
    SystemParams p = at(0.0);
    const OptimalDrive opt = optimal_drive(p);
    p.phi = opt.phi_star;
    p.drive_E = AngularFrequency::from_rad_per_s(opt.e_star);
    const SteadyAmplitudes s = steady_amplitudes(p, compute_detunings(p));
    const StateVector st = expm_propagate(build_generator(p), StateVector::vacuum(), default_horizon(p));
    CHECK(std::abs(s.c100) < 1e-15);
    CHECK(std::abs(st[BasisIndex::of(1, 0, 0)] / st[0]) > 0.1 * std::abs(s.c010));
}

TEST_CASE("root check at zero magnon detuning") {
    const SystemParams p = SystemParams::defaults();
    const Detunings d = compute_detunings(p);
    const RootCheck rc = c200_root_check(p, d, pi);
    CHECK(rc.e_formula == doctest::Approx(2 * pi * 156.25).epsilon(1e-12));
    CHECK(rc.e_root > 0.0);
    CHECK(rc.formula_gap >= 0.0);
    CHECK(rc.formula_gap < 1.0);
    const SteadyAmplitudes s = steady_amplitudes(p, d);
    CHECK(rc.c200_at_root < 1e-12 * std::norm(s.c010));
}

TEST_CASE("root check without feedback returns no root") {
    SystemParams p = SystemParams::defaults();
    p.feedback_amp = hz(0.0);
    const RootCheck rc = c200_root_check(p, compute_detunings(p), pi);
    CHECK(rc.e_formula == 0.0);
    CHECK(rc.e_root == 0.0);
}

TEST_CASE("singular first-order block") {
    SystemParams p = SystemParams::defaults();
    p.kappa_c = p.kappa_m = hz(0.0);
    p.omega_drive = p.omega_c - p.g_mc; // Delta_c = Delta_m = g_mc
    CHECK_THROWS_AS(steady_amplitudes(p, compute_detunings(p)), SingularSystemError);
}

TEST_CASE("phonon-free limit") {
    SystemParams p = SystemParams::defaults();
    p.omega_mech = hz(0.0);
    p.kappa_mech = hz(0.0);
    const SteadyAmplitudes s = steady_amplitudes(p, compute_detunings(p));
    CHECK(s.phonon_indeterminate);
    CHECK(s.c002 == cplx(0.0, 0.0));
}

} // TEST_SUITE steady-feedback

TEST_SUITE("observables") {

TEST_CASE("single photon") {
    const PhotonStats st = g2_zero(StateVector::basis_state(BasisIndex::of(1, 0, 0)));
    CHECK(st.n_photon == 1.0);
    REQUIRE(st.g2.has_value());
    CHECK(*st.g2 == 0.0);
    CHECK(*st.log10_g2 == doctest::Approx(-16.0));
}

TEST_CASE("vacuum is undefined") {
    const PhotonStats st = g2_zero(StateVector::vacuum());
    CHECK(st.n_photon == 0.0);
    CHECK_FALSE(st.g2.has_value());
    CHECK_FALSE(st.log10_g2.has_value());
}

TEST_CASE("coherent-like pattern") {
    const double eps = 1e-3;
    StateVector s = StateVector::vacuum();
    s[BasisIndex::of(1, 0, 0)] = eps;
    s[BasisIndex::of(2, 0, 0)] = eps * eps / std::sqrt(2.0);
    CHECK(*g2_zero(s).g2 == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("magnon number") {
    CHECK(magnon_number(StateVector::basis_state(BasisIndex::of(0, 1, 0))) == 1.0);
    CHECK(magnon_number(StateVector::basis_state(BasisIndex::of(0, 2, 0))) == 2.0);
    CHECK(magnon_number(StateVector::vacuum()) == 0.0);
}

TEST_CASE("global phase invariance and two-amplitude family") {
    StateVector s = StateVector::vacuum();
    s[BasisIndex::of(1, 0, 0)] = cplx(0.3, 0.1);
    s[BasisIndex::of(2, 0, 0)] = cplx(0.05, -0.02);
    s[BasisIndex::of(1, 1, 0)] = cplx(0.01, 0.0);
    const PhotonStats a = g2_zero(s);
    StateVector r(s.amplitudes() * std::polar(1.0, 1.234));
    const PhotonStats b = g2_zero(r);
    CHECK(b.n_photon == doctest::Approx(a.n_photon).epsilon(1e-14));
    CHECK(*b.g2 == doctest::Approx(*a.g2).epsilon(1e-14));

    double prev = -1.0;
    for (double c200 = 0.0; c200 < 0.7; c200 += 0.05) {
        StateVector t;
        t[BasisIndex::of(1, 0, 0)] = 1.0;
        t[BasisIndex::of(2, 0, 0)] = c200;
        const double g2 = *g2_zero(t).g2;
        CHECK(g2 == doctest::Approx(2 * c200 * c200 / std::pow(1 + 2 * c200 * c200, 2)));
        CHECK(g2 >= 0.0);
        CHECK(g2 > prev);
        prev = g2;
    }
}

TEST_CASE("floor and mean") {
    CHECK(log10_floored(0.0) == -16.0);
    CHECK(log10_floored(1e-20) == -16.0);
    CHECK(log10_floored(1e-3) == doctest::Approx(-3.0));
    std::vector<StateVector> v{StateVector::vacuum(), StateVector::basis_state(BasisIndex::of(1, 0, 0))};
    CHECK(*mean_g2(v) == 0.0);
    std::vector<StateVector> dark{StateVector::vacuum()};
    CHECK_FALSE(mean_g2(dark).has_value());
}

} // TEST_SUITE observables
