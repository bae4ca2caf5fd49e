#include "magnoblock/radau.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace magnoblock {

namespace {

// Radau IIA, s = 3, collocation at c = ((4 - sqrt6)/10, (4 + sqrt6)/10, 1).
constexpr double kSqrt6 = 2.449489742783178098197284074705891391965947480656670128432692567;

constexpr double kA[3][3] = {
    {(88.0 - 7.0 * kSqrt6) / 360.0, (296.0 - 169.0 * kSqrt6) / 1800.0, (-2.0 + 3.0 * kSqrt6) / 225.0},
    {(296.0 + 169.0 * kSqrt6) / 1800.0, (88.0 + 7.0 * kSqrt6) / 360.0, (-2.0 - 3.0 * kSqrt6) / 225.0},
    {(16.0 - kSqrt6) / 36.0, (16.0 + kSqrt6) / 36.0, 1.0 / 9.0},
};
constexpr double kC[3] = {(4.0 - kSqrt6) / 10.0, (4.0 + kSqrt6) / 10.0, 1.0};

// Embedded error estimate: real eigenvalue of A is gamma0 = 1/3.6378...;
// the weights combine the stage increments into an O(h^4) estimate.
constexpr double kGamma0 = 0.27488882959567734; // (6 + 81^(1/3) - 9^(1/3)) / 30
constexpr double kDD[3] = {-(13.0 + 7.0 * kSqrt6) / 3.0, (-13.0 + 7.0 * kSqrt6) / 3.0, -1.0 / 3.0};

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

std::string at_time(double t) {
    std::ostringstream os;
    os.precision(6);
    os << " at t = " << t << " s";
    return os.str();
}

} // namespace

std::optional<std::string> RadauConfig::check() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) return "tolerances must be > 0";
    if (!(h_min > 0.0)) return "h_min must be > 0";
    if (!(h_min <= h_init && h_init <= h_max)) return "need h_min <= h_init <= h_max";
    if (max_steps == 0) return "max_steps must be > 0";
    return std::nullopt;
}

RadauIntegrator::RadauIntegrator(const Generator& gen, RadauConfig cfg)
    : jac_(gen.entries * cplx{0.0, -1.0}), cfg_(cfg) {
    if (auto bad = cfg_.check())
        throw IntegrationError(IntegrationError::Kind::InvalidArgument, 0.0, "RadauConfig: " + *bad);
}

bool RadauIntegrator::factorize(double h) {
    if (maps_[current_].h == h) return false;
    if (maps_[1 - current_].h == h) {
        current_ = 1 - current_;
        return false;
    }
    current_ = 1 - current_;
    StepMaps& m = maps_[current_];
    StageMatrix k;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            auto block = k.block<10, 10>(10 * i, 10 * j);
            block = (-h * kA[i][j]) * jac_;
            if (i == j) block += GeneratorMatrix::Identity();
        }
    const GeneratorMatrix hj = h * jac_;
    Eigen::Matrix<cplx, 30, 10> rhs;
    for (int i = 0; i < 3; ++i) rhs.block<10, 10>(10 * i, 0) = kC[i] * hj;
    const Eigen::Matrix<cplx, 30, 10> g = Eigen::PartialPivLU<StageMatrix>(k).solve(rhs);

    const GeneratorMatrix f2 = kGamma0 * (kDD[0] * g.block<10, 10>(0, 0) +
                                          kDD[1] * g.block<10, 10>(10, 0) + kDD[2] * g.block<10, 10>(20, 0));
    Eigen::PartialPivLU<GeneratorMatrix> err_lu(GeneratorMatrix::Identity() - kGamma0 * hj);
    Eigen::Matrix<cplx, 20, 10> step_err;
    step_err.topRows<10>() = g.block<10, 10>(20, 0);
    step_err.bottomRows<10>() = err_lu.solve(kGamma0 * hj + f2);
    m.step_err_re = step_err.real();
    m.step_err_im = step_err.imag();
    m.err_fix = err_lu.solve(kGamma0 * hj);
    m.h = h;
    return true;
}

double RadauIntegrator::error_norm(const AmplitudeVector& e, const AmplitudeVector& y0,
                                   const AmplitudeVector& y1) const {
    double sum = 0.0;
    for (Eigen::Index k = 0; k < e.size(); ++k) {
        const double sc =
            cfg_.abs_tol + cfg_.rel_tol * std::sqrt(std::max(std::norm(y0(k)), std::norm(y1(k))));
        sum += std::norm(e(k)) / (sc * sc);
    }
    return std::sqrt(sum / static_cast<double>(e.size()));
}

void RadauIntegrator::integrate_segment(AmplitudeVector& y, double& t, double t_target,
                                        StepStats& stats) {
    using Kind = IntegrationError::Kind;
    while (t < t_target) {
        const double remaining = t_target - t;
        if (remaining <= 1e-14 * std::abs(t_target)) {
            t = t_target;
            break;
        }
        if (stats.accepted + stats.rejected >= cfg_.max_steps)
            throw IntegrationError(Kind::MaxSteps, t, "Radau: max_steps exceeded" + at_time(t));

        double h = std::min(h_next_, cfg_.h_max);
        const bool clamped = h >= remaining;
        if (clamped) h = remaining;
        if (h < cfg_.h_min && !clamped)
            throw IntegrationError(Kind::StepUnderflow, t, "Radau: step size underflow" + at_time(t));

        if (factorize(h)) ++stats.factorizations;
        const StepMaps& m = maps_[current_];

        double zr[20] = {}, zi[20] = {};
        for (int j = 0; j < 10; ++j) {
            const double yr = y(j).real(), yi = y(j).imag();
            const double* ar = m.step_err_re.col(j).data();
            const double* ai = m.step_err_im.col(j).data();
            for (int i = 0; i < 20; ++i) {
                zr[i] += ar[i] * yr - ai[i] * yi;
                zi[i] += ar[i] * yi + ai[i] * yr;
            }
        }
        AmplitudeVector y1, e;
        for (int i = 0; i < 10; ++i) {
            y1(i) = y(i) + cplx{zr[i], zi[i]};
            e(i) = cplx{zr[10 + i], zi[10 + i]};
        }
        if (!y1.allFinite())
            throw IntegrationError(Kind::NonFinite, t, "Radau: non-finite state" + at_time(t));

        double err = error_norm(e, y, y1);
        if (err >= 1.0 && (first_step_ || last_rejected_)) {
            // Second estimate filters out the stiff components.
            e += m.err_fix.lazyProduct(e);
            err = error_norm(e, y, y1);
        }
        err = std::max(err, 1e-10);

        double factor = std::clamp(kSafety / std::sqrt(std::sqrt(err)), kMinFactor, kMaxFactor);
        if (err < 1.0) {
            ++stats.accepted;
            first_step_ = false;
            if (last_rejected_) factor = std::min(factor, 1.0);
            last_rejected_ = false;
            y = y1;
            t = clamped ? t_target : t + h;
            double h_new = h * factor;
            if (factor >= 1.0 && factor <= 1.2) h_new = h; // keep the factorization
            h_next_ = clamped ? std::max(h_next_, h_new) : h_new;
        } else {
            ++stats.rejected;
            last_rejected_ = true;
            h_next_ = h * std::min(factor, 1.0);
        }
    }
}

Trajectory RadauIntegrator::evolve(const StateVector& initial, double t_end,
                                   std::optional<double> sample_every) {
    using Kind = IntegrationError::Kind;
    if (!(t_end > 0.0)) throw IntegrationError(Kind::InvalidArgument, 0.0, "Radau: t_end must be > 0");
    if (sample_every && !(*sample_every > 0.0))
        throw IntegrationError(Kind::InvalidArgument, 0.0, "Radau: sample_every must be > 0");
    if (!initial.is_finite())
        throw IntegrationError(Kind::NonFinite, 0.0, "Radau: non-finite initial state");

    first_step_ = true;
    last_rejected_ = false;
    h_next_ = cfg_.h_init;

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(initial);
    extend(traj, t_end, sample_every.value_or(t_end));
    return traj;
}

void RadauIntegrator::extend(Trajectory& traj, double t_end, double sample_every) {
    if (traj.times.empty())
        throw IntegrationError(IntegrationError::Kind::InvalidArgument, 0.0,
                               "Radau: cannot extend an empty trajectory");
    double t = traj.times.back();
    AmplitudeVector y = traj.states.back().amplitudes();
    if (h_next_ <= 0.0) h_next_ = cfg_.h_init;

    auto k = static_cast<long long>(std::floor(t / sample_every + 0.5)) + 1;
    while (true) {
        double target = static_cast<double>(k) * sample_every;
        const bool last = target >= t_end * (1.0 - 1e-12);
        if (last) target = t_end;
        if (target > t) {
            integrate_segment(y, t, target, traj.step_stats);
            traj.times.push_back(target);
            traj.states.emplace_back(y);
        }
        if (last) break;
        ++k;
    }
}

StateVector RadauIntegrator::fixed_step(const StateVector& initial, double t_end, double h) {
    using Kind = IntegrationError::Kind;
    if (!(h > 0.0) || !(t_end > 0.0))
        throw IntegrationError(Kind::InvalidArgument, 0.0, "Radau: h and t_end must be > 0");
    const double steps = std::round(t_end / h);
    if (steps < 1.0 || std::abs(steps * h - t_end) > 1e-6 * h)
        throw IntegrationError(Kind::InvalidArgument, 0.0, "Radau: h must divide t_end");
    const auto n = static_cast<long long>(steps);
    const double h_eff = t_end / steps;

    factorize(h_eff);
    const GeneratorMatrix step = maps_[current_].step_err_re.topRows<10>().cast<cplx>() +
                                 cplx{0.0, 1.0} * maps_[current_].step_err_im.topRows<10>().cast<cplx>();
    AmplitudeVector y = initial.amplitudes();
    for (long long i = 0; i < n; ++i) {
        const AmplitudeVector dy = step * y;
        y += dy;
        if (!y.allFinite())
            throw IntegrationError(Kind::NonFinite, static_cast<double>(i) * h_eff,
                                   "Radau: non-finite state");
    }
    return StateVector(y);
}

Trajectory radau_evolve(const Generator& gen, const StateVector& initial, double t_end,
                        const RadauConfig& cfg, std::optional<double> sample_every) {
    RadauIntegrator integrator(gen, cfg);
    return integrator.evolve(initial, t_end, sample_every);
}

StateVector radau_fixed_step(const Generator& gen, const StateVector& initial, double t_end,
                             double h) {
    RadauIntegrator integrator(gen);
    return integrator.fixed_step(initial, t_end, h);
}

} // namespace magnoblock
