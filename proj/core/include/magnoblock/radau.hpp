#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "magnoblock/basis.hpp"
#include "magnoblock/errors.hpp"
#include "magnoblock/generator.hpp"

namespace magnoblock {

struct RadauConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double h_init = 1e-10; // s
    double h_min = 1e-18;  // s
    double h_max = 1e-6;   // s
    std::size_t max_steps = 2'000'000;

    /// Empty when the invariants hold, otherwise a description of the first violation.
    std::optional<std::string> check() const;
};

struct StepStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t factorizations = 0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    StepStats step_stats;

    const StateVector& final_state() const { return states.back(); }
};

class IntegrationError : public Error {
public:
    enum class Kind { StepUnderflow, MaxSteps, NonFinite, InvalidArgument };

    IntegrationError(Kind kind, double time_reached, const std::string& what)
        : Error(what), kind_(kind), time_(time_reached) {}

    Kind kind() const { return kind_; }
    double time_reached() const { return time_; }

private:
    Kind kind_;
    double time_;
};

/// Three-stage Radau IIA (order 5) for the linear system dC/dt = -i M C.
///
/// Because the right-hand side is linear, the stage equations reduce to one
/// 30x30 complex linear system (I - h A (x) J) Z = h (c (x) J y0) with
/// J = -iM. Z is linear in y0, so for a given h the solve is applied once to the
/// columns of c (x) hJ; a step is then y1 = (I + S) y0 with S the last stage block,
/// and the embedded error estimate is another fixed 10x10 map of y0. Both are
/// rebuilt only when h changes. The instance owns that workspace: use one
/// integrator per thread.
class RadauIntegrator {
public:
    RadauIntegrator(const Generator& gen, RadauConfig cfg = {});

    /// Adaptive integration from t = 0 to t_end. Samples are recorded at t = 0,
    /// every `sample_every` seconds, and at t_end.
    Trajectory evolve(const StateVector& initial, double t_end,
                      std::optional<double> sample_every = std::nullopt);

    /// Continues an existing trajectory to `t_end`, sampling on the same cadence.
    void extend(Trajectory& traj, double t_end, double sample_every);

    /// Fixed step size h (adjusted to t_end / round(t_end / h)).
    StateVector fixed_step(const StateVector& initial, double t_end, double h);

    const RadauConfig& config() const { return cfg_; }

private:
    using StageMatrix = Eigen::Matrix<cplx, 30, 30>;

    /// Makes maps_[current_] hold the maps for h; returns true if they were rebuilt.
    bool factorize(double h);
    double error_norm(const AmplitudeVector& e, const AmplitudeVector& y0,
                      const AmplitudeVector& y1) const;
    void integrate_segment(AmplitudeVector& y, double& t, double t_target, StepStats& stats);

    GeneratorMatrix jac_; // -iM
    RadauConfig cfg_;

    struct StepMaps {
        double h = -1.0;
        // Rows 0-9: last-stage increment Z3; rows 10-19: first error estimate.
        // Held as real and imaginary parts so the per-step product is real arithmetic.
        Eigen::Matrix<double, 20, 10> step_err_re;
        Eigen::Matrix<double, 20, 10> step_err_im;
        GeneratorMatrix err_fix; // (I - h gamma0 J)^-1 h gamma0 J, for the filtered estimate
    };
    // Two slots: the running step size and the shortened step that lands on a sample.
    std::array<StepMaps, 2> maps_;
    std::size_t current_ = 0;
    double h_next_ = 0.0;
    bool first_step_ = true;
    bool last_rejected_ = false;
};

Trajectory radau_evolve(const Generator& gen, const StateVector& initial, double t_end,
                        const RadauConfig& cfg, std::optional<double> sample_every = std::nullopt);

StateVector radau_fixed_step(const Generator& gen, const StateVector& initial, double t_end,
                             double h);

} // namespace magnoblock
