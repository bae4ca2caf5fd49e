#pragma once

#include <optional>
#include <utility>

#include "magnoblock/errors.hpp"
#include "magnoblock/params.hpp"

namespace magnoblock {

/// Weak-drive steady state: C000 = 1, first-order amplitudes from the 2x2 block,
/// second-order amplitudes from a 6x6 block sourced by the first order.
struct SteadyAmplitudes {
    cplx c100, c010, c001;
    cplx c110, c101, c011, c200, c020, c002;

    double residual = 0.0;          // max |row residual|, rad/s
    double relative_residual = 0.0; // residual / largest term magnitude of any row
    double largest_coefficient = 0.0;

    /// A second-order amplitude exceeds 0.1 x the largest first-order one.
    bool hierarchy_violated = false;
    /// Delta_mech == 0 leaves C001 and C002 undetermined; both are reported as 0.
    bool phonon_indeterminate = false;
};

struct OptimalDrive {
    Phase phi_star;
    double e_star = 0.0; // rad/s, >= 0
};

class FeedbackError : public Error {
public:
    enum class Kind { DegenerateDetuning, NegativeDrive, InvalidPhase, NoCoupling, ScanFailed };
    FeedbackError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Phase with tan(phi) = -Delta_r / Delta_i on the branch that makes E* >= 0.
/// Throws FeedbackError::DegenerateDetuning when Delta_r = Delta_i = 0.
Phase optimal_phase(const Detunings& det);

/// Real drive strength that nulls C200 for feedback phase `phi`:
/// (Omega mu / g_mc) (Delta_r sin phi - Delta_i cos phi).
/// The imaginary part (Omega mu / g_mc)(Delta_r cos phi + Delta_i sin phi) must vanish
/// to 1e-9 relative (InvalidPhase), and a negative value means the other branch
/// (NegativeDrive).
double optimal_E(const SystemParams& params, const Detunings& det, double phi);

OptimalDrive optimal_drive(const SystemParams& params);

/// Throws SingularSystemError for a singular first- or second-order block.
SteadyAmplitudes steady_amplitudes(const SystemParams& params, const Detunings& det);

struct RootCheck {
    double e_root = 0.0;      // rad/s
    double e_formula = 0.0;   // rad/s
    double formula_gap = 0.0; // |e_root - e_formula| / e_formula
    double c200_at_root = 0.0;
};

/// Locates the real E minimizing |C200| of steady_amplitudes with the given phase by
/// a uniform scan followed by golden-section refinement, and compares it with the
/// closed form. The default bracket is [0, 10 * E_formula]. A minimum on the
/// bracket edge throws FeedbackError::ScanFailed.
RootCheck c200_root_check(const SystemParams& params, const Detunings& det, double phi,
                          std::optional<std::pair<double, double>> bracket = std::nullopt);

} // namespace magnoblock
