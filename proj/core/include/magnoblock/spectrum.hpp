#pragma once

#include <optional>
#include <vector>

#include "magnoblock/generator.hpp"

namespace magnoblock {

/// Threshold below which a decay-rate spread is not considered stiff.
inline constexpr double kStiffnessNoticeThreshold = 1e3;

struct StiffnessReport {
    /// max|Re lambda| / min|Re lambda| over eigenvalues of -iM with Re lambda != 0;
    /// empty when the spectrum is purely imaginary ("not stiff by this measure").
    std::optional<double> ratio;
    double fastest_decay = 0.0; // max |Re lambda|
    double slowest_decay = 0.0; // min nonzero |Re lambda|
    std::vector<cplx> eigenvalues;

    bool stiff() const { return ratio && *ratio >= kStiffnessNoticeThreshold; }
};

StiffnessReport stiffness_ratio(const Generator& gen);

} // namespace magnoblock
