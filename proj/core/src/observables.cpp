#include "magnoblock/observables.hpp"

#include <algorithm>
#include <cmath>

namespace magnoblock {

PhotonStats g2_zero(const StateVector& s) {
    using namespace idx;
    const double p200 = std::norm(s[k200]);
    PhotonStats out;
    out.n_photon = std::norm(s[k100]) + std::norm(s[k110]) + std::norm(s[k101]) + 2.0 * p200;
    if (out.n_photon > 0.0) {
        out.g2 = 2.0 * p200 / (out.n_photon * out.n_photon);
        out.log10_g2 = log10_floored(*out.g2);
    }
    return out;
}

double magnon_number(const StateVector& s) {
    using namespace idx;
    return std::norm(s[k010]) + std::norm(s[k110]) + std::norm(s[k011]) + 2.0 * std::norm(s[k020]);
}

double log10_floored(double g2) { return std::log10(std::max(g2, kG2Floor)); }

std::optional<double> mean_g2(std::span<const StateVector> states) {
    double sum = 0.0;
    int n = 0;
    for (const auto& s : states) {
        if (auto g = g2_zero(s).g2) {
            sum += *g;
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / n;
}

} // namespace magnoblock
