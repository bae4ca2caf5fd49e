#include "magnoblock/units.hpp"

namespace magnoblock {

double Phase::reduce(double radians) {
    if (!std::isfinite(radians)) return radians;
    constexpr double pi = std::numbers::pi;
    if (radians > -pi && radians <= pi) return radians;
    double r = std::remainder(radians, kTwoPi); // in [-pi, pi]
    if (r <= -pi) r += kTwoPi;
    return r;
}

} // namespace magnoblock
