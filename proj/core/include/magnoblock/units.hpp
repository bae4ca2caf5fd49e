#pragma once

#include <cmath>
#include <numbers>

namespace magnoblock {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angular frequency in rad/s.
///
/// The canonical stored quantity is the linear frequency in Hz; every read of
/// the angular value goes through `rad_per_s()`, which is the only place in the
/// code base that multiplies by 2*pi. Keeping Hz canonical makes config
/// snapshots round-trip bit-exactly.
class AngularFrequency {
public:
    constexpr AngularFrequency() = default;

    static AngularFrequency from_hz(double hz) { return AngularFrequency(hz); }
    static AngularFrequency from_rad_per_s(double w) { return AngularFrequency(w / kTwoPi); }

    double rad_per_s() const { return hz_ * kTwoPi; }
    constexpr double hz() const { return hz_; }

    bool is_finite() const { return std::isfinite(hz_); }

    friend constexpr bool operator==(AngularFrequency, AngularFrequency) = default;
    friend constexpr auto operator<=>(AngularFrequency a, AngularFrequency b) { return a.hz_ <=> b.hz_; }

    friend AngularFrequency operator+(AngularFrequency a, AngularFrequency b) { return from_hz(a.hz_ + b.hz_); }
    friend AngularFrequency operator-(AngularFrequency a, AngularFrequency b) { return from_hz(a.hz_ - b.hz_); }
    friend AngularFrequency operator*(double s, AngularFrequency a) { return from_hz(s * a.hz_); }

private:
    constexpr explicit AngularFrequency(double hz) : hz_(hz) {}
    double hz_ = 0.0;
};

/// Phase angle kept reduced to (-pi, pi].
class Phase {
public:
    constexpr Phase() = default;
    explicit Phase(double radians) : rad_(reduce(radians)) {}

    double radians() const { return rad_; }

    static double reduce(double radians);

    friend bool operator==(Phase, Phase) = default;

private:
    double rad_ = 0.0;
};

} // namespace magnoblock
