#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace circdens {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

//! An angle on the unit circle, stored as its canonical representative in
//! [0, 2*pi). Construct through Angle::wrap so the invariant always holds.
class Angle {
public:
    Angle() = default;

    //! Reduce an arbitrary finite value modulo 2*pi into [0, 2*pi).
    //! Values already in [0, 2*pi) pass through unchanged (reduction is
    //! idempotent; inputs just below 2*pi are kept, not snapped to 0).
    static Angle wrap(double radians) {
        if (!std::isfinite(radians)) {
            throw std::invalid_argument("Angle::wrap: non-finite angle");
        }
        double r = std::fmod(radians, two_pi);
        if (r < 0.0) r += two_pi;
        // fmod is exact, but the correction above may round up to 2*pi.
        if (r >= two_pi) r = 0.0;
        return Angle(r);
    }

    double radians() const { return rad_; }

    friend bool operator==(Angle a, Angle b) { return a.rad_ == b.rad_; }
    friend bool operator!=(Angle a, Angle b) { return a.rad_ != b.rad_; }
    friend bool operator<(Angle a, Angle b) { return a.rad_ < b.rad_; }
    friend bool operator<=(Angle a, Angle b) { return a.rad_ <= b.rad_; }
    friend bool operator>(Angle a, Angle b) { return a.rad_ > b.rad_; }
    friend bool operator>=(Angle a, Angle b) { return a.rad_ >= b.rad_; }

private:
    explicit Angle(double canonical) : rad_(canonical) {}
    double rad_ = 0.0;
};

inline Angle normalize_angle(double radians) { return Angle::wrap(radians); }

//! Closed oriented arc [l, u]: the points reached travelling anticlockwise
//! from l to u. The two endpoints must differ; [l, u] and [u, l] partition
//! the circle apart from the shared endpoints.
class Arc {
public:
    Arc(Angle l, Angle u) : l_(l), u_(u) {
        if (l == u) {
            throw std::invalid_argument("Arc: endpoints must differ");
        }
    }

    Angle lower() const { return l_; }
    Angle upper() const { return u_; }

private:
    Angle l_, u_;
};

//! Membership of x in the closed arc [l, u], endpoints included.
inline bool arc_contains(const Arc& arc, Angle x) {
    const double l = arc.lower().radians();
    const double u = arc.upper().radians();
    const double v = x.radians();
    if (l < u) return l <= v && v <= u;
    return v >= l || v <= u;  // wrap-around arc
}

//! Anticlockwise length of the arc, in (0, 2*pi).
//! length([l,u]) + length([u,l]) == 2*pi.
inline double arc_length(const Arc& arc) {
    const double d = arc.upper().radians() - arc.lower().radians();
    return d > 0.0 ? d : d + two_pi;
}

}  // namespace circdens
