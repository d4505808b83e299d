#pragma once

#include <cmath>

#include "alfven/profiles.hpp"

namespace fixtures {

using alfven::RealPoly;
using alfven::profiles::BackgroundProfile;

inline BackgroundProfile still() { return BackgroundProfile(RealPoly{0.0}, RealPoly{0.0, 1.0}, 0.5); }
inline BackgroundProfile linear() { return BackgroundProfile(RealPoly{0.0, 0.5}, RealPoly{0.0, 1.0}, 0.4); }
inline BackgroundProfile quadratic_b() {
    return BackgroundProfile(RealPoly{0.0}, RealPoly{0.0, 1.0, 0.2}, 0.5);
}
inline BackgroundProfile scaled(double k, double k0) {
    return BackgroundProfile(RealPoly{0.0, k}, RealPoly{0.0, k0}, 0.5 * (k0 - std::abs(k)));
}

// phi for H proportional to y^2 at c = 0
inline double sinhc(double a, double y) { return y == 0.0 ? 1.0 : std::sinh(a * y) / (a * y); }

// closed-form b*Gamma on the linear fixtures
inline double b_gamma_plus(double a, double y) { return -std::sinh(a * (1 - y)) / std::sinh(a); }
inline double b_gamma_minus(double a, double y) { return -std::sinh(a * (1 + y)) / std::sinh(a); }

}  // namespace fixtures
