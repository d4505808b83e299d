#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "alfven/numerics.hpp"
#include "alfven/polynomial.hpp"

namespace alfven::profiles {

enum class Side { plus, minus };
enum class Branch { w_plus, w_minus };
enum class ExtensionKind { none, natural, constructed };
enum class Region { D0, Deps, Bl, Br, Outside };

std::string to_string(Side s);
std::string to_string(Branch b);
std::string to_string(ExtensionKind k);
std::string to_string(Region r);

// Equilibrium fields u(y), b(y) on [-1,1].
struct BackgroundProfile {
    RealPoly u;
    RealPoly b;
    double c0_margin = 1e-3;

    BackgroundProfile() = default;
    BackgroundProfile(RealPoly u_, RealPoly b_, double c0 = 1e-3);

    RealPoly w_plus() const { return u + b; }
    RealPoly w_minus() const { return u - b; }
};

struct AssumptionReport {
    bool regularity = true;
    bool island = false;
    bool monotone = false;
    bool stern = false;
    double monotone_margin = 0.0;  // min of b' - |u'|
    double monotone_worst_y = 0.0;
    double stern_margin = 0.0;  // min of |b| - |u|
    double stern_worst_y = 0.0;

    bool all_pass() const { return regularity && island && monotone && stern; }
};

AssumptionReport check_assumptions(const BackgroundProfile& profile, int grid_points = 20001);

// W_plus = u + b, W_minus = u - b on [-1,1].
double eval_W(const BackgroundProfile& profile, Side w, double y, int order = 0);

struct EndpointValues {
    double wp_right;  // W+(1)
    double wm_left;   // W-(-1)
    double wm_right;  // W-(1)
    double wp_left;   // W+(-1)
};

EndpointValues endpoint_values(const BackgroundProfile& profile);

int classify_case(const BackgroundProfile& profile, double tol = 1e-12);

// One monotone continuation of W+ or W- beyond y = +-1.
struct ExtensionPiece {
    ExtensionKind kind = ExtensionKind::none;
    double origin = 1.0;     // +-1
    double direction = 1.0;  // +1 to the right, -1 to the left
    double delta1 = 0.0;
    std::array<double, 6> jet{};  // Taylor coefficients in tau = direction*(y - origin)
};

class ExtendedProfile {
public:
    ExtendedProfile() = default;

    const BackgroundProfile& base() const { return base_; }
    double a_minus() const { return a_minus_; }
    double a_plus() const { return a_plus_; }
    int case_id() const { return case_id_; }
    double d0_min() const { return d0_min_; }
    double d0_max() const { return d0_max_; }
    const EndpointValues& endpoints() const { return ends_; }

    // W~_w and its derivatives on [a-, a+].
    double W(Side w, double y, int order = 0) const;
    double u(double y, int order = 0) const;
    double b(double y, int order = 0) const;

    ExtensionKind kind(Side w, Side domain) const;
    ExtensionKind side_kind(Side domain) const;

    bool in_D0(double c_r, double tol = 1e-12) const {
        return c_r >= d0_min_ - tol && c_r <= d0_max_ + tol;
    }

private:
    friend ExtendedProfile extend(const BackgroundProfile& profile);

    BackgroundProfile base_;
    RealPoly wp_, wm_;
    std::array<RealPoly, 6> wp_d_, wm_d_;
    // index: [w][domain], w/domain 0 = plus, 1 = minus
    std::array<std::array<ExtensionPiece, 2>, 2> pieces_{};
    double a_minus_ = -1.0, a_plus_ = 1.0;
    int case_id_ = 0;
    double d0_min_ = 0.0, d0_max_ = 0.0;
    EndpointValues ends_{};
};

ExtendedProfile extend(const BackgroundProfile& profile);

struct CriticalPoints {
    double y_plus = 0.0;
    double y_minus = 0.0;
    Branch branch_plus = Branch::w_plus;
    Branch branch_minus = Branch::w_minus;
};

CriticalPoints critical_points(const ExtendedProfile& ext, double c_r);

struct SpectralPoint {
    cplx c;
    double c_r = 0.0;
    double eps = 0.0;
    double theta = 0.0;
    Region region = Region::D0;
    double y_c_plus = 0.0;
    double y_c_minus = 0.0;
    Branch branch_plus = Branch::w_plus;
    Branch branch_minus = Branch::w_minus;

    double y_c(Side s) const { return s == Side::plus ? y_c_plus : y_c_minus; }
    bool on_axis() const { return c.imag() == 0.0; }
};

SpectralPoint make_spectral_point(const ExtendedProfile& ext, cplx c, double eps0 = 0.05);

cplx eval_H(const ExtendedProfile& ext, double y, cplx c);
inline cplx eval_H(const ExtendedProfile& ext, double y, const SpectralPoint& c) {
    return eval_H(ext, y, c.c);
}

}  // namespace alfven::profiles
