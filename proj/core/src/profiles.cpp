#include "alfven/profiles.hpp"

#include <cmath>
#include <numbers>

namespace alfven::profiles {

namespace {

constexpr double kDomainSlack = 1e-12;
constexpr int kMonotoneSamples = 4001;

int index(Side s) { return s == Side::plus ? 0 : 1; }

// Continuation of f beyond an endpoint: h(tau) = f(origin + direction*tau).
struct ContinuationInput {
    RealPoly f;
    double origin;
    double direction;
    double sign;  // +1 if h must increase with tau, -1 if decrease
};

double h_of(const ContinuationInput& in, double tau) { return in.f(in.origin + in.direction * tau); }
double dh_of(const ContinuationInput& in, const RealPoly& df, double tau) {
    return in.direction * df(in.origin + in.direction * tau);
}

// Constructed continuation: value and tau-derivatives.
Taylor<double, 5> blend_jet(const ExtensionPiece& p, double tau) {
    using J = Taylor<double, 5>;
    J t = J::variable(tau);
    J q(0.0);
    for (int n = 5; n >= 2; --n) q = (q + J(p.jet[n])) * t;
    q = q * t;
    // chi_delta = 1 on [0, delta/4], 0 beyond 3 delta / 4
    J chi = smooth_step((J(0.75 * p.delta1) - t) / J(0.5 * p.delta1));
    return J(p.jet[0]) + J(p.jet[1]) * t + chi * q;
}

double piece_eval(const ExtensionPiece& p, const RealPoly& poly, const std::array<RealPoly, 6>& dpoly,
                  double y, int order) {
    if (p.kind != ExtensionKind::constructed) {
        return order == 0 ? poly(y) : dpoly[static_cast<std::size_t>(order)](y);
    }
    const double tau = p.direction * (y - p.origin);
    const auto j = blend_jet(p, std::max(tau, 0.0));
    return j.derivative(static_cast<std::size_t>(order)) * std::pow(p.direction, order);
}

ExtensionPiece make_constructed(const ContinuationInput& in, double tau_target) {
    ExtensionPiece p;
    p.kind = ExtensionKind::constructed;
    p.origin = in.origin;
    p.direction = in.direction;
    RealPoly d = in.f;
    double fact = 1.0;
    for (int n = 0; n <= 5; ++n) {
        if (n > 0) {
            d = d.derivative();
            fact *= n;
        }
        p.jet[static_cast<std::size_t>(n)] = d(in.origin) * std::pow(in.direction, n) / fact;
    }
    const double slope = p.jet[1];
    if (!(slope * in.sign > 0)) throw DomainError("extend: endpoint slope has the wrong sign");
    double delta = 0.5;
    if (tau_target > 0) delta = std::min(delta, tau_target / 8.0);
    // shrink until the slope stays within half of the endpoint slope
    for (int attempt = 0; attempt < 80; ++attempt) {
        p.delta1 = delta;
        bool ok = true;
        for (int k = 0; k <= 2000 && ok; ++k) {
            const double tau = delta * k / 2000.0;
            const double dh = blend_jet(p, tau).a[1];
            if (std::abs(dh - slope) > 0.5 * std::abs(slope)) ok = false;
        }
        if (ok) return p;
        delta *= 0.5;
    }
    throw DomainError("extend: constructed continuation failed to stay monotone");
}

// Natural continuation: first tau where h reaches target, or -1 if h stops being monotone first.
double natural_reach(const ContinuationInput& in, double target) {
    const RealPoly df = in.f.derivative();
    const double step = 1e-3;
    double tau = 0.0;
    double prev = h_of(in, 0.0);
    for (int k = 1; k <= 200000; ++k) {
        const double t = k * step;
        if (!(dh_of(in, df, t) * in.sign > 0)) return -1.0;
        const double cur = h_of(in, t);
        if ((cur - target) * in.sign >= 0) {
            auto g = [&](double s) { return (h_of(in, s) - target) * in.sign; };
            auto dg = [&](double s) { return dh_of(in, df, s) * in.sign; };
            return bisect_newton(g, dg, tau, t, 1e-14, 3);
        }
        tau = t;
        prev = cur;
    }
    (void)prev;
    return -1.0;
}

bool natural_monotone_until(const ContinuationInput& in, double tau_end) {
    const RealPoly df = in.f.derivative();
    for (int k = 0; k <= kMonotoneSamples; ++k) {
        const double t = tau_end * k / kMonotoneSamples;
        if (!(dh_of(in, df, t) * in.sign > 0)) return false;
    }
    return true;
}

}  // namespace

std::string to_string(Side s) { return s == Side::plus ? "plus" : "minus"; }
std::string to_string(Branch b) { return b == Branch::w_plus ? "W+" : "W-"; }
std::string to_string(ExtensionKind k) {
    switch (k) {
        case ExtensionKind::none: return "none";
        case ExtensionKind::natural: return "natural";
        case ExtensionKind::constructed: return "constructed";
    }
    return "unknown";
}
std::string to_string(Region r) {
    switch (r) {
        case Region::D0: return "D0";
        case Region::Deps: return "Deps";
        case Region::Bl: return "Bl";
        case Region::Br: return "Br";
        case Region::Outside: return "Outside";
    }
    return "unknown";
}

BackgroundProfile::BackgroundProfile(RealPoly u_, RealPoly b_, double c0)
    : u(std::move(u_)), b(std::move(b_)), c0_margin(c0) {
    if (u.empty() || b.empty()) throw std::invalid_argument("profile: coefficient lists must be non-empty");
    if (!(c0_margin > 0)) throw std::invalid_argument("profile: c0 must be positive");
}

AssumptionReport check_assumptions(const BackgroundProfile& p, int grid_points) {
    AssumptionReport r;
    r.island = p.u.coeff(0) == 0.0 && p.b.coeff(0) == 0.0;
    const RealPoly du = p.u.derivative();
    const RealPoly db = p.b.derivative();
    r.monotone_margin = INFINITY;
    r.stern_margin = INFINITY;
    for (int k = 0; k < grid_points; ++k) {
        const double y = -1.0 + 2.0 * k / (grid_points - 1);
        const double m = db(y) - std::abs(du(y));
        if (m < r.monotone_margin) {
            r.monotone_margin = m;
            r.monotone_worst_y = y;
        }
        const double s = std::abs(p.b(y)) - std::abs(p.u(y));
        if (s < r.stern_margin) {
            r.stern_margin = s;
            r.stern_worst_y = y;
        }
    }
    r.monotone = r.monotone_margin >= p.c0_margin;
    r.stern = r.stern_margin >= -1e-14;
    return r;
}

double eval_W(const BackgroundProfile& p, Side w, double y, int order) {
    if (std::abs(y) > 1.0 + kDomainSlack) throw std::out_of_range("eval_W: y outside [-1,1]");
    if (order < 0 || order > 5) throw std::invalid_argument("eval_W: derivative order must be 0..5");
    const RealPoly f = w == Side::plus ? p.w_plus() : p.w_minus();
    return f.derivative(order)(y);
}

EndpointValues endpoint_values(const BackgroundProfile& p) {
    const RealPoly wp = p.w_plus(), wm = p.w_minus();
    return {wp(1.0), wm(-1.0), wm(1.0), wp(-1.0)};
}

int classify_case(const BackgroundProfile& p, double tol) {
    const EndpointValues e = endpoint_values(p);
    // upper pair: W+(1) vs W-(-1); lower pair: W-(1) vs W+(-1)
    auto rel = [tol](double a, double b) { return std::abs(a - b) <= tol ? 0 : (a > b ? 1 : -1); };
    const int up = rel(e.wp_right, e.wm_left);
    const int lo = rel(e.wm_right, e.wp_left);
    if (lo == 1) return up == 1 ? 1 : (up == 0 ? 2 : 3);
    if (lo == 0) return up == 1 ? 4 : (up == 0 ? 6 : 8);
    return up == 1 ? 5 : (up == 0 ? 7 : 9);
}

double ExtendedProfile::W(Side w, double y, int order) const {
    if (y < a_minus_ - kDomainSlack || y > a_plus_ + kDomainSlack)
        throw std::out_of_range("W: y outside the extended domain");
    if (order < 0 || order > 5) throw std::invalid_argument("W: derivative order must be 0..5");
    const RealPoly& poly = w == Side::plus ? wp_ : wm_;
    const auto& dpoly = w == Side::plus ? wp_d_ : wm_d_;
    if (y >= -1.0 && y <= 1.0) return dpoly[static_cast<std::size_t>(order)](y);
    const Side domain = y > 1.0 ? Side::plus : Side::minus;
    return piece_eval(pieces_[index(w)][index(domain)], poly, dpoly, y, order);
}

double ExtendedProfile::u(double y, int order) const {
    return 0.5 * (W(Side::plus, y, order) + W(Side::minus, y, order));
}
double ExtendedProfile::b(double y, int order) const {
    return 0.5 * (W(Side::plus, y, order) - W(Side::minus, y, order));
}

ExtensionKind ExtendedProfile::kind(Side w, Side domain) const { return pieces_[index(w)][index(domain)].kind; }

ExtensionKind ExtendedProfile::side_kind(Side domain) const {
    const ExtensionKind a = kind(Side::plus, domain), b = kind(Side::minus, domain);
    if (a == ExtensionKind::constructed || b == ExtensionKind::constructed) return ExtensionKind::constructed;
    if (a == ExtensionKind::natural || b == ExtensionKind::natural) return ExtensionKind::natural;
    return ExtensionKind::none;
}

ExtendedProfile extend(const BackgroundProfile& profile) {
    const AssumptionReport rep = check_assumptions(profile);
    if (!rep.island || !rep.monotone) throw DomainError("extend: assumptions (I) and (M) are required");
    ExtendedProfile ext;
    ext.base_ = profile;
    ext.wp_ = profile.w_plus();
    ext.wm_ = profile.w_minus();
    for (int k = 0; k <= 5; ++k) {
        ext.wp_d_[static_cast<std::size_t>(k)] = ext.wp_.derivative(k);
        ext.wm_d_[static_cast<std::size_t>(k)] = ext.wm_.derivative(k);
    }
    ext.case_id_ = classify_case(profile);
    const EndpointValues e = endpoint_values(profile);
    ext.ends_ = e;
    ext.d0_min_ = std::min(e.wm_right, e.wp_left);
    ext.d0_max_ = std::max(e.wp_right, e.wm_left);
    constexpr double tol = 1e-12;

    for (Side domain : {Side::plus, Side::minus}) {
        const double origin = domain == Side::plus ? 1.0 : -1.0;
        const double dir = origin;
        // W+ increases with y, W- decreases; sign is the monotone direction in tau
        std::array<ContinuationInput, 2> in = {
            ContinuationInput{ext.wp_, origin, dir, dir},
            ContinuationInput{ext.wm_, origin, dir, -dir},
        };
        // on the right W+ climbs to max D0 and W- falls to min D0; mirrored on the left
        std::array<double, 2> target;
        if (domain == Side::plus) {
            target = {ext.d0_max_, ext.d0_min_};
        } else {
            target = {ext.d0_min_, ext.d0_max_};
        }
        std::array<double, 2> tau_end = {0.0, 0.0};
        std::array<bool, 2> needs = {false, false};
        for (int w = 0; w < 2; ++w) {
            const double start = in[w].f(origin);
            needs[w] = (target[w] - start) * in[w].sign > tol;
            if (!needs[w]) continue;
            const double t = natural_reach(in[w], target[w]);
            if (t > 0) {
                tau_end[w] = t;
                ext.pieces_[w][index(domain)].kind = ExtensionKind::natural;
            } else {
                const double slope = in[w].direction * in[w].f.derivative()(origin);
                const double tau_lin = (target[w] - start) / slope;
                ext.pieces_[w][index(domain)] = make_constructed(in[w], tau_lin);
                tau_end[w] = tau_lin;
            }
        }
        const double span = std::max(tau_end[0], tau_end[1]);
        if (span > 0) {
            for (int w = 0; w < 2; ++w) {
                ExtensionPiece& piece = ext.pieces_[w][index(domain)];
                if (piece.kind == ExtensionKind::constructed) continue;
                if (natural_monotone_until(in[w], span)) {
                    piece.kind = ExtensionKind::natural;
                    piece.origin = origin;
                    piece.direction = dir;
                } else {
                    piece = make_constructed(in[w], needs[w] ? tau_end[w] : -1.0);
                }
            }
        }
        if (domain == Side::plus) {
            ext.a_plus_ = 1.0 + span;
        } else {
            ext.a_minus_ = -1.0 - span;
        }
    }

    // range covering, checked on the final evaluators
    auto check = [&](bool ok, const char* what) {
        if (!ok) throw DomainError(std::string("extend: target unreachable: ") + what);
    };
    const double rtol = 1e-9;
    check(ext.W(Side::plus, ext.a_plus_) >= ext.d0_max_ - rtol, "W+(a+)");
    check(ext.W(Side::minus, ext.a_plus_) <= ext.d0_min_ + rtol, "W-(a+)");
    check(ext.W(Side::minus, ext.a_minus_) >= ext.d0_max_ - rtol, "W-(a-)");
    check(ext.W(Side::plus, ext.a_minus_) <= ext.d0_min_ + rtol, "W+(a-)");
    return ext;
}

CriticalPoints critical_points(const ExtendedProfile& ext, double c_r) {
    if (!ext.in_D0(c_r)) throw DomainError("critical_points: c_r outside D0");
    CriticalPoints cp;
    auto invert = [&](Side w, double lo, double hi) {
        auto g = [&](double y) { return ext.W(w, y) - c_r; };
        auto dg = [&](double y) { return ext.W(w, y, 1); };
        // clamp tiny overshoots at the domain ends
        const double glo = g(lo), ghi = g(hi);
        if (std::abs(glo) <= 1e-12) return lo;
        if (std::abs(ghi) <= 1e-12) return hi;
        return bisect_newton(g, dg, lo, hi, 1e-10, 3);
    };
    if (c_r == 0.0) {
        cp.y_plus = cp.y_minus = 0.0;
        cp.branch_plus = Branch::w_plus;
        cp.branch_minus = Branch::w_minus;
        return cp;
    }
    if (c_r > 0) {
        cp.branch_plus = Branch::w_plus;
        cp.branch_minus = Branch::w_minus;
        cp.y_plus = invert(Side::plus, 0.0, ext.a_plus());
        cp.y_minus = invert(Side::minus, ext.a_minus(), 0.0);
    } else {
        cp.branch_plus = Branch::w_minus;
        cp.branch_minus = Branch::w_plus;
        cp.y_plus = invert(Side::minus, 0.0, ext.a_plus());
        cp.y_minus = invert(Side::plus, ext.a_minus(), 0.0);
    }
    return cp;
}

SpectralPoint make_spectral_point(const ExtendedProfile& ext, cplx c, double eps0) {
    SpectralPoint sp;
    sp.c = c;
    const double re = c.real();
    const double lo = ext.d0_min(), hi = ext.d0_max();
    if (re >= lo && re <= hi) {
        sp.c_r = re;
        sp.eps = c.imag();
        sp.region = c.imag() == 0.0 ? Region::D0 : Region::Deps;
    } else if (re < lo) {
        sp.c_r = lo;
        const cplx d = c - lo;
        sp.eps = std::abs(d);
        sp.theta = std::arg(d);
        if (sp.theta < 0) sp.theta += 2 * std::numbers::pi;
        sp.region = sp.eps < eps0 ? Region::Bl : Region::Outside;
    } else {
        sp.c_r = hi;
        const cplx d = cplx(hi) - c;
        sp.eps = std::abs(d);
        sp.theta = std::arg(d);
        if (sp.theta < 0) sp.theta += 2 * std::numbers::pi;
        sp.region = sp.eps < eps0 ? Region::Br : Region::Outside;
    }
    const CriticalPoints cp = critical_points(ext, sp.c_r);
    sp.y_c_plus = cp.y_plus;
    sp.y_c_minus = cp.y_minus;
    sp.branch_plus = cp.branch_plus;
    sp.branch_minus = cp.branch_minus;
    return sp;
}

cplx eval_H(const ExtendedProfile& ext, double y, cplx c) {
    return (ext.W(Side::plus, y) - c) * (ext.W(Side::minus, y) - c);
}

}  // namespace alfven::profiles
