#include "alfven/spectral.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

namespace alfven::spectral {

using profiles::eval_H;
using profiles::Region;

namespace {

constexpr double kPi = std::numbers::pi;

// Splits [lo,hi] at y_c when it lies strictly inside. Simpson panels also accept a
// relative error of 1e-13: near c = i eps the integrand reaches 1/eps^2.
template <class V, class F>
V integrate_split(F&& f, double lo, double hi, double yc, double tol, bool simpson) {
    auto run = [&](double a, double b) {
        return simpson ? adaptive_simpson<V>(f, a, b, tol, 1e-13) : adaptive_gauss_kronrod<V>(f, a, b, tol);
    };
    if (yc > lo && yc < hi) return run(lo, yc) + run(yc, hi);
    return run(lo, hi);
}

// Signed integral over [0, edge] as a sum of pieces ordered from 0.
template <class V, class F>
V side_integral(F&& f, Side s, double yc, double tol, bool simpson) {
    if (s == Side::plus) return integrate_split<V>(f, 0.0, 1.0, yc, tol, simpson);
    return -integrate_split<V>(f, -1.0, 0.0, yc, tol, simpson);
}

// Per-side quantities shared by T, L and Theta.
class SideEvaluator {
public:
    SideEvaluator(const ForcingTerm& F, const ExtendedProfile& ext, const HomogeneousSolution& sol)
        : F_(F), ext_(ext), sol_(sol) {
        // panel integrals of F phi with F exact; sampling F would blur the cutoff terms
        const auto& ys = sol.y;
        auto g = [&](double z) { return F_(z) * sol_.phi_at(z); };
        ncum_.assign(ys.size(), cplx{});
        const std::size_t ic = sol.critical_index;
        for (std::size_t i = ic; i + 1 < ys.size(); ++i)
            ncum_[i + 1] = ncum_[i] + adaptive_gauss_kronrod<cplx>(g, ys[i], ys[i + 1], 1e-15);
        for (std::size_t i = ic; i-- > 0;)
            ncum_[i] = ncum_[i + 1] - adaptive_gauss_kronrod<cplx>(g, ys[i], ys[i + 1], 1e-15);
    }

    // int_{y_c}^y F phi
    cplx N(double y) const {
        const auto& ys = sol_.y;
        std::size_t j = locate_interval(ys, y);
        if (j + 1 < ys.size() && std::abs(ys[j + 1] - y) < std::abs(ys[j] - y)) ++j;
        const double y0 = ys[j];
        if (y == y0) return ncum_[j];
        static const QuadratureRule rule = gauss_legendre_unit(8);
        cplx s{};
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double z = y0 + rule.nodes[k] * (y - y0);
            s += rule.weights[k] * F_(z) * sol_.phi_at(z);
        }
        return ncum_[j] + (y - y0) * s;
    }
    cplx N_at_zero() const { return sol_.side == Side::plus ? ncum_.front() : ncum_.back(); }

    cplx weight(double y) const {
        const cplx p = sol_.phi_at(y);
        return 1.0 / (eval_H(ext_, y, sol_.c.c) * p * p);
    }

private:
    const ForcingTerm& F_;
    const ExtendedProfile& ext_;
    const HomogeneousSolution& sol_;
    std::vector<cplx> ncum_;
};

}  // namespace

HomogeneousPair solve_pair(const ExtendedProfile& ext, int alpha, const SpectralPoint& c, const SpectralOptions& opt) {
    HomogeneousPair p{sturmian::solve_homogeneous(ext, alpha, c, Side::plus, opt.homog),
                      sturmian::solve_homogeneous(ext, alpha, c, Side::minus, opt.homog),
                      {}, {}, {}, {}};
    p.phi_plus0 = p.plus.phi.front();
    p.dphi_plus0 = p.plus.dphi.front();
    p.phi_minus0 = p.minus.phi.back();
    p.dphi_minus0 = p.minus.dphi.back();
    return p;
}

double l_weight(cplx x) { return std::log(std::numbers::e + 1.0 / std::abs(x)); }

std::pair<cplx, cplx> compute_sigma(const ExtendedProfile& ext, const SpectralPoint& c) {
    auto sigma = [&](double y) {
        return ext.W(Side::plus, y, 1) * (ext.W(Side::minus, y) - c.c) -
               ext.W(Side::minus, y, 1) * (ext.W(Side::plus, y) - c.c);
    };
    return {sigma(c.y_c_plus), sigma(c.y_c_minus)};
}

cplx compute_P(const HomogeneousPair& p) {
    return p.phi_minus0 * p.phi_minus0 * p.phi_plus0 * p.dphi_plus0 -
           p.phi_plus0 * p.phi_plus0 * p.phi_minus0 * p.dphi_minus0;
}

std::pair<int, int> compute_chi(const ExtendedProfile& ext, double c) {
    const auto& e = ext.endpoints();
    const int plus = (c > e.wm_right && c < e.wp_right) ? 1 : 0;
    const int minus = (c > e.wp_left && c < e.wm_left) ? 1 : 0;
    return {plus, minus};
}

bool is_excluded(const ExtendedProfile& ext, double c, double tol) {
    const auto& e = ext.endpoints();
    for (double v : {0.0, e.wp_right, e.wm_right, e.wp_left, e.wm_left})
        if (std::abs(c - v) <= tol) return true;
    return false;
}

std::pair<cplx, cplx> compute_I(const ExtendedProfile& ext, const HomogeneousPair& pair, const SpectralOptions& opt) {
    auto one = [&](const HomogeneousSolution& sol) {
        auto f = [&](double y) {
            const cplx p = sol.phi_at(y);
            return 1.0 / (eval_H(ext, y, sol.c.c) * p * p);
        };
        const double yc = sol.c.y_c(sol.side);
        if (sol.side == Side::plus) return integrate_split<cplx>(f, 0.0, 1.0, yc, opt.quad_tol, true);
        return integrate_split<cplx>(f, -1.0, 0.0, yc, opt.quad_tol, true);
    };
    return {one(pair.plus), one(pair.minus)};
}

IDecomposition decompose_I(const ExtendedProfile& ext, const HomogeneousSolution& sol, const SpectralOptions& opt) {
    const Side s = sol.side;
    const cplx c = sol.c.c;
    const double yc = sol.c.y_c(s);
    const double lo = s == Side::plus ? 0.0 : -1.0;
    const double hi = s == Side::plus ? 1.0 : 0.0;
    const double dwp = ext.W(Side::plus, yc, 1), dwm = ext.W(Side::minus, yc, 1);
    const double wp_c = ext.W(Side::plus, yc), wm_c = ext.W(Side::minus, yc);

    IDecomposition d;
    d.sigma = dwp * (wm_c - c) - dwm * (wp_c - c);
    auto pi_f = [&](double y) {
        const cplx p = sol.phi_at(y);
        return (1.0 / (p * p) - 1.0) / eval_H(ext, y, c);
    };
    auto r1_f = [&](double y) {
        const double h = dwp * (wm_c - ext.W(Side::minus, y)) - dwm * (wp_c - ext.W(Side::plus, y));
        return h / eval_H(ext, y, c);
    };
    auto r2_f = [&](double y) {
        return (dwp - ext.W(Side::plus, y, 1)) / (ext.W(Side::plus, y) - c) -
               (dwm - ext.W(Side::minus, y, 1)) / (ext.W(Side::minus, y) - c);
    };
    d.Pi = integrate_split<cplx>(pi_f, lo, hi, yc, opt.quad_tol, false);
    d.R1 = integrate_split<cplx>(r1_f, lo, hi, yc, opt.quad_tol, false);
    d.R2 = integrate_split<cplx>(r2_f, lo, hi, yc, opt.quad_tol, false);

    const auto& e = ext.endpoints();
    // numerator and denominator of the log term on this side
    const double top = s == Side::plus ? e.wp_right : e.wm_left;
    const double bottom = s == Side::plus ? e.wm_right : e.wp_left;
    if (sol.c.region == Region::D0 && c.imag() == 0.0) {
        d.log_term = std::log(std::abs(top - c.real())) - std::log(std::abs(c.real() - bottom));
    } else {
        d.log_term = std::log(top - c) - std::log(bottom - c);
    }
    return d;
}

std::pair<double, double> compute_I_re(const ExtendedProfile& ext, const HomogeneousPair& pair,
                                       const SpectralOptions& opt) {
    const SpectralPoint& c = pair.plus.c;
    if (c.c.imag() != 0.0 || c.region != Region::D0) throw DomainError("I_re: c must be real and in D0");
    if (is_excluded(ext, c.c.real(), opt.exclusion_tol)) throw DomainError("I_re: c is an excluded point");
    auto one = [&](const HomogeneousSolution& sol) {
        const auto d = decompose_I(ext, sol, opt);
        return (d.Pi + (d.R1 + d.R2 + d.log_term) / d.sigma).real();
    };
    return {one(pair.plus), one(pair.minus)};
}

double WronskianData::inv_abs_D() const { return inverse_is_zero ? 0.0 : 1.0 / std::abs(D); }

WronskianData compute_D(const ExtendedProfile& ext, const HomogeneousPair& pair, const SpectralOptions& opt) {
    WronskianData w;
    w.c = pair.plus.c;
    w.phi_plus0 = pair.phi_plus0;
    w.dphi_plus0 = pair.dphi_plus0;
    w.phi_minus0 = pair.phi_minus0;
    w.dphi_minus0 = pair.dphi_minus0;
    w.P = compute_P(pair);
    const auto [sp, sm] = compute_sigma(ext, w.c);
    w.sigma_plus = sp;
    w.sigma_minus = sm;
    const cplx c = w.c.c;
    const cplx pp2 = w.phi_plus0 * w.phi_plus0, pm2 = w.phi_minus0 * w.phi_minus0;

    w.boundary = w.c.region == Region::D0 && c.imag() == 0.0;
    if (w.boundary && is_excluded(ext, c.real(), opt.exclusion_tol)) {
        w.inverse_is_zero = true;
        return w;
    }
    const auto dp = decompose_I(ext, pair.plus, opt);
    const auto dm = decompose_I(ext, pair.minus, opt);
    w.Pi_plus = dp.Pi;
    w.Pi_minus = dm.Pi;
    w.R1_plus = dp.R1;
    w.R2_plus = dp.R2;
    w.R1_minus = dm.R1;
    w.R2_minus = dm.R2;

    if (!w.boundary) {
        const auto [ip, im] = compute_I(ext, pair, opt);
        w.I_plus = ip;
        w.I_minus = im;
        w.D = c * c * w.P * ip * im - pp2 * ip - pm2 * im;
        return w;
    }

    const auto [chp, chm] = compute_chi(ext, c.real());
    w.chi_plus = chp;
    w.chi_minus = chm;
    w.I_re_plus = (dp.Pi + (dp.R1 + dp.R2 + dp.log_term) / dp.sigma).real();
    w.I_re_minus = (dm.Pi + (dm.R1 + dm.R2 + dm.log_term) / dm.sigma).real();
    const double s_p = sp.real(), s_m = sm.real();
    const double P = w.P.real(), c2 = c.real() * c.real();
    const double fp2 = pp2.real(), fm2 = pm2.real();
    w.D_re = c2 * P * (w.I_re_plus * w.I_re_minus - kPi * kPi * chp * chm / (s_p * s_m)) - fp2 * w.I_re_plus -
             fm2 * w.I_re_minus;
    w.D_im = c2 * P * (kPi * w.I_re_plus * chm / s_m + kPi * w.I_re_minus * chp / s_p) - kPi * fp2 * chp / s_p -
             kPi * fm2 * chm / s_m;
    // limits from above
    w.I_plus = cplx(w.I_re_plus, kPi * chp / s_p);
    w.I_minus = cplx(w.I_re_minus, kPi * chm / s_m);
    w.D = w.D_limit(+1);
    return w;
}

WronskianData compute_D(const ExtendedProfile& ext, int alpha, cplx c, const SpectralOptions& opt) {
    const auto sp = profiles::make_spectral_point(ext, c);
    return compute_D(ext, solve_pair(ext, alpha, sp, opt), opt);
}

TLData compute_TL(const ForcingTerm& F, const ExtendedProfile& ext, const HomogeneousPair& pair,
                  const SpectralOptions& opt) {
    if (F.c() == cplx(0.0)) throw DomainError("T, L: c must be nonzero");
    TLData r;
    for (Side s : {Side::plus, Side::minus}) {
        const auto& sol = pair.side(s);
        const SideEvaluator ev(F, ext, sol);
        auto f = [&](double y) { return ev.N(y) * ev.weight(y); };
        const cplx T = side_integral<cplx>(f, s, sol.c.y_c(s), opt.quad_tol, false);
        if (s == Side::plus) {
            r.T_plus = T;
            r.N_plus0 = ev.N_at_zero();
        } else {
            r.T_minus = T;
            r.N_minus0 = ev.N_at_zero();
        }
    }
    r.L = pair.phi_plus0 * r.N_minus0 - pair.phi_minus0 * r.N_plus0;
    return r;
}

Coefficients coefficients_closed_form(const WronskianData& w, const TLData& tl) {
    const cplx c = w.c.c, c2P = c * c * w.P;
    const cplx fp = w.phi_plus0, fm = w.phi_minus0;
    const cplx Ip = w.I_plus, Im = w.I_minus;
    const cplx Tp = tl.T_plus, Tm = tl.T_minus, L = tl.L;
    Coefficients k;
    k.mu_plus = (-c2P * Tp * Im - fm * L * Im + fp * fp * Tp - fp * fm * Tm) / w.D;
    k.nu_plus = (fm * L * Ip * Im + fp * fm * Tm * Ip + fm * fm * Tp * Im) / w.D;
    k.mu_minus = (c2P * Tm * Ip + fp * L * Ip + fp * fm * Tp - fm * fm * Tm) / w.D;
    k.nu_minus = (fp * L * Ip * Im + fp * fp * Tm * Ip + fp * fm * Tp * Im) / w.D;
    return k;
}

Coefficients coefficients_linear_solve(const WronskianData& w, const TLData& tl) {
    const cplx c2 = w.c.c * w.c.c;
    const cplx fp = w.phi_plus0, fm = w.phi_minus0;
    Eigen::Matrix4cd A = Eigen::Matrix4cd::Zero();
    Eigen::Vector4cd rhs;
    A(0, 0) = w.I_plus;
    A(0, 2) = 1.0;
    A(1, 1) = w.I_minus;
    A(1, 3) = -1.0;
    A(2, 2) = fp;
    A(2, 3) = -fm;
    A(3, 0) = fm;
    A(3, 1) = -fp;
    A(3, 2) = c2 * fm * fp * w.dphi_plus0;
    A(3, 3) = -c2 * fp * fm * w.dphi_minus0;
    rhs << -tl.T_plus, tl.T_minus, 0.0, tl.L;
    const Eigen::Vector4cd x = A.fullPivLu().solve(rhs);
    return {x(0), x(1), x(2), x(3)};
}

Coefficients boundary_coefficients(const WronskianData& w, const TLData& tl, int sign) {
    if (!w.boundary || w.inverse_is_zero) throw DomainError("boundary coefficients need real c away from the excluded points");
    const double c2P = w.c.c.real() * w.c.c.real() * w.P.real();
    const cplx fp = w.phi_plus0, fm = w.phi_minus0;
    const double Ip = w.I_re_plus, Im = w.I_re_minus;
    const double sp = w.sigma_plus.real(), sm = w.sigma_minus.real();
    const double xp = w.chi_plus, xm = w.chi_minus;
    const cplx Tp = tl.T_plus, Tm = tl.T_minus, L = tl.L;

    const cplx U_re_p = -c2P * Tp * Im - fm * L * Im + fp * fp * Tp - fp * fm * Tm;
    const cplx U_im_p = -kPi * c2P * Tp * xm / sm - kPi * fm * L * xm / sm;
    const cplx U_re_m = c2P * Tm * Ip + fp * L * Ip + fp * fm * Tp - fm * fm * Tm;
    const cplx U_im_m = kPi * c2P * Tm * xp / sp + kPi * fp * L * xp / sp;
    const cplx V_re_p = fm * L * Ip * Im + fp * fm * Tm * Ip + fm * fm * Tp * Im - kPi * kPi * fm * L * xp * xm / (sp * sm);
    const cplx V_im_p = kPi * fm * L * (Ip * xm / sm + Im * xp / sp) + kPi * fp * fm * Tm * xp / sp +
                        kPi * fm * fm * Tp * xm / sm;
    const cplx V_re_m = fp * L * Ip * Im + fp * fp * Tm * Ip + fp * fm * Tp * Im - kPi * kPi * fp * L * xp * xm / (sp * sm);
    const cplx V_im_m = kPi * fp * L * (Ip * xm / sm + Im * xp / sp) + kPi * fp * fp * Tm * xp / sp +
                        kPi * fp * fm * Tp * xm / sm;
    const cplx i(0.0, static_cast<double>(sign));
    const cplx D = w.D_limit(sign);
    return {(U_re_p + i * U_im_p) / D, (U_re_m + i * U_im_m) / D, (V_re_p + i * V_im_p) / D,
            (V_re_m + i * V_im_m) / D};
}

namespace detail {

// Owns everything Theta needs after the solve; built in place and never moved.
struct ThetaEvaluator {
    ThetaEvaluator(const ExtendedProfile& e, const ForcingTerm& f, HomogeneousPair p, double t)
        : ext(e), F(f), pair(std::move(p)), tol(t), plus(F, ext, pair.plus), minus(F, ext, pair.minus) {}

    ExtendedProfile ext;
    ForcingTerm F;
    HomogeneousPair pair;
    double tol;
    SideEvaluator plus, minus;
    cplx mu[2];
    std::vector<double> y;
    std::vector<cplx> a1, b1;  // integrals from the nearer edge at the output nodes
    cplx a1_minus0, b1_minus0;  // y = 0 seen from the left edge
    std::size_t mid = 0;

    cplx eval(double x, cplx* dtheta) const {
        if (x < -1.0 || x > 1.0) throw std::out_of_range("theta_at: y outside [-1,1]");
        const bool up = x >= 0.0;
        const SideEvaluator& ev = up ? plus : minus;
        const Side s = up ? Side::plus : Side::minus;
        const cplx m = mu[up ? 0 : 1];
        std::size_t j = locate_interval(y, x);
        if (j + 1 < y.size() && std::abs(y[j + 1] - x) < std::abs(y[j] - x)) ++j;
        if (up && j < mid) j = mid;
        if (!up && j > mid) j = mid;
        cplx a = a1[j], b = b1[j];
        if (!up && j == mid) {
            a = a1_minus0;
            b = b1_minus0;
        }
        if (x != y[j]) {
            const double lo = std::min(x, y[j]), hi = std::max(x, y[j]);
            const double dir = x > y[j] ? 1.0 : -1.0;
            const double yc = pair.plus.c.y_c(s);
            auto fa = [&](double z) { return ev.N(z) * ev.weight(z); };
            auto fb = [&](double z) { return ev.weight(z); };
            a += dir * integrate_split<cplx>(fa, lo, hi, yc, tol, false);
            b += dir * integrate_split<cplx>(fb, lo, hi, yc, tol, false);
        }
        const auto& sol = pair.side(s);
        cplx phi, dphi, nn, wgt;
        if (x == 0.0) {
            phi = up ? pair.phi_plus0 : pair.phi_minus0;
            dphi = up ? pair.dphi_plus0 : pair.dphi_minus0;
            nn = ev.N_at_zero();
            wgt = 1.0 / (F.c() * F.c() * phi * phi);
        } else {
            phi = sol.phi_at(x);
            dphi = sol.dphi_at(x);
            nn = ev.N(x);
            wgt = ev.weight(x);
        }
        if (dtheta) *dtheta = dphi * (a + m * b) + phi * (nn + m) * wgt;
        return phi * (a + m * b);
    }
};

}  // namespace detail

cplx InhomogeneousSolution::theta_at(double y, cplx* dtheta) const {
    if (!evaluator) throw std::logic_error("theta_at: solution has no evaluator");
    return evaluator->eval(y, dtheta);
}

InhomogeneousSolution solve_inhomogeneous(const SourceData& src, const ExtendedProfile& ext, cplx c,
                                          const InhomogeneousOptions& opt) {
    if (std::abs(c.imag()) < opt.min_eps) throw DomainError("solve_inhomogeneous: c is too close to the real axis");
    if (opt.n_out < 5 || opt.n_out % 2 == 0) throw std::invalid_argument("solve_inhomogeneous: n_out must be odd and >= 5");
    const auto& sopt = opt.spectral;
    InhomogeneousSolution out;
    out.c = profiles::make_spectral_point(ext, c);
    auto ev = std::make_shared<detail::ThetaEvaluator>(ext, ForcingTerm(src, ext, c),
                                                       solve_pair(ext, src.alpha, out.c, sopt), 1e-3 * sopt.quad_tol);
    const auto& pair = ev->pair;
    out.wronskian = compute_D(ext, pair, sopt);
    const auto tl = compute_TL(ev->F, ext, pair, sopt);
    const auto k = coefficients_closed_form(out.wronskian, tl);
    const auto ks = coefficients_linear_solve(out.wronskian, tl);
    out.solve_discrepancy = std::max({std::abs(k.mu_plus - ks.mu_plus), std::abs(k.mu_minus - ks.mu_minus),
                                      std::abs(k.nu_plus - ks.nu_plus), std::abs(k.nu_minus - ks.nu_minus)}) /
                            std::max({1.0, std::abs(k.mu_plus), std::abs(k.mu_minus), std::abs(k.nu_plus),
                                      std::abs(k.nu_minus)});
    out.mu_plus = k.mu_plus;
    out.mu_minus = k.mu_minus;
    out.nu_plus = k.nu_plus;
    out.nu_minus = k.nu_minus;
    out.T_plus = tl.T_plus;
    out.T_minus = tl.T_minus;
    out.L = tl.L;
    ev->mu[0] = k.mu_plus;
    ev->mu[1] = k.mu_minus;

    const std::size_t n = opt.n_out, m = (n - 1) / 2;
    out.y = symmetric_grid(n);
    ev->y = out.y;
    ev->mid = m;
    ev->a1.assign(n, cplx{});
    ev->b1.assign(n, cplx{});
    out.theta.assign(n, cplx{});
    out.dtheta.assign(n, cplx{});

    cplx theta0[2], dtheta0[2];
    for (Side s : {Side::plus, Side::minus}) {
        const bool up = s == Side::plus;
        const SideEvaluator& se = up ? ev->plus : ev->minus;
        const double yc = out.c.y_c(s);
        const cplx mu = up ? k.mu_plus : k.mu_minus;
        const cplx nu = up ? k.nu_plus : k.nu_minus;
        // nodes of this half ordered from 0 towards the edge
        std::vector<std::size_t> idx;
        if (up) {
            for (std::size_t i = m; i < n; ++i) idx.push_back(i);
        } else {
            for (std::size_t i = m + 1; i-- > 0;) idx.push_back(i);
        }
        const std::size_t h = idx.size();
        std::vector<cplx> a0(h, cplx{}), b0(h, cplx{});
        auto fa = [&](double y) { return se.N(y) * se.weight(y); };
        auto fb = [&](double y) { return se.weight(y); };
        for (std::size_t j = 0; j + 1 < h; ++j) {
            const double y0 = out.y[idx[j]], y1 = out.y[idx[j + 1]];
            const double lo = std::min(y0, y1), hi = std::max(y0, y1);
            const double dir = y1 > y0 ? 1.0 : -1.0;
            a0[j + 1] = a0[j] + dir * integrate_split<cplx>(fa, lo, hi, yc, ev->tol, false);
            b0[j + 1] = b0[j] + dir * integrate_split<cplx>(fb, lo, hi, yc, ev->tol, false);
        }
        const cplx a_edge = a0.back(), b_edge = b0.back();
        for (std::size_t j = 0; j < h; ++j) {
            const cplx a1 = j + 1 == h ? cplx{} : a0[j] - a_edge;
            const cplx b1 = j + 1 == h ? cplx{} : b0[j] - b_edge;
            if (j == 0 && !up) {
                ev->a1_minus0 = a1;
                ev->b1_minus0 = b1;
            } else {
                ev->a1[idx[j]] = a1;
                ev->b1[idx[j]] = b1;
            }
            const double y = out.y[idx[j]];
            const cplx phi = j == 0 ? (up ? pair.phi_plus0 : pair.phi_minus0) : pair.side(s).phi_at(y);
            const cplx th0 = phi * (a0[j] + mu * b0[j] + nu);
            const cplx th1 = phi * (a1 + mu * b1);
            out.representation_mismatch = std::max(out.representation_mismatch, std::abs(th0 - th1));
            if (j == 0) {
                // both halves meet at y = 0; evaluate each from its own edge
                const cplx dphi = up ? pair.dphi_plus0 : pair.dphi_minus0;
                theta0[up ? 0 : 1] = th1;
                dtheta0[up ? 0 : 1] = dphi * (a1 + mu * b1) + phi * (se.N_at_zero() + mu) / (c * c * phi * phi);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) out.theta[i] = ev->eval(out.y[i], &out.dtheta[i]);
    out.value_jump = std::abs(theta0[0] - theta0[1]);
    out.slope_jump = std::abs(dtheta0[0] - dtheta0[1]);
    out.evaluator = std::move(ev);
    if (out.representation_mismatch > opt.mismatch_fail)
        throw NumericalError("solve_inhomogeneous: the two representations of Theta disagree");
    return out;
}

double inhomogeneous_residual(const InhomogeneousSolution& sol, const SourceData& src, const ExtendedProfile& ext,
                              double step) {
    const std::size_t n = sol.y.size();
    const double a2 = static_cast<double>(src.alpha) * src.alpha;
    const ForcingTerm F(src, ext, sol.c.c);
    const double h = step > 0.0 ? step : sol.y[1] - sol.y[0];
    static constexpr std::array<double, 5> w = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double y = sol.y[i];
        if (y - 2 * h < -1.0 || y + 2 * h > 1.0) continue;
        cplx d{};
        for (int k = -2; k <= 2; ++k) {
            if (k == 0) continue;
            const double z = y + k * h;
            cplx dth;
            sol.theta_at(z, &dth);
            d += w[static_cast<std::size_t>(k + 2)] * eval_H(ext, z, sol.c.c) * dth;
        }
        d /= h;
        const cplx f = F(y);
        const cplx r = d - a2 * eval_H(ext, y, sol.c.c) * sol.theta[i] - f;
        worst = std::max(worst, std::abs(r) / (1.0 + std::abs(f)));
    }
    return worst;
}

double stern_min_singular_value(const ExtendedProfile& ext, int alpha, cplx c, std::size_t n) {
    if (n < 5) throw std::invalid_argument("stern: need at least 5 nodes");
    const std::size_t m = n - 2;
    const double h = 2.0 / static_cast<double>(n - 1);
    const double a2 = static_cast<double>(alpha) * alpha;
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        const double y = -1.0 + h * static_cast<double>(i + 1);
        const cplx hl = eval_H(ext, y - 0.5 * h, c), hr = eval_H(ext, y + 0.5 * h, c);
        const auto r = static_cast<Eigen::Index>(i);
        A(r, r) = -(hl + hr) / (h * h) - a2 * eval_H(ext, y, c);
        if (i > 0) A(r, r - 1) = hl / (h * h);
        if (i + 1 < m) A(r, r + 1) = hr / (h * h);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    return svd.singularValues().minCoeff();
}

}  // namespace alfven::spectral
