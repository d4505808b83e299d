#include "alfven/island.hpp"

#include <cmath>
#include <limits>

#include "alfven/numerics.hpp"

namespace alfven::island {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

sturmian::HomogeneousSolution solve_at_zero(const ExtendedProfile& ext, int alpha, Side side,
                                            const IslandOptions& opt) {
    if (alpha == 0) throw std::invalid_argument("island: alpha must be nonzero");
    const auto sp = profiles::make_spectral_point(ext, cplx(0.0));
    return sturmian::solve_homogeneous(ext, alpha, sp, side, opt.homog);
}

double u2_minus_b2(const ExtendedProfile& ext, double y) {
    const double u = ext.u(y), b = ext.b(y);
    return (u - b) * (u + b);
}

// index of the node nearest to x, kept off the node at y = 0
std::size_t anchor(const std::vector<double>& ys, double x, Side side) {
    std::size_t j = locate_interval(ys, x);
    if (j + 1 < ys.size() && std::abs(ys[j + 1] - x) < std::abs(ys[j] - x)) ++j;
    if (side == Side::plus && j == 0) j = 1;
    if (side == Side::minus && j == ys.size() - 1) j = ys.size() - 2;
    return j;
}

void check_side(Side side, double y) {
    if (y == 0.0) throw std::invalid_argument("island: y = 0 is singular for this quantity");
    if ((side == Side::plus) != (y > 0.0) || std::abs(y) > 1.0)
        throw std::out_of_range("island: y outside this half of [-1,1]");
}

}  // namespace

GammaEvaluator::GammaEvaluator(const ExtendedProfile& ext, int alpha, Side side, const IslandOptions& opt)
    : ext_(ext), side_(side), tol_(opt.quad_tol), phi_(solve_at_zero(ext, alpha, side, opt)) {
    const double u1 = ext.u(0.0, 1), b1 = ext.b(0.0, 1);
    scale_ = (u1 * u1 - b1 * b1) / b1;
    const auto& ys = phi_.y;
    const std::size_t n = ys.size();
    cum_.assign(n, kNaN);
    auto w = [this](double z) { return weight(z); };
    if (side == Side::plus) {
        cum_[n - 1] = 0.0;
        for (std::size_t i = n - 1; i-- > 1;)
            cum_[i] = cum_[i + 1] - adaptive_gauss_kronrod<double>(w, ys[i], ys[i + 1], tol_);
    } else {
        cum_[0] = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i)
            cum_[i] = cum_[i - 1] + adaptive_gauss_kronrod<double>(w, ys[i - 1], ys[i], tol_);
    }
}

double GammaEvaluator::weight(double y) const {
    const double p = phi_at(y);
    return 1.0 / (u2_minus_b2(ext_, y) * p * p);
}

double GammaEvaluator::integral(double y) const {
    check_side(side_, y);
    const auto& ys = phi_.y;
    const std::size_t j = anchor(ys, y, side_);
    if (y == ys[j]) return cum_[j];
    auto w = [this](double z) { return weight(z); };
    const double part = adaptive_gauss_kronrod<double>(w, std::min(y, ys[j]), std::max(y, ys[j]), tol_);
    return cum_[j] + (y > ys[j] ? part : -part);
}

double GammaEvaluator::gamma(double y) const { return phi_at(y) * scale_ * integral(y); }

double GammaEvaluator::b_gamma(double y) const {
    if (y == 0.0) return -1.0;
    return ext_.b(y) * gamma(y);
}

double GammaEvaluator::d_b_gamma(double y) const {
    const double I = integral(y);
    const double p = phi_at(y), dp = dphi_at(y);
    const double b = ext_.b(y), db = ext_.b(y, 1);
    return db * p * scale_ * I + b * scale_ * (dp * I + 1.0 / (u2_minus_b2(ext_, y) * p));
}

GammaProfile compute_gamma(const ExtendedProfile& ext, int alpha, Side side, const IslandOptions& opt) {
    const GammaEvaluator g(ext, alpha, side, opt);
    const auto grid = symmetric_grid(opt.n_out);
    const std::size_t m = (opt.n_out - 1) / 2;
    GammaProfile out;
    out.side = side;
    for (std::size_t k = 0; k <= m; ++k) {
        const double y = side == Side::plus ? grid[m + k] : grid[m - k];
        out.y.push_back(y);
        out.gamma.push_back(y == 0.0 ? kNaN : g.gamma(y));
        out.b_gamma.push_back(g.b_gamma(y));
    }
    return out;
}

double kappa(const profiles::BackgroundProfile& p) {
    const double u1 = p.u.derivative()(0.0), u2 = p.u.derivative(2)(0.0);
    const double b1 = p.b.derivative()(0.0), b2 = p.b.derivative(2)(0.0);
    return -5.0 * u1 * u2 + u2 * b1 - u1 * b2 + 5.0 * b1 * b2;
}

BlowupDiagnostic blowup_diagnostic(const ExtendedProfile& ext, const GammaEvaluator& plus,
                                   const GammaEvaluator& minus) {
    BlowupDiagnostic d;
    d.kappa = kappa(ext.base());
    std::vector<double> logs, ap, am;
    for (int k = 4; k <= 14; ++k) {
        const double y = std::ldexp(1.0, -k);
        d.y.push_back(y);
        logs.push_back(std::log(1.0 / y));
        d.d_plus.push_back(plus.d_b_gamma(y));
        d.d_minus.push_back(minus.d_b_gamma(-y));
        ap.push_back(std::abs(d.d_plus.back()));
        am.push_back(std::abs(d.d_minus.back()));
    }
    d.log_slope = ls_slope(logs, ap);
    d.log_slope_minus = ls_slope(logs, am);
    return d;
}

BlowupDiagnostic blowup_diagnostic(const ExtendedProfile& ext, int alpha, const IslandOptions& opt) {
    return blowup_diagnostic(ext, GammaEvaluator(ext, alpha, Side::plus, opt),
                             GammaEvaluator(ext, alpha, Side::minus, opt));
}

namespace {

double u_over_b(const ExtendedProfile& ext, double y) {
    if (y == 0.0) return ext.u(0.0, 1) / ext.b(0.0, 1);
    return ext.u(y) / ext.b(y);
}

IslandProfile assemble(const ExtendedProfile& ext, int alpha, cplx phi0_at_0, const GammaEvaluator& gp,
                       const GammaEvaluator& gm, const IslandOptions& opt) {
    if (opt.n_out < 5 || opt.n_out % 2 == 0) throw std::invalid_argument("island: n_out must be odd and >= 5");
    IslandProfile out;
    out.alpha = alpha;
    out.phi0_at_0 = phi0_at_0;
    out.y = symmetric_grid(opt.n_out);
    const std::size_t n = out.y.size(), m = out.mid();
    out.b_gamma.resize(n);
    out.gamma_plus.assign(m + 1, kNaN);
    out.gamma_minus.assign(m + 1, kNaN);
    out.phi_inf.resize(n);
    out.psi_inf.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = out.y[i];
        if (i > m) {
            out.gamma_plus[i - m] = gp.gamma(y);
            out.b_gamma[i] = ext.b(y) * out.gamma_plus[i - m];
        } else if (i < m) {
            out.gamma_minus[i] = gm.gamma(y);
            out.b_gamma[i] = ext.b(y) * out.gamma_minus[i];
        } else {
            out.b_gamma[i] = -1.0;
        }
        out.phi_inf[i] = -out.b_gamma[i] * phi0_at_0;
        out.psi_inf[i] = u_over_b(ext, y) * out.phi_inf[i];
    }
    const auto d = blowup_diagnostic(ext, gp, gm);
    out.kappa = d.kappa;
    out.log_slope = d.log_slope;
    return out;
}

}  // namespace

IslandProfile limiting_profiles(const ExtendedProfile& ext, int alpha, cplx phi0_at_0, const IslandOptions& opt) {
    const GammaEvaluator gp(ext, alpha, Side::plus, opt), gm(ext, alpha, Side::minus, opt);
    return assemble(ext, alpha, phi0_at_0, gp, gm, opt);
}

ForcingMoment::ForcingMoment(const spectral::SourceData& src, const ExtendedProfile& ext,
                             const HomogeneousSolution& phi, double tol)
    : F_(src, ext, cplx(0.0)), phi_(phi), tol_(tol) {
    const auto& ys = phi.y;
    const std::size_t n = ys.size();
    cum_.assign(n, cplx{});
    auto g = [this](double z) { return F_(z) * phi_.phi_at(z); };
    if (phi.side == Side::plus) {
        for (std::size_t i = 0; i + 1 < n; ++i)
            cum_[i + 1] = cum_[i] + adaptive_gauss_kronrod<cplx>(g, ys[i], ys[i + 1], tol_);
    } else {
        for (std::size_t i = n - 1; i-- > 0;)
            cum_[i] = cum_[i + 1] - adaptive_gauss_kronrod<cplx>(g, ys[i], ys[i + 1], tol_);
    }
}

cplx ForcingMoment::operator()(double y) const {
    const auto& ys = phi_.y;
    if (y < ys.front() || y > ys.back()) throw std::out_of_range("forcing moment: y outside the grid");
    std::size_t j = locate_interval(ys, y);
    if (j + 1 < ys.size() && std::abs(ys[j + 1] - y) < std::abs(ys[j] - y)) ++j;
    if (y == ys[j]) return cum_[j];
    auto g = [this](double z) { return F_(z) * phi_.phi_at(z); };
    const cplx part = adaptive_gauss_kronrod<cplx>(g, std::min(y, ys[j]), std::max(y, ys[j]), tol_);
    return cum_[j] + (y > ys[j] ? part : -part);
}

IslandProfile final_state_from_H(const spectral::SourceData& src, const ExtendedProfile& ext,
                                 const IslandOptions& opt) {
    const GammaEvaluator gp(ext, src.alpha, Side::plus, opt), gm(ext, src.alpha, Side::minus, opt);
    const IslandProfile ref = assemble(ext, src.alpha, src.phi0_at_0, gp, gm, opt);
    IslandProfile out = ref;
    const std::size_t n = out.y.size(), m = out.mid();

    for (Side s : {Side::plus, Side::minus}) {
        const bool up = s == Side::plus;
        const auto& phi = (up ? gp : gm).phi();
        const ForcingMoment J(src, ext, phi, opt.quad_tol);
        auto integrand = [&](double z) {
            const double p = phi.phi_at(z).real();
            return J(z) / (u2_minus_b2(ext, z) * p * p);
        };
        // int_{+-1}^y J / ((u^2 - b^2) phi^2), accumulated from the edge towards 0
        cplx acc{};
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t i = up ? n - 1 - k : k;
            const double y = out.y[i];
            if (k > 0) {
                const double prev = out.y[up ? i + 1 : i - 1];
                const cplx part = adaptive_gauss_kronrod<cplx>(integrand, std::min(y, prev), std::max(y, prev),
                                                               opt.quad_tol);
                acc += up ? -part : part;
            }
            const cplx H = phi.phi_at(y).real() * acc;
            out.phi_inf[i] = src.phi0_at_0 * cutoff(y) + ext.b(y) * H;
            out.psi_inf[i] = u_over_b(ext, y) * out.phi_inf[i];
        }
    }
    out.phi_inf[m] = src.phi0_at_0;
    out.psi_inf[m] = u_over_b(ext, 0.0) * src.phi0_at_0;

    out.route_mismatch = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        out.route_mismatch = std::max(out.route_mismatch, std::abs(out.phi_inf[i] - ref.phi_inf[i]));
    if (out.route_mismatch > opt.route_tol)
        throw NumericalError("final_state_from_H: the H route disagrees with the Gamma route");
    return out;
}

}  // namespace alfven::island
