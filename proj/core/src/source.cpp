#include "alfven/source.hpp"

#include <cmath>

#include "alfven/numerics.hpp"

namespace alfven::spectral {

namespace {

using CJ = Taylor<cplx, 2>;
using RJ = Taylor<double, 2>;

CJ cjet(const ComplexPoly& p, double y) {
    CJ r;
    r.a[0] = p(cplx(y));
    r.a[1] = p.derivative()(cplx(y));
    r.a[2] = 0.5 * p.derivative(2)(cplx(y));
    return r;
}

CJ cjet(const ExtendedProfile& ext, bool want_u, double y) {
    CJ r;
    for (int k = 0; k <= 2; ++k) {
        const double v = want_u ? ext.u(y, k) : ext.b(y, k);
        r.a[static_cast<std::size_t>(k)] = v / (k == 2 ? 2.0 : 1.0);
    }
    return r;
}

}  // namespace

cplx SourceData::omega0_hat(double y) const {
    if (std::abs(y) > 1.0) return cplx(0.0);
    const double a2 = static_cast<double>(alpha) * alpha;
    return -(psi0.derivative(2)(cplx(y)) - a2 * psi0(cplx(y)));
}

cplx SourceData::j0_hat(double y) const {
    const double a2 = static_cast<double>(alpha) * alpha;
    return -(phi0.derivative(2)(cplx(y)) - a2 * phi0(cplx(y)));
}

SourceData make_source(const InitialData& data, int alpha) {
    if (alpha == 0) throw std::invalid_argument("source: alpha must be nonzero");
    SourceData s;
    s.alpha = alpha;
    s.psi0 = data.psi0.empty() ? ComplexPoly{cplx(0.0)} : data.psi0;
    s.phi0 = data.phi0.empty() ? ComplexPoly{cplx(0.0)} : data.phi0;
    s.phi0_at_0 = s.phi0(cplx(0.0));
    return s;
}

ForcingTerm::ForcingTerm(const SourceData& src, const ExtendedProfile& ext, cplx c) : src_(src), ext_(ext), c_(c) {
    const ComplexPoly u = ext.base().u.cast<cplx>();
    const ComplexPoly b = ext.base().b.cast<cplx>();
    const ComplexPoly du = u.derivative(), ddu = u.derivative(2);
    const ComplexPoly db = b.derivative(), ddb = b.derivative(2);
    const ComplexPoly uc = u - ComplexPoly{c};
    const cplx a2 = static_cast<double>(src.alpha) * src.alpha;
    const ComplexPoly b2 = b * b;
    // chi = 1 on |y| <= 1/2, so c + (u - c) chi = u
    f_inner_ = cplx(2.0) * uc * u * db * db - b * (uc * u * ddb + cplx(2.0) * uc * du * db) -
               b2 * (a2 * uc * u + c * ddu) + b2 * b * ddb + a2 * b2 * b2;
    double scale = 0.0;
    for (const auto& v : f_inner_.coeffs()) scale = std::max(scale, std::abs(v));
    std::vector<cplx> coeffs = f_inner_.coeffs();
    coeffs.resize(std::max<std::size_t>(coeffs.size(), 4), cplx(0.0));
    for (std::size_t k = 0; k < 3; ++k) {
        if (std::abs(coeffs[k]) > 1e-12 * std::max(1.0, scale))
            throw NumericalError("source: f does not vanish to third order at y = 0");
        coeffs[k] = cplx(0.0);
    }
    f_inner_ = ComplexPoly(coeffs);
    f_tilde_ = f_inner_.shift_down(3);
    b_tilde_ = b.shift_down(1);
    ComplexPoly p = src.phi0;
    std::vector<cplx> pc = p.coeffs();
    pc[0] = cplx(0.0);
    p_tilde_ = ComplexPoly(pc).shift_down(1);
}

cplx ForcingTerm::f_over_b3(double y) const {
    if (std::abs(y) <= 0.5) {
        const cplx bt = b_tilde_(cplx(y));
        return f_tilde_(cplx(y)) / (bt * bt * bt);
    }
    const cplx c = c_;
    const double a2 = static_cast<double>(src_.alpha) * src_.alpha;
    const double u = ext_.u(y), du = ext_.u(y, 1), ddu = ext_.u(y, 2);
    const double b = ext_.b(y), db = ext_.b(y, 1), ddb = ext_.b(y, 2);
    if (std::abs(b) < 1e-12) throw NumericalError("source: b vanishes away from y = 0");
    const RJ chi_j = cutoff(RJ::variable(y));
    const double chi = chi_j.a[0], dchi = chi_j.derivative(1), ddchi = chi_j.derivative(2);
    const cplx uc = u - c;
    const cplx w = c + uc * chi;
    const cplx f = 2.0 * uc * w * db * db - b * (uc * w * ddb + 2.0 * uc * (uc * dchi + du * chi) * db) -
                   b * b * (a2 * uc * w - uc * uc * ddchi + c * ddu - 2.0 * uc * du * dchi) +
                   b * b * b * ddb * chi + b * b * b * b * (a2 * chi - ddchi);
    return f / (b * b * b);
}

cplx ForcingTerm::g1(double y) const {
    const double a2 = static_cast<double>(src_.alpha) * src_.alpha;
    CJ q;
    if (std::abs(y) <= 0.5) {
        q = cjet(p_tilde_, y) / cjet(b_tilde_, y);
    } else {
        CJ num = cjet(src_.phi0, y) - CJ(src_.phi0_at_0);
        q = num / cjet(ext_, false, y);
    }
    const double u = ext_.u(y), ddu = ext_.u(y, 2);
    const cplx lap = q.derivative(2) - a2 * q.a[0];
    return src_.omega0_hat(y) - (u - c_) * lap + ddu * q.a[0];
}

cplx ForcingTerm::operator()(double y) const { return c_ * g1(y) - src_.phi0_at_0 * f_over_b3(y); }

std::vector<cplx> ForcingTerm::sample(std::span<const double> nodes) const {
    std::vector<cplx> out(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = (*this)(nodes[i]);
    return out;
}

std::vector<cplx> build_F(const SourceData& src, const ExtendedProfile& ext, cplx c, std::span<const double> nodes) {
    return ForcingTerm(src, ext, c).sample(nodes);
}

}  // namespace alfven::spectral
