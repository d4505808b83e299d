#include <doctest.h>

#include <cmath>
#include <numbers>

#include "alfven/spectral.hpp"
#include "fixtures.hpp"
#include "resolvent_fd.hpp"

using namespace alfven;
using namespace alfven::profiles;
using namespace alfven::spectral;

namespace {

using CT = Taylor<cplx, 2>;

BackgroundProfile curved() { return BackgroundProfile(RealPoly{0.0, 0.3, 0.1}, RealPoly{0.0, 1.0, 0.2}, 0.4); }

SourceData bump_source(int alpha) {
    InitialData d;
    // (1 - y^2)(1 + 0.5 y) for phi0, 0.2 y (1 - y^2) for psi0
    d.phi0 = ComplexPoly{cplx(1.0), cplx(0.5), cplx(-1.0), cplx(-0.5)};
    d.psi0 = ComplexPoly{cplx(0.0), cplx(0.2), cplx(0.0), cplx(-0.2)};
    return make_source(d, alpha);
}

SourceData parabola_source(int alpha) {
    InitialData d;
    d.phi0 = ComplexPoly{cplx(1.0), cplx(0.0), cplx(-1.0)};
    return make_source(d, alpha);
}

CT jet(const RealPoly& p, double y) {
    const ComplexPoly q = p.cast<cplx>();
    return q(CT::variable(cplx(y)));
}

// F from the un-split right-hand side: c * RHS - phi0(0) * L_c[chi / b]
cplx forcing_oracle(const ExtendedProfile& ext, const SourceData& src, cplx c, double y) {
    const double a2 = static_cast<double>(src.alpha) * src.alpha;
    const CT u = jet(ext.base().u, y), b = jet(ext.base().b, y);
    const CT H = (u + b - CT(c)) * (u - b - CT(c));
    const CT chi = to_complex(cutoff(Taylor<double, 2>::variable(y)));
    const CT phi0 = src.phi0(CT::variable(cplx(y)));
    const CT g = phi0 / b;
    const cplx lap_g = g.derivative(2) - a2 * g.a[0];
    const cplx rhs = src.omega0_hat(y) - (u.a[0] - c) * lap_g + u.derivative(2) * g.a[0];
    const CT k = chi / b;
    const cplx Lk = H.derivative(1) * k.derivative(1) + H.a[0] * k.derivative(2) - a2 * H.a[0] * k.a[0];
    return c * rhs - src.phi0_at_0 * Lk;
}

}  // namespace

TEST_CASE("forcing term at c = 0 for the still fixture") {
    const auto ext = extend(fixtures::still());
    const auto src = parabola_source(1);
    const ForcingTerm F(src, ext, cplx(0.0));
    CHECK(std::abs(F(0.25) - cplx(-0.25)) < 1e-14);
    CHECK(std::abs(F(-0.4) - cplx(0.4)) < 1e-14);

    const auto zero = make_source(InitialData{}, 2);
    const ForcingTerm Z(zero, ext, cplx(0.3, 0.1));
    for (double y : {-0.9, -0.3, 0.0, 0.6, 0.8}) CHECK(std::abs(Z(y)) == 0.0);
}

TEST_CASE("f has a triple zero at y = 0") {
    const auto ext = extend(curved());
    for (cplx c : {cplx(0.0), cplx(0.4, 0.2), cplx(-1.1, -0.03)}) {
        const ForcingTerm F(bump_source(2), ext, c);
        const auto& co = F.f_inner().coeffs();
        for (std::size_t k = 0; k < 3 && k < co.size(); ++k) CHECK(co[k] == cplx(0.0));
    }
}

TEST_CASE("forcing term matches the un-split operator form") {
    for (const auto& prof : {fixtures::linear(), curved()}) {
        const auto ext = extend(prof);
        for (int alpha : {1, 3}) {
            const auto src = bump_source(alpha);
            for (cplx c : {cplx(0.3, 0.1), cplx(-0.7, 0.02), cplx(1.2, -0.4)}) {
                const ForcingTerm F(src, ext, c);
                for (double y : {-0.95, -0.7, -0.62, -0.3, 0.1, 0.45, 0.55, 0.68, 0.74, 0.9}) {
                    const cplx want = forcing_oracle(ext, src, c, y);
                    CHECK(std::abs(F(y) - want) <= 1e-11 * (1.0 + std::abs(want)));
                }
            }
        }
    }
}

TEST_CASE("sigma, chi and R1 on the still fixture") {
    const auto ext = extend(fixtures::still());
    const auto c = make_spectral_point(ext, cplx(0.5));
    const auto [sp, sm] = compute_sigma(ext, c);
    CHECK(std::abs(sp - cplx(-1.0)) < 1e-12);
    CHECK(std::abs(sm - cplx(-1.0)) < 1e-12);
    const auto [xp, xm] = compute_chi(ext, 0.5);
    CHECK(xp == 1);
    CHECK(xm == 1);
    const auto pair = solve_pair(ext, 1, c);
    const auto d = decompose_I(ext, pair.plus);
    CHECK(std::abs(d.R1) < 1e-14);

    const auto z = make_spectral_point(ext, cplx(0.0));
    const auto [zp, zm] = compute_sigma(ext, z);
    CHECK(zp == cplx(0.0));
    CHECK(zm == cplx(0.0));
}

TEST_CASE("imaginary part of sigma off the axis") {
    const auto ext = extend(curved());
    for (double eps : {0.01, -0.03}) {
        const auto c = make_spectral_point(ext, cplx(0.4, eps));
        const auto [sp, sm] = compute_sigma(ext, c);
        const double yp = c.y_c_plus, ym = c.y_c_minus;
        CHECK(sp.imag() == doctest::Approx(-eps * (ext.W(Side::plus, yp, 1) - ext.W(Side::minus, yp, 1))));
        CHECK(sm.imag() == doctest::Approx(-eps * (ext.W(Side::plus, ym, 1) - ext.W(Side::minus, ym, 1))));
    }
}

TEST_CASE("sigma is comparable to |c| on the linear fixtures") {
    for (const auto& prof : {fixtures::still(), fixtures::linear()}) {
        const auto ext = extend(prof);
        for (int k = 1; k < 40; ++k) {
            const double cr = ext.d0_min() + (ext.d0_max() - ext.d0_min()) * k / 40.0;
            if (std::abs(cr) < 1e-9) continue;
            const auto [sp, sm] = compute_sigma(ext, make_spectral_point(ext, cplx(cr)));
            for (cplx s : {sp, sm}) {
                CHECK(std::abs(s) >= 0.1 * std::abs(cr));
                CHECK(std::abs(s) <= 10 * std::abs(cr));
            }
        }
    }
}

TEST_CASE("chi covers every real c away from the excluded points") {
    for (const auto& prof : {fixtures::still(), fixtures::linear(), curved()}) {
        const auto ext = extend(prof);
        for (int k = 0; k <= 400; ++k) {
            const double cr = ext.d0_min() + (ext.d0_max() - ext.d0_min()) * k / 400.0;
            if (is_excluded(ext, cr, 1e-6)) continue;
            const auto [xp, xm] = compute_chi(ext, cr);
            CHECK(xp * xp + xm * xm >= 1);
        }
    }
}

TEST_CASE("I is real and positive for real c above the range") {
    const auto ext = extend(fixtures::still());
    const auto pair = solve_pair(ext, 1, make_spectral_point(ext, cplx(2.0)));
    const auto [ip, im] = compute_I(ext, pair);
    CHECK(std::abs(ip.imag()) < 1e-14);
    CHECK(ip.real() > 0.0);
    CHECK(im.real() > 0.0);
}

TEST_CASE("Schwarz reflection of I and D") {
    const auto ext = extend(fixtures::linear());
    const cplx c(0.3, 0.1);
    const auto up = compute_D(ext, 2, c);
    const auto dn = compute_D(ext, 2, std::conj(c));
    CHECK(std::abs(up.I_plus - std::conj(dn.I_plus)) <= 1e-10 * std::abs(up.I_plus));
    CHECK(std::abs(up.I_minus - std::conj(dn.I_minus)) <= 1e-10 * std::abs(up.I_minus));
    CHECK(std::abs(up.D - std::conj(dn.D)) <= 1e-10 * std::abs(up.D));
}

TEST_CASE("decomposition of sigma I off the axis") {
    for (const auto& prof : {fixtures::linear(), curved()}) {
        const auto ext = extend(prof);
        const auto c = make_spectral_point(ext, cplx(0.3, 0.1));
        const auto pair = solve_pair(ext, 1, c);
        const auto [ip, im] = compute_I(ext, pair);
        const auto dp = decompose_I(ext, pair.plus);
        const auto dm = decompose_I(ext, pair.minus);
        CHECK(std::abs(dp.sigma_I() - dp.sigma * ip) <= 1e-8);
        CHECK(std::abs(dm.sigma_I() - dm.sigma * im) <= 1e-8);

        // D assembled from the decomposed I agrees with the direct one
        const auto w = compute_D(ext, pair);
        const cplx ipd = dp.sigma_I() / dp.sigma, imd = dm.sigma_I() / dm.sigma;
        const cplx Dd = c.c * c.c * w.P * ipd * imd - w.phi_plus0 * w.phi_plus0 * ipd -
                        w.phi_minus0 * w.phi_minus0 * imd;
        CHECK(std::abs(Dd - w.D) <= 1e-10 * std::abs(w.D));
    }
}

TEST_CASE("P vanishes at 0 and is negative on D0") {
    const auto ext = extend(fixtures::linear());
    const auto p0 = solve_pair(ext, 1, make_spectral_point(ext, cplx(0.0)));
    CHECK(std::abs(compute_P(p0)) < 1e-14);
    for (double cr : {-1.2, -0.6, -0.2, 0.1, 0.5, 0.9, 1.3}) {
        const auto pair = solve_pair(ext, 1, make_spectral_point(ext, cplx(cr)));
        const cplx P = compute_P(pair);
        CHECK(P.real() < 0.0);
        CHECK(std::abs(P.imag()) < 1e-12);
    }
    // P vanishes like |c|: the ratio settles to the same nonzero value from both sides
    auto ratio = [&](double cr) {
        return std::abs(compute_P(solve_pair(ext, 1, make_spectral_point(ext, cplx(cr))))) / std::abs(cr);
    };
    const double r3 = ratio(1e-3), r4 = ratio(1e-4), l4 = ratio(-1e-4);
    CHECK(r4 > 0.1);
    CHECK(std::abs(r3 - r4) <= 1e-4 * r4);
    CHECK(std::abs(l4 - r4) <= 1e-8 * r4);
}

TEST_CASE("boundary Wronskian") {
    const auto ext = extend(fixtures::still());
    const auto w = compute_D(ext, 1, cplx(0.5));
    CHECK(w.boundary);
    CHECK_FALSE(w.inverse_is_zero);
    CHECK(w.D_re * w.D_re + w.D_im * w.D_im >= 0.01);
    const auto [ire_p, ire_m] = compute_I_re(ext, solve_pair(ext, 1, w.c));
    CHECK(ire_p == doctest::Approx(w.I_re_plus).epsilon(1e-14));
    CHECK(ire_m == doctest::Approx(w.I_re_minus).epsilon(1e-14));

    for (double c : {0.0, 1.0, -1.0}) {
        const auto z = compute_D(ext, 1, cplx(c));
        CHECK(z.inverse_is_zero);
        CHECK(z.inv_abs_D() == 0.0);
    }
}

TEST_CASE("D grows like 1/|c| along the imaginary axis") {
    const auto ext = extend(fixtures::still());
    std::vector<double> v;
    for (double eps : {1e-2, 1e-3, 1e-4}) v.push_back(std::abs(compute_D(ext, 1, cplx(0.0, eps)).D) * eps);
    CHECK(v[0] >= 0.1);
    CHECK(v[1] >= v[0] * (1 - 1e-3));
    // H = -(y^2 + eps^2) here, so I_+- ~ -pi/(2 eps) and eps |D| -> pi
    CHECK(v[2] == doctest::Approx(std::numbers::pi).epsilon(1e-3));
}

TEST_CASE("Plemelj limit of sigma I") {
    const auto ext = extend(fixtures::still());
    const auto base = compute_D(ext, 1, cplx(0.5));
    const cplx target = base.sigma_plus * base.I_re_plus + cplx(0.0, std::numbers::pi * base.chi_plus);
    std::vector<double> err;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const auto w = compute_D(ext, 1, cplx(0.5, eps));
        err.push_back(std::abs(w.sigma_plus * w.I_plus - target));
    }
    CHECK(err[1] < err[0]);
    CHECK(err[2] < err[1]);
    CHECK(err[2] <= 1e-3);
}

TEST_CASE("T and L vanish for zero data") {
    const auto ext = extend(fixtures::linear());
    const auto c = make_spectral_point(ext, cplx(0.2, 0.1));
    const auto pair = solve_pair(ext, 1, c);
    const ForcingTerm F(make_source(InitialData{}, 1), ext, c.c);
    const auto tl = compute_TL(F, ext, pair);
    CHECK(std::abs(tl.T_plus) == 0.0);
    CHECK(std::abs(tl.T_minus) == 0.0);
    CHECK(std::abs(tl.L) == 0.0);
    CHECK_THROWS_AS(compute_TL(ForcingTerm(make_source(InitialData{}, 1), ext, cplx(0.0)), ext, pair), DomainError);
}

TEST_CASE("closed-form coefficients solve the matching conditions") {
    const auto ext = extend(curved());
    const auto src = bump_source(2);
    for (cplx c : {cplx(0.3, 0.2), cplx(-0.5, -0.05), cplx(1.0, 0.3)}) {
        const auto sp = make_spectral_point(ext, c);
        const auto pair = solve_pair(ext, 2, sp);
        const auto w = compute_D(ext, pair);
        const auto tl = compute_TL(ForcingTerm(src, ext, c), ext, pair);
        const auto a = coefficients_closed_form(w, tl);
        const auto b = coefficients_linear_solve(w, tl);
        const double scale = std::abs(a.mu_plus) + std::abs(a.nu_plus) + std::abs(a.mu_minus) + std::abs(a.nu_minus);
        CHECK(std::abs(a.mu_plus - b.mu_plus) <= 1e-12 * scale);
        CHECK(std::abs(a.mu_minus - b.mu_minus) <= 1e-12 * scale);
        CHECK(std::abs(a.nu_plus - b.nu_plus) <= 1e-12 * scale);
        CHECK(std::abs(a.nu_minus - b.nu_minus) <= 1e-12 * scale);
        CHECK(std::abs(w.phi_plus0 * a.nu_plus - w.phi_minus0 * a.nu_minus) <= 1e-10);
    }
}

TEST_CASE("inhomogeneous solution at c = 0.3 + 0.2i") {
    for (const auto& prof : {fixtures::linear(), curved()}) {
        const auto ext = extend(prof);
        const auto src = bump_source(1);
        const cplx c(0.3, 0.2);
        const auto sol = solve_inhomogeneous(src, ext, c);
        CHECK(std::abs(sol.theta.front()) <= 1e-10);
        CHECK(std::abs(sol.theta.back()) <= 1e-10);
        CHECK(sol.representation_mismatch <= 1e-8);
        CHECK(sol.value_jump <= 1e-8);
        CHECK(sol.slope_jump <= 1e-8);
        CHECK(sol.solve_discrepancy <= 1e-12);
        CHECK(inhomogeneous_residual(sol, src, ext, (sol.y[1] - sol.y[0]) / 32) <= 1e-6);

        std::vector<double> yf;
        const auto fd = fixtures::resolvent_theta(ext, src, c, 513, yf);
        double err = 0.0;
        for (std::size_t i = 0; i < yf.size(); ++i) err = std::max(err, std::abs(fd[i] - sol.theta[2 * i]));
        CHECK(err <= 1e-4);
    }
}

TEST_CASE("zero source gives zero Theta") {
    const auto ext = extend(fixtures::linear());
    const auto sol = solve_inhomogeneous(make_source(InitialData{}, 1), ext, cplx(0.1, 0.2));
    for (const auto& v : sol.theta) CHECK(std::abs(v) == 0.0);
    CHECK(std::abs(sol.mu_plus) == 0.0);
    CHECK(std::abs(sol.nu_minus) == 0.0);
    CHECK_THROWS_AS(solve_inhomogeneous(make_source(InitialData{}, 1), ext, cplx(0.1, 1e-8)), DomainError);
}

TEST_CASE("Plemelj limits of mu_+ and nu_+") {
    const auto ext = extend(fixtures::still());
    const auto src = bump_source(1);
    const double cr = 0.5;
    const auto sp0 = make_spectral_point(ext, cplx(cr));
    const auto p0 = solve_pair(ext, 1, sp0);
    const auto w0 = compute_D(ext, p0);
    const auto lim = boundary_coefficients(w0, compute_TL(ForcingTerm(src, ext, cplx(cr)), ext, p0), +1);
    std::vector<double> emu, enu;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const cplx c(cr, eps);
        const auto sp = make_spectral_point(ext, c);
        const auto pair = solve_pair(ext, 1, sp);
        const auto k = coefficients_closed_form(compute_D(ext, pair), compute_TL(ForcingTerm(src, ext, c), ext, pair));
        emu.push_back(std::abs(k.mu_plus - lim.mu_plus));
        enu.push_back(std::abs(k.nu_plus - lim.nu_plus));
    }
    CHECK(emu[1] < emu[0]);
    CHECK(emu[2] < emu[1]);
    CHECK(emu[2] <= 1e-3);
    CHECK(enu[1] < enu[0]);
    CHECK(enu[2] < enu[1]);
    CHECK(enu[2] <= 1e-3);

    // real data: the two boundary values are conjugate
    const auto below = boundary_coefficients(w0, compute_TL(ForcingTerm(src, ext, cplx(cr)), ext, p0), -1);
    CHECK(std::abs(below.mu_plus - std::conj(lim.mu_plus)) <= 1e-12 * std::abs(lim.mu_plus));
    CHECK(std::abs(below.nu_minus - std::conj(lim.nu_minus)) <= 1e-12 * std::abs(lim.nu_minus));
}

TEST_CASE("growth of nu against l(c)") {
    const auto ext = extend(fixtures::still());
    const auto src = parabola_source(1);
    std::vector<double> ratio;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        const cplx c(0.0, eps);
        const auto pair = solve_pair(ext, 1, make_spectral_point(ext, c));
        const ForcingTerm F(src, ext, c);
        double fmax = 0.0;
        for (int k = -50; k <= 50; ++k) fmax = std::max(fmax, std::abs(F(k / 50.0)));
        const auto tl = compute_TL(F, ext, pair);
        const auto k = coefficients_closed_form(compute_D(ext, pair), tl);
        ratio.push_back(std::abs(k.nu_plus) / (fmax * l_weight(c)));
        CHECK(std::abs(tl.T_plus) / l_weight(c) < 10.0 * fmax);
    }
    for (double r : ratio) CHECK(r < 10.0);
}

TEST_CASE("no eigenvalue near c = 2 for the still fixture") {
    const auto ext = extend(fixtures::still());
    CHECK(stern_min_singular_value(ext, 1, cplx(2.0), 257) >= 1e-3);
}
