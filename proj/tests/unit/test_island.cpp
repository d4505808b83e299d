#include <doctest.h>

#include <cmath>

#include "alfven/island.hpp"
#include "fixtures.hpp"

using namespace alfven;
using namespace alfven::profiles;
using namespace alfven::island;

namespace {

spectral::SourceData source_from(ComplexPoly phi0, int alpha) {
    spectral::InitialData d;
    d.phi0 = std::move(phi0);
    return spectral::make_source(d, alpha);
}

BackgroundProfile odd_profile() {
    return BackgroundProfile(RealPoly{0.0, 0.2, 0.0, 0.1}, RealPoly{0.0, 1.0, 0.0, 0.1}, 0.5);
}

BackgroundProfile mixed() { return BackgroundProfile(RealPoly{0.0, 0.3, 0.1}, RealPoly{0.0, 1.0}, 0.3); }

// kappa vanishes here but u'(0)u''(0) != b'(0)b''(0)
BackgroundProfile kappa_zero() { return BackgroundProfile(RealPoly{0.0, 0.2, 0.1}, RealPoly{0.0, 1.0}, 0.3); }

// coefficient of ln|y| in d/dy(b Gamma) at 0, from expanding 1/((u^2 - b^2) phi^2)
double log_coefficient(const BackgroundProfile& p) {
    const double u1 = p.u.derivative()(0.0), u2 = 0.5 * p.u.derivative(2)(0.0);
    const double b1 = p.b.derivative()(0.0), b2 = 0.5 * p.b.derivative(2)(0.0);
    return 2.0 * std::abs(u1 * u2 - b1 * b2) / (b1 * b1 - u1 * u1);
}

}  // namespace

TEST_CASE("b Gamma on the still fixture") {
    const auto ext = extend(fixtures::still());
    const GammaEvaluator g(ext, 1, Side::plus);
    CHECK(g.b_gamma(0.5) == doctest::Approx(-0.4434094).epsilon(1e-7));
    CHECK(std::abs(g.b_gamma(1.0)) <= 1e-10);
    CHECK(g.b_gamma(0.0) == -1.0);
    CHECK(g.scale() == doctest::Approx(-1.0));
}

TEST_CASE("b Gamma closed form on linear profiles") {
    for (auto [k, k0] : {std::pair{0.0, 1.0}, {0.5, 1.0}, {0.3, 0.8}, {-0.4, 2.0}}) {
        const auto ext = extend(fixtures::scaled(k, k0));
        for (int alpha : {1, 2}) {
            const GammaEvaluator gp(ext, alpha, Side::plus), gm(ext, alpha, Side::minus);
            double err = 0.0;
            for (double y = 1e-3; y <= 1.0; y += 0.0037) {
                err = std::max(err, std::abs(gp.b_gamma(y) - fixtures::b_gamma_plus(alpha, y)));
                err = std::max(err, std::abs(gm.b_gamma(-y) - fixtures::b_gamma_minus(alpha, -y)));
            }
            CHECK(err <= 1e-6);
            CHECK(std::abs(gp.b_gamma(1e-4) + 1.0) <= 1e-3);
            CHECK(std::abs(gm.b_gamma(-1e-4) + 1.0) <= 1e-3);
            CHECK(std::abs(gp.b_gamma(1.0)) <= 1e-10);
            CHECK(std::abs(gm.b_gamma(-1.0)) <= 1e-10);
        }
    }
}

TEST_CASE("compute_gamma grid output") {
    const auto ext = extend(fixtures::linear());
    IslandOptions opt;
    opt.n_out = 65;
    const auto gp = compute_gamma(ext, 1, Side::plus, opt);
    const auto gm = compute_gamma(ext, 1, Side::minus, opt);
    REQUIRE(gp.y.size() == 33);
    CHECK(gp.y.front() == 0.0);
    CHECK(gp.y.back() == 1.0);
    CHECK(gm.y.back() == -1.0);
    CHECK(std::isnan(gp.gamma.front()));
    CHECK(gp.b_gamma.front() == -1.0);
    for (std::size_t i = 1; i < gp.y.size(); ++i) {
        CHECK(std::abs(gp.b_gamma[i] - fixtures::b_gamma_plus(1, gp.y[i])) <= 1e-6);
        CHECK(std::abs(gm.b_gamma[i] - fixtures::b_gamma_minus(1, gm.y[i])) <= 1e-6);
        CHECK(gp.b_gamma[i] == doctest::Approx(ext.b(gp.y[i]) * gp.gamma[i]).epsilon(1e-14));
    }
    CHECK_THROWS(compute_gamma(ext, 0, Side::plus, opt));
}

TEST_CASE("b Gamma tends to -1 at 0") {
    for (const auto& p : {fixtures::linear(), fixtures::quadratic_b(), mixed()}) {
        const auto ext = extend(p);
        const GammaEvaluator gp(ext, 1, Side::plus), gm(ext, 1, Side::minus);
        CHECK(std::abs(gp.b_gamma(1e-3) + 1.0) <= 5e-3);
        CHECK(std::abs(gm.b_gamma(-1e-3) + 1.0) <= 5e-3);
    }
}

TEST_CASE("odd profiles give mirror-symmetric b Gamma") {
    const auto ext = extend(odd_profile());
    const GammaEvaluator gp(ext, 2, Side::plus), gm(ext, 2, Side::minus);
    for (double y = 0.01; y < 1.0; y += 0.031) CHECK(std::abs(gm.b_gamma(-y) - gp.b_gamma(y)) <= 1e-9);
}

TEST_CASE("|b Gamma| decreases with alpha on the linear fixture") {
    const auto ext = extend(fixtures::linear());
    const GammaEvaluator g1(ext, 1, Side::plus), g2(ext, 2, Side::plus), g3(ext, 3, Side::plus);
    for (double y = 0.05; y < 1.0; y += 0.05) {
        CHECK(std::abs(g2.b_gamma(y)) < std::abs(g1.b_gamma(y)));
        CHECK(std::abs(g3.b_gamma(y)) < std::abs(g2.b_gamma(y)));
    }
}

TEST_CASE("phi at c = 0 solves the Sturmian equation") {
    for (const auto& p : {fixtures::linear(), fixtures::quadratic_b()}) {
        const auto ext = extend(p);
        for (Side s : {Side::plus, Side::minus}) {
            const GammaEvaluator g(ext, 1, s);
            CHECK(sturmian::residual_homogeneous(g.phi(), ext) <= 1e-7);
        }
    }
}

TEST_CASE("kappa") {
    CHECK(kappa(fixtures::linear()) == 0.0);
    CHECK(kappa(fixtures::quadratic_b()) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(kappa(mixed()) == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(std::abs(kappa(kappa_zero())) <= 1e-15);
}

TEST_CASE("blowup diagnostic") {
    const auto lin = blowup_diagnostic(extend(fixtures::linear()), 1);
    CHECK(lin.kappa == 0.0);
    CHECK(std::abs(lin.log_slope) <= 0.02);
    CHECK(lin.y.size() == 11);
    CHECK(lin.y.front() == 0.0625);

    const auto quad = blowup_diagnostic(extend(fixtures::quadratic_b()), 1);
    CHECK(quad.kappa == doctest::Approx(2.0));
    CHECK(quad.log_slope >= 0.05);

    const auto mix = blowup_diagnostic(extend(mixed()), 1);
    CHECK(std::abs(mix.log_slope) > 0.02);

    // the growth of d/dy(b Gamma) over the last halvings follows the ln|y| coefficient,
    // the same on both sides
    for (const auto& p : {fixtures::linear(), fixtures::quadratic_b(), mixed(), kappa_zero()}) {
        const auto d = blowup_diagnostic(extend(p), 1);
        const double span = std::log(d.y[6] / d.y[10]);
        const double tail_plus = (d.d_plus[10] - d.d_plus[6]) / span;
        const double tail_minus = (d.d_minus[10] - d.d_minus[6]) / span;
        CHECK(std::abs(std::abs(tail_plus) - log_coefficient(p)) <= 2e-3);
        CHECK(std::abs(tail_plus - tail_minus) <= 2e-3);
    }
}

TEST_CASE("limiting profiles") {
    const cplx p0(0.8, -0.3);
    {
        const auto ext = extend(fixtures::linear());
        IslandOptions opt;
        opt.n_out = 129;
        const auto isl = limiting_profiles(ext, 1, p0, opt);
        const std::size_t m = isl.mid();
        CHECK(isl.y[m] == 0.0);
        CHECK(std::abs(isl.psi_inf[m] - 0.5 * p0) <= 1e-15);
        CHECK(isl.phi_inf[m] == p0);
        for (std::size_t i = 0; i < isl.y.size(); ++i) {
            CHECK(std::abs(isl.phi_inf[i] + isl.b_gamma[i] * p0) <= 1e-15);
            if (i != m) CHECK(std::abs(isl.psi_inf[i] - 0.5 * isl.phi_inf[i]) <= 1e-14);
        }
        CHECK(isl.gamma_plus.size() == m + 1);
        CHECK(isl.gamma_minus.size() == m + 1);
        CHECK(isl.b_gamma[m + 10] == doctest::Approx(ext.b(isl.y[m + 10]) * isl.gamma_plus[10]));
        CHECK(isl.b_gamma[m - 10] == doctest::Approx(ext.b(isl.y[m - 10]) * isl.gamma_minus[m - 10]));
        CHECK(std::abs(isl.phi_inf.front()) <= 1e-10);
        CHECK(std::abs(isl.phi_inf.back()) <= 1e-10);

        const auto twice = limiting_profiles(ext, 1, 2.0 * p0, opt);
        for (std::size_t i = 0; i < isl.y.size(); ++i) {
            CHECK(twice.phi_inf[i] == 2.0 * isl.phi_inf[i]);
            CHECK(twice.psi_inf[i] == 2.0 * isl.psi_inf[i]);
        }

        const GammaEvaluator gp(ext, 1, Side::plus), gm(ext, 1, Side::minus);
        CHECK(std::abs(p0) * std::abs(gp.b_gamma(1e-4) - gm.b_gamma(-1e-4)) <= 1e-2 * std::abs(p0));
    }
    {
        const auto isl = limiting_profiles(extend(fixtures::quadratic_b()), 2, p0);
        for (const auto& v : isl.psi_inf) CHECK(v == cplx(0.0));
    }
}

TEST_CASE("forcing moment matches the integration by parts bracket") {
    for (const auto& p : {fixtures::still(), fixtures::linear(), mixed()}) {
        const auto ext = extend(p);
        const auto src = source_from(ComplexPoly{cplx(1.0, 0.5), cplx(0.3), cplx(-1.0, -0.5), cplx(-0.3)}, 1);
        const double u1 = p.u.derivative()(0.0), b1 = p.b.derivative()(0.0);
        const cplx bracket0 = -src.phi0_at_0 * (u1 * u1 - b1 * b1) / b1;
        for (Side s : {Side::plus, Side::minus}) {
            const GammaEvaluator g(ext, 1, s);
            const ForcingMoment J(src, ext, g.phi(), 1e-14);
            for (double a : {0.05, 0.3, 0.6, 0.7, 0.95}) {
                const double y = s == Side::plus ? a : -a;
                const auto chi = cutoff(Taylor<double, 1>::variable(y));
                const double b = ext.b(y), db = ext.b(y, 1), u = ext.u(y);
                const double H = u * u - b * b;
                const double phi = g.phi().phi_at(y).real(), dphi = g.phi().dphi_at(y).real();
                const double dk = chi.derivative(1) / b - chi.a[0] * db / (b * b);
                const double B = H * phi * dk - H * dphi * chi.a[0] / b;
                CHECK(std::abs(J(y) + src.phi0_at_0 * B - bracket0) <= 1e-8);
            }
        }
    }
}

TEST_CASE("final state from H agrees with the Gamma route") {
    IslandOptions opt;
    opt.n_out = 1025;
    {
        const auto ext = extend(fixtures::still());
        const auto src = source_from(ComplexPoly{cplx(1.0), cplx(0.0), cplx(-1.0)}, 1);
        const auto h = final_state_from_H(src, ext, opt);
        const auto ref = limiting_profiles(ext, 1, src.phi0_at_0, opt);
        double err = 0.0;
        for (std::size_t i = 0; i < h.y.size(); ++i) err = std::max(err, std::abs(h.phi_inf[i] - ref.phi_inf[i]));
        CHECK(err <= 1e-6);
        CHECK(h.route_mismatch == doctest::Approx(err));
    }
    {
        const auto ext = extend(mixed());
        const auto src = source_from(ComplexPoly{cplx(1.0, 0.5), cplx(0.3), cplx(-1.0, -0.5), cplx(-0.3)}, 2);
        CHECK(final_state_from_H(src, ext, opt).route_mismatch <= 1e-6);
    }
    {
        const auto ext = extend(fixtures::linear());
        const auto src = source_from(ComplexPoly{cplx(0.0), cplx(1.0), cplx(0.0), cplx(-1.0)}, 1);
        const auto h = final_state_from_H(src, ext, opt);
        for (std::size_t i = 0; i < h.y.size(); ++i) {
            CHECK(h.phi_inf[i] == cplx(0.0));
            CHECK(h.psi_inf[i] == cplx(0.0));
        }
    }
}
