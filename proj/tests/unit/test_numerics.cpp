#include <doctest.h>

#include <cmath>
#include <numbers>

#include "alfven/csv.hpp"
#include "alfven/numerics.hpp"

using namespace alfven;

TEST_CASE("taylor arithmetic reproduces known derivatives") {
    using J = Taylor<double, 5>;
    const J x = J::variable(0.3);
    const J e = exp(x * x);
    // d/dx exp(x^2) = 2x exp(x^2)
    CHECK(e.derivative(1) == doctest::Approx(2 * 0.3 * std::exp(0.09)).epsilon(1e-14));
    // (1/(1+x))''' = -6/(1+x)^4
    const J r = J(1.0) / (J(1.0) + x);
    CHECK(r.derivative(3) == doctest::Approx(-6.0 / std::pow(1.3, 4)).epsilon(1e-13));
}

TEST_CASE("cutoff is one on the inner band and vanishes with derivatives at 3/4") {
    using J = Taylor<double, 2>;
    CHECK(cutoff(0.0) == 1.0);
    CHECK(cutoff(0.5) == 1.0);
    CHECK(cutoff(-0.5) == 1.0);
    for (double y : {0.75, -0.75, 0.9}) {
        const J c = cutoff(J::variable(y));
        CHECK(std::abs(c.a[0]) <= 1e-12);
        CHECK(std::abs(c.derivative(1)) <= 1e-12);
        CHECK(std::abs(c.derivative(2)) <= 1e-12);
    }
    const double mid = cutoff(0.625);
    CHECK(mid == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    const auto rule = gauss_legendre_unit(32);
    double s = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * std::pow(rule.nodes[k], 63);
    CHECK(s == doctest::Approx(1.0 / 64).epsilon(1e-13));
}

TEST_CASE("adaptive quadratures") {
    const double s = adaptive_simpson<double>([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12);
    CHECK(s == doctest::Approx(std::numbers::e - 1).epsilon(1e-11));
    const double g = adaptive_gauss_kronrod<double>([](double x) { return std::log(x); }, 0.0, 1.0, 1e-12);
    CHECK(g == doctest::Approx(-1.0).epsilon(1e-10));
    const cplx z = adaptive_gauss_kronrod<cplx>(
        [](double x) { return 1.0 / (x - cplx(0.5, 1e-3)); }, 0.0, 1.0, 1e-12);
    const cplx exact = std::log(cplx(0.5, -1e-3)) - std::log(cplx(-0.5, -1e-3));
    CHECK(std::abs(z - exact) <= 1e-10);
}

TEST_CASE("cumulative integral of cubic interpolant is exact for cubics") {
    std::vector<double> x(41);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = -1.0 + 2.0 * i / 40.0 + 0.01 * std::sin(3.0 * i);
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i] * x[i] * x[i] - x[i];
    const auto c = cumulative_integral<double>(x, g, 20);
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto F = [](double t) { return t * t * t * t / 4 - t * t / 2; };
        CHECK(c[i] == doctest::Approx(F(x[i]) - F(x[20])).epsilon(1e-12));
    }
}

TEST_CASE("fd weights give the classical five-point stencil") {
    const std::vector<double> xs = {-2, -1, 0, 1, 2};
    const auto w = fd_weights(xs, 0.0, 1);
    CHECK(w[0] == doctest::Approx(1.0 / 12));
    CHECK(w[1] == doctest::Approx(-8.0 / 12));
    CHECK(w[3] == doctest::Approx(8.0 / 12));
}

TEST_CASE("bisection with newton polish") {
    const double r = bisect_newton([](double x) { return x * x - 2; }, [](double x) { return 2 * x; }, 0, 2);
    CHECK(std::abs(r - std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("csv number format round-trips") {
    for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.5, 2.0}) CHECK(std::stod(csv::format(v)) == v);
    CHECK(csv::format(0.5) == "0.5");
    CHECK(csv::format(-0.0) == "0");
    CHECK(csv::format(std::nan("")) == "nan");
    CHECK(csv::format(-HUGE_VAL) == "-inf");
}

TEST_CASE("csv table") {
    csv::Table t({"t", "err"});
    t.add_row({0.0, 0.25});
    t.add_row(std::vector<double>{1.5, 1e-7});
    CHECK(t.rows() == 2);
    CHECK(t.str() == "t,err\n0,0.25\n1.5,1e-07\n");
    CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
}
