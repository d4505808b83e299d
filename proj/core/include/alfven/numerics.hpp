#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "alfven/polynomial.hpp"
#include "alfven/taylor.hpp"

namespace alfven {

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline double abs_value(double v) { return std::abs(v); }
inline double abs_value(const cplx& v) { return std::abs(v); }

// C-infinity step: 0 for t <= 0, 1 for t >= 1.
template <class T, std::size_t N>
Taylor<T, N> smooth_step(const Taylor<T, N>& t) {
    auto bump = [](const Taylor<T, N>& s) {
        if (!(s.a[0] > T(0))) return Taylor<T, N>(T(0));
        return exp(-(Taylor<T, N>(T(1)) / s));
    };
    if (!(t.a[0] > T(0))) return Taylor<T, N>(T(0));
    if (!(t.a[0] < T(1))) return Taylor<T, N>(T(1));
    auto e0 = bump(t);
    auto e1 = bump(Taylor<T, N>(T(1)) - t);
    return e0 / (e0 + e1);
}

// Cutoff chi: 1 on |y| <= 1/2, 0 on |y| >= 3/4.
template <std::size_t N>
Taylor<double, N> cutoff(const Taylor<double, N>& y) {
    Taylor<double, N> arg = y.a[0] >= 0.0 ? (Taylor<double, N>(0.75) - y) * Taylor<double, N>(4.0)
                                          : (Taylor<double, N>(0.75) + y) * Taylor<double, N>(4.0);
    return smooth_step(arg);
}

inline double cutoff(double y) { return cutoff(Taylor<double, 0>(y)).a[0]; }

// Gauss-Legendre rule mapped to [0,1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadratureRule gauss_legendre_unit(int order);

namespace detail {

template <class V>
struct SimpsonPanel {
    double a, b;
    V fa, fm, fb, whole;
};

template <class V, class F>
V simpson_recurse(F& f, const SimpsonPanel<V>& p, double tol, double rel_tol, int depth, int& evals) {
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m);
    const double rm = 0.5 * (m + p.b);
    const V flm = f(lm);
    const V frm = f(rm);
    evals += 2;
    const double hl = (m - p.a) / 6.0;
    const double hr = (p.b - m) / 6.0;
    const V left = hl * (p.fa + 4.0 * flm + p.fm);
    const V right = hr * (p.fm + 4.0 * frm + p.fb);
    const V delta = left + right - p.whole;
    if (depth <= 0) {
        throw NumericalError("adaptive Simpson: recursion limit reached");
    }
    if (abs_value(delta) <= 15.0 * std::max(tol, rel_tol * abs_value(left + right))) return left + right + delta / 15.0;
    return simpson_recurse<V>(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, rel_tol, depth - 1, evals) +
           simpson_recurse<V>(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, rel_tol, depth - 1, evals);
}

}  // namespace detail

// Adaptive Simpson on [a,b]; the integrand is evaluated at the endpoints. A panel is
// accepted when its error estimate is below its share of tol or below rel_tol times
// its own value.
template <class V, class F>
V adaptive_simpson(F&& f, double a, double b, double tol, double rel_tol = 0.0, int max_depth = 48) {
    if (a == b) return V{};
    // a few initial panels so that narrow features are not missed
    constexpr int initial = 8;
    V total{};
    int evals = 0;
    const double h = (b - a) / initial;
    V fa = f(a);
    for (int k = 0; k < initial; ++k) {
        const double x0 = a + k * h;
        const double x1 = (k + 1 == initial) ? b : a + (k + 1) * h;
        const double xm = 0.5 * (x0 + x1);
        const V fm = f(xm);
        const V fb = f(x1);
        const V whole = (x1 - x0) / 6.0 * (fa + 4.0 * fm + fb);
        total += detail::simpson_recurse<V>(f, {x0, x1, fa, fm, fb, whole}, tol / initial, rel_tol, max_depth,
                                            evals);
        fa = fb;
    }
    return total;
}

// Globally adaptive Gauss-Kronrod (7,15); never evaluates the endpoints.
template <class V, class F>
V adaptive_gauss_kronrod(F&& f, double a, double b, double abs_tol, double rel_tol = 1e-13,
                         int max_intervals = 4000) {
    static constexpr std::array<double, 8> xk = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr std::array<double, 8> wk = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr std::array<double, 4> wg = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

    struct Piece {
        double a, b;
        V value;
        double err;
    };
    auto eval = [&](double lo, double hi) {
        const double c = 0.5 * (lo + hi);
        const double h = 0.5 * (hi - lo);
        const V fc = f(c);
        V kron = wk[7] * fc;
        V gauss = wg[3] * fc;
        for (int j = 0; j < 7; ++j) {
            const V f1 = f(c - h * xk[j]);
            const V f2 = f(c + h * xk[j]);
            kron += wk[j] * (f1 + f2);
            if (j % 2 == 1) gauss += wg[j / 2] * (f1 + f2);
        }
        return Piece{lo, hi, kron * h, abs_value((kron - gauss) * h)};
    };
    if (a == b) return V{};
    std::vector<Piece> pieces{eval(a, b)};
    for (int it = 0; it < max_intervals; ++it) {
        V total{};
        double err = 0.0;
        std::size_t worst = 0;
        for (std::size_t k = 0; k < pieces.size(); ++k) {
            total += pieces[k].value;
            err += pieces[k].err;
            if (pieces[k].err > pieces[worst].err) worst = k;
        }
        if (err <= std::max(abs_tol, rel_tol * abs_value(total))) return total;
        const Piece p = pieces[worst];
        const double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) return total;
        pieces[worst] = eval(p.a, m);
        pieces.push_back(eval(m, p.b));
    }
    throw NumericalError("adaptive Gauss-Kronrod: interval budget exhausted");
}

// Four-point Lagrange stencil on a non-uniform grid.
struct Stencil {
    std::size_t base = 0;
    std::array<double, 4> w{};
};

std::size_t locate_interval(std::span<const double> nodes, double x);
Stencil lagrange4(std::span<const double> nodes, double x);

template <class V>
V apply_stencil(const Stencil& s, std::span<const V> values) {
    V r{};
    for (int k = 0; k < 4; ++k) r += s.w[k] * values[s.base + k];
    return r;
}

// Cubic Hermite interpolation from values and slopes at the nodes.
template <class V>
V hermite(std::span<const double> nodes, std::span<const V> f, std::span<const V> df, double x,
          V* dfx = nullptr) {
    const std::size_t i = locate_interval(nodes, x);
    const double x0 = nodes[i], x1 = nodes[i + 1];
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    if (dfx) {
        const double d00 = (6 * t2 - 6 * t) / h, d10 = 3 * t2 - 4 * t + 1;
        const double d01 = (-6 * t2 + 6 * t) / h, d11 = 3 * t2 - 2 * t;
        *dfx = d00 * f[i] + d10 * df[i] + d01 * f[i + 1] + d11 * df[i + 1];
    }
    return h00 * f[i] + h10 * h * df[i] + h01 * f[i + 1] + h11 * h * df[i + 1];
}

// Cumulative integral of the piecewise-cubic interpolant of g, zero at nodes[origin].
template <class V>
std::vector<V> cumulative_integral(std::span<const double> nodes, std::span<const V> g,
                                   std::size_t origin) {
    const std::size_t n = nodes.size();
    std::vector<V> out(n, V{});
    auto panel = [&](std::size_t i) {
        // composite Simpson on two halves; exact for the local cubic
        const double a = nodes[i], b = nodes[i + 1];
        const double h = b - a;
        std::array<double, 3> xs = {a + 0.25 * h, a + 0.5 * h, a + 0.75 * h};
        std::array<V, 3> fs;
        for (int k = 0; k < 3; ++k) fs[k] = apply_stencil(lagrange4(nodes, xs[k]), g);
        return h / 12.0 * (g[i] + 4.0 * fs[0] + 2.0 * fs[1] + 4.0 * fs[2] + g[i + 1]);
    };
    for (std::size_t i = origin; i + 1 < n; ++i) out[i + 1] = out[i] + panel(i);
    for (std::size_t i = origin; i-- > 0;) out[i] = out[i + 1] - panel(i);
    return out;
}

// Finite-difference weights for the first derivative at x0 (Fornberg).
std::vector<double> fd_weights(std::span<const double> xs, double x0, int order);

// Root of a monotone function on [lo,hi]: bisection to width, then Newton polish.
double bisect_newton(const std::function<double(double)>& g, const std::function<double(double)>& dg,
                     double lo, double hi, double width = 1e-10, int newton_steps = 3);

// n uniform nodes on [-1,1]; for odd n the middle node is exactly 0.
std::vector<double> symmetric_grid(std::size_t n);

// Least-squares slope of ys against xs.
double ls_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace alfven
