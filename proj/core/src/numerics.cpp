#include "alfven/numerics.hpp"

#include <numbers>

namespace alfven {

QuadratureRule gauss_legendre_unit(int order) {
    if (order < 1) throw std::invalid_argument("gauss_legendre_unit: order must be positive");
    QuadratureRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int n = order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = 0.5 * (1.0 - x);
        rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[i] = 0.5 * w;
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    return rule;
}

std::size_t locate_interval(std::span<const double> nodes, double x) {
    const std::size_t n = nodes.size();
    if (n < 2) throw std::invalid_argument("locate_interval: need at least two nodes");
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    std::size_t i = it == nodes.begin() ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
    return std::min(i, n - 2);
}

Stencil lagrange4(std::span<const double> nodes, double x) {
    const std::size_t n = nodes.size();
    if (n < 4) throw std::invalid_argument("lagrange4: need at least four nodes");
    const std::size_t i = locate_interval(nodes, x);
    std::size_t base = i == 0 ? 0 : i - 1;
    base = std::min(base, n - 4);
    Stencil s;
    s.base = base;
    for (int j = 0; j < 4; ++j) {
        double w = 1.0;
        for (int k = 0; k < 4; ++k) {
            if (k == j) continue;
            w *= (x - nodes[base + k]) / (nodes[base + j] - nodes[base + k]);
        }
        s.w[j] = w;
    }
    return s;
}

std::vector<double> fd_weights(std::span<const double> xs, double x0, int order) {
    const int n = static_cast<int>(xs.size()) - 1;
    std::vector<std::vector<double>> c(n + 1, std::vector<double>(order + 1, 0.0));
    double c1 = 1.0;
    double c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n + 1);
    for (int i = 0; i <= n; ++i) w[i] = c[i][order];
    return w;
}

double bisect_newton(const std::function<double(double)>& g, const std::function<double(double)>& dg,
                     double lo, double hi, double width, int newton_steps) {
    double glo = g(lo);
    double ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if ((glo > 0) == (ghi > 0)) throw DomainError("bisect_newton: root not bracketed");
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm > 0) == (glo > 0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    for (int k = 0; k < newton_steps; ++k) {
        const double d = dg(x);
        if (d == 0.0) break;
        const double next = x - g(x) / d;
        // stay inside the bracket
        if (!(next >= lo - width && next <= hi + width)) break;
        x = next;
    }
    return x;
}

std::vector<double> symmetric_grid(std::size_t n) {
    if (n < 2) throw std::invalid_argument("symmetric_grid: need at least two nodes");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    if (n % 2 == 1) y[(n - 1) / 2] = 0.0;
    y.front() = -1.0;
    y.back() = 1.0;
    return y;
}

double ls_slope(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t n = xs.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace alfven
