#include "alfven/sturmian.hpp"

#include <algorithm>
#include <cmath>

namespace alfven::sturmian {

using profiles::eval_H;

namespace {

constexpr double kMerge = 1e-12;

std::size_t nearest_index(const std::vector<double>& nodes, double x) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
    if (it == nodes.end()) return nodes.size() - 1;
    std::size_t i = static_cast<std::size_t>(it - nodes.begin());
    if (i > 0 && std::abs(nodes[i - 1] - x) < std::abs(nodes[i] - x)) --i;
    return i;
}

}  // namespace

GridSpec side_grid_spec(const SpectralPoint& c, Side side, const GridOptions& opt) {
    if (opt.n_nodes < 65) throw std::invalid_argument("grid: at least 65 nodes are required");
    GridSpec g;
    g.n_nodes = opt.n_nodes;
    const double yc = c.y_c(side);
    if (side == Side::plus) {
        g.lo = 0.0;
        g.hi = std::max(1.0, yc);
    } else {
        g.lo = std::min(-1.0, yc);
        g.hi = 0.0;
    }
    g.clustering = opt.clustering;
    g.cluster_center = yc;
    g.cluster_ratio = opt.cluster_ratio;
    g.cluster_halfwidth = opt.cluster_halfwidth;
    return g;
}

std::vector<double> build_nodes(const GridSpec& spec, std::span<const double> breakpoints) {
    std::vector<double> bp = {spec.lo, spec.hi};
    for (double b : breakpoints)
        if (b > spec.lo && b < spec.hi) bp.push_back(b);
    const bool clustered = spec.clustering == Clustering::critical;
    if (clustered) {
        for (double b : {spec.cluster_center - spec.cluster_halfwidth, spec.cluster_center + spec.cluster_halfwidth})
            if (b > spec.lo && b < spec.hi) bp.push_back(b);
    }
    std::sort(bp.begin(), bp.end());
    std::vector<double> pts;
    for (double b : bp)
        if (pts.empty() || b - pts.back() > kMerge) pts.push_back(b);
    if (pts.back() != spec.hi) pts.back() = spec.hi;

    const std::size_t nseg = pts.size() - 1;
    std::vector<double> weight(nseg);
    double total = 0.0;
    for (std::size_t s = 0; s < nseg; ++s) {
        const double len = pts[s + 1] - pts[s];
        const double mid = 0.5 * (pts[s] + pts[s + 1]);
        const bool inside = clustered && std::abs(mid - spec.cluster_center) <= spec.cluster_halfwidth;
        weight[s] = len * (inside ? spec.cluster_ratio : 1.0);
        total += weight[s];
    }
    const long intervals = static_cast<long>(spec.n_nodes) - 1;
    std::vector<long> m(nseg);
    long used = 0;
    for (std::size_t s = 0; s < nseg; ++s) {
        m[s] = std::max(2L, std::lround(intervals * weight[s] / total));
        used += m[s];
    }
    // put the rounding surplus on the heaviest segment
    const std::size_t big = static_cast<std::size_t>(std::max_element(weight.begin(), weight.end()) - weight.begin());
    m[big] += intervals - used;
    if (m[big] < 2) throw std::invalid_argument("grid: too few nodes for the breakpoints");

    std::vector<double> nodes;
    nodes.reserve(spec.n_nodes);
    for (std::size_t s = 0; s < nseg; ++s) {
        for (long k = 0; k < m[s]; ++k) nodes.push_back(pts[s] + (pts[s + 1] - pts[s]) * k / m[s]);
    }
    nodes.push_back(pts.back());
    return nodes;
}

SturmianOperator::SturmianOperator(const ExtendedProfile& ext, const SpectralPoint& c, Side side,
                                   std::vector<double> nodes)
    : nodes_(std::move(nodes)) {
    const double yc = c.y_c(side);
    ic_ = nearest_index(nodes_, yc);
    if (std::abs(nodes_[ic_] - yc) > 1e-12) throw std::invalid_argument("sturmian: y_c must be a grid node");
    static const QuadratureRule rule = gauss_legendre_unit(kOrder);
    const std::size_t n = nodes_.size();
    kernel_.assign(n * kOrder, cplx{});
    stencil_.assign(n * kOrder, Stencil{});
    for (std::size_t j = 0; j < n; ++j) {
        if (j == ic_) continue;
        const double y = nodes_[j];
        const cplx hy = eval_H(ext, y, c.c);
        if (std::abs(hy) < 1e-300) throw NumericalError("sturmian: H vanishes away from the critical layer");
        for (int k = 0; k < kOrder; ++k) {
            const double z = yc + rule.nodes[k] * (y - yc);
            kernel_[j * kOrder + k] = rule.weights[k] * (y - yc) * eval_H(ext, z, c.c) / hy;
            stencil_[j * kOrder + k] = lagrange4(nodes_, z);
        }
    }
}

std::vector<cplx> SturmianOperator::S1(std::span<const cplx> f) const {
    const std::size_t n = nodes_.size();
    std::vector<cplx> out(n, cplx{});
    for (std::size_t j = 0; j < n; ++j) {
        if (j == ic_) continue;
        cplx s{};
        const cplx* kr = &kernel_[j * kOrder];
        const Stencil* st = &stencil_[j * kOrder];
        for (int k = 0; k < kOrder; ++k) s += kr[k] * apply_stencil(st[k], f);
        out[j] = s;
    }
    return out;
}

std::vector<cplx> SturmianOperator::S0(std::span<const cplx> g) const {
    return cumulative_integral<cplx>(nodes_, g, ic_);
}

std::vector<cplx> apply_S1(std::span<const cplx> f, const ExtendedProfile& ext, const SpectralPoint& c, Side side,
                           std::span<const double> nodes) {
    SturmianOperator op(ext, c, side, std::vector<double>(nodes.begin(), nodes.end()));
    return op.S1(f);
}

std::vector<cplx> apply_S0(std::span<const cplx> f, const SpectralPoint& c, Side side, std::span<const double> nodes) {
    const std::vector<double> ns(nodes.begin(), nodes.end());
    const std::size_t ic = nearest_index(ns, c.y_c(side));
    return cumulative_integral<cplx>(nodes, f, ic);
}

cplx HomogeneousSolution::phi_at(double x) const {
    if (x < y.front() - 1e-12 || x > y.back() + 1e-12) throw std::out_of_range("phi_at: outside the grid");
    return hermite<cplx>(y, phi, dphi, x);
}

cplx HomogeneousSolution::dphi_at(double x) const {
    if (x < y.front() - 1e-12 || x > y.back() + 1e-12) throw std::out_of_range("dphi_at: outside the grid");
    return apply_stencil(lagrange4(y, x), std::span<const cplx>(dphi));
}

HomogeneousSolution solve_homogeneous(const ExtendedProfile& ext, int alpha, const SpectralPoint& c, Side side,
                                      const SolveOptions& opt) {
    if (!(opt.tol > 0)) throw std::invalid_argument("solve_homogeneous: tol must be positive");
    HomogeneousSolution sol;
    sol.side = side;
    sol.alpha = alpha;
    sol.c = c;
    sol.grid = side_grid_spec(c, side, opt.grid);
    const double edge = side == Side::plus ? 1.0 : -1.0;
    const std::array<double, 3> breaks = {0.0, c.y_c(side), edge};
    sol.y = build_nodes(sol.grid, breaks);
    const SturmianOperator op(ext, c, side, sol.y);
    sol.critical_index = op.critical_index();

    const double a2 = static_cast<double>(alpha) * alpha;
    const std::size_t n = sol.y.size();
    std::vector<cplx> phi(n, cplx(1.0));
    for (int it = 1; it <= opt.max_iter; ++it) {
        const auto s1 = op.S1(phi);
        const auto s0 = op.S0(s1);
        double upd = 0.0, sup = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const cplx next = 1.0 + a2 * s0[j];
            upd = std::max(upd, std::abs(next - phi[j]));
            sup = std::max(sup, std::abs(next));
            phi[j] = next;
        }
        sol.update_history.push_back(upd);
        sol.iterations = it;
        sol.final_update_norm = upd;
        if (upd <= opt.tol * std::max(1.0, sup)) {
            sol.phi = std::move(phi);
            auto d = op.S1(sol.phi);
            for (auto& v : d) v *= a2;
            sol.dphi = std::move(d);
            return sol;
        }
    }
    throw NumericalError("solve_homogeneous: Picard iteration did not converge");
}

double residual_homogeneous(const HomogeneousSolution& sol, const ExtendedProfile& ext) {
    const std::size_t n = sol.y.size();
    const double a2 = static_cast<double>(sol.alpha) * sol.alpha;
    std::vector<cplx> flux(n);
    for (std::size_t j = 0; j < n; ++j) flux[j] = eval_H(ext, sol.y[j], sol.c.c) * sol.dphi[j];
    double worst = 0.0;
    for (std::size_t j = 2; j + 2 < n; ++j) {
        const std::size_t ic = sol.critical_index;
        if ((j > ic ? j - ic : ic - j) <= 2) continue;
        const std::span<const double> xs(&sol.y[j - 2], 5);
        const auto w = fd_weights(xs, sol.y[j], 1);
        cplx d{};
        for (int k = 0; k < 5; ++k) d += w[k] * flux[j - 2 + k];
        const cplx rhs = a2 * eval_H(ext, sol.y[j], sol.c.c) * sol.phi[j];
        worst = std::max(worst, std::abs(d - rhs) / (1.0 + std::abs(rhs)));
    }
    return worst;
}

}  // namespace alfven::sturmian
