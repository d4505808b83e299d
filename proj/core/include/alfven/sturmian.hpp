#pragma once

#include <complex>
#include <span>
#include <vector>

#include "alfven/numerics.hpp"
#include "alfven/profiles.hpp"

namespace alfven::sturmian {

using profiles::ExtendedProfile;
using profiles::Side;
using profiles::SpectralPoint;

enum class Clustering { uniform, critical };

struct GridSpec {
    std::size_t n_nodes = 1025;
    double lo = 0.0;
    double hi = 1.0;
    Clustering clustering = Clustering::uniform;
    double cluster_center = 0.0;
    double cluster_ratio = 2.0;
    double cluster_halfwidth = 0.1;
};

struct GridOptions {
    std::size_t n_nodes = 1025;
    Clustering clustering = Clustering::uniform;
    double cluster_ratio = 2.0;
    double cluster_halfwidth = 0.1;
};

// Side grid [0, max(1,y_c)] or [min(-1,y_c), 0] with nodes at 0, y_c and +-1.
GridSpec side_grid_spec(const SpectralPoint& c, Side side, const GridOptions& opt);
std::vector<double> build_nodes(const GridSpec& spec, std::span<const double> breakpoints);

// Kernel tables for S1 and the cumulative integral S0 on one side grid.
class SturmianOperator {
public:
    SturmianOperator(const ExtendedProfile& ext, const SpectralPoint& c, Side side, std::vector<double> nodes);

    std::vector<cplx> S1(std::span<const cplx> f) const;
    std::vector<cplx> S0(std::span<const cplx> g) const;

    const std::vector<double>& nodes() const { return nodes_; }
    std::size_t critical_index() const { return ic_; }

private:
    static constexpr int kOrder = 32;
    std::vector<double> nodes_;
    std::size_t ic_ = 0;
    std::vector<cplx> kernel_;      // [node][k]
    std::vector<Stencil> stencil_;  // [node][k]
};

std::vector<cplx> apply_S1(std::span<const cplx> f, const ExtendedProfile& ext, const SpectralPoint& c, Side side,
                           std::span<const double> nodes);
std::vector<cplx> apply_S0(std::span<const cplx> f, const SpectralPoint& c, Side side, std::span<const double> nodes);

struct HomogeneousSolution {
    Side side = Side::plus;
    int alpha = 1;
    SpectralPoint c;
    GridSpec grid;
    std::vector<double> y;
    std::vector<cplx> phi;
    std::vector<cplx> dphi;
    int iterations = 0;
    double final_update_norm = 0.0;
    std::vector<double> update_history;
    std::size_t critical_index = 0;

    cplx phi_at(double x) const;
    cplx dphi_at(double x) const;
    double lo() const { return y.front(); }
    double hi() const { return y.back(); }
};

struct SolveOptions {
    GridOptions grid;
    double tol = 1e-12;
    int max_iter = 200;
};

HomogeneousSolution solve_homogeneous(const ExtendedProfile& ext, int alpha, const SpectralPoint& c, Side side,
                                      const SolveOptions& opt = {});

double residual_homogeneous(const HomogeneousSolution& sol, const ExtendedProfile& ext);

}  // namespace alfven::sturmian
