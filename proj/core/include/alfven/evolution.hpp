#pragma once

#include <complex>
#include <span>
#include <vector>

#include "alfven/island.hpp"
#include "alfven/profiles.hpp"
#include "alfven/source.hpp"

namespace alfven::evolution {

using profiles::BackgroundProfile;

// One Fourier mode (psi, phi)(t, alpha, y) on n uniform intervals of [-1,1].
struct ModeState {
    int alpha = 1;
    double t = 0.0;
    std::vector<double> y;  // n + 1 nodes, y[n/2] = 0 for even n
    std::vector<cplx> psi;
    std::vector<cplx> phi;

    std::size_t intervals() const { return y.size() - 1; }
    double h() const { return 2.0 / static_cast<double>(intervals()); }
};

ModeState make_state(int alpha, std::size_t n, const spectral::InitialData& data);

// Dirichlet solve of (d^2/dy^2 - a^2) g = rhs with second-order differences; the
// tridiagonal factorization is computed once.
class Helmholtz {
public:
    Helmholtz(int alpha, std::size_t n);

    // rhs on all n + 1 nodes; the two boundary entries are ignored
    void solve(std::span<const cplx> rhs, std::span<cplx> out) const;
    std::vector<cplx> solve(std::span<const cplx> rhs) const;

private:
    std::size_t n_;
    double inv_h2_;
    std::vector<double> cprime_;  // modified super-diagonal
    std::vector<double> denom_;   // pivots
};

// Uses a per-thread cache of factorizations keyed by (alpha, n).
std::vector<cplx> helmholtz_solve(std::span<const cplx> rhs, int alpha, std::size_t n);

// Fourth-order first derivative on a uniform grid, one-sided at the two ends.
void d_dy(std::span<const cplx> f, double h, std::span<cplx> out);
std::vector<cplx> d_dy(std::span<const cplx> f, double h);

struct Rates {
    std::vector<cplx> dpsi;
    std::vector<cplx> dphi;
};

// The semi-discrete mode equations for one (profile, alpha, n), with coefficient
// tables and scratch space kept between calls. Not safe to share across threads.
class ModeSystem {
public:
    ModeSystem(const BackgroundProfile& profile, int alpha, std::size_t n);

    void rates(const ModeState& s, Rates& r) const;
    Rates rates(const ModeState& s) const;
    // one classical RK4 step; throws DomainError when dt exceeds dt_max()
    void step(ModeState& s, double dt) const;
    double dt_max() const { return dt_max_; }
    int alpha() const { return alpha_; }
    std::size_t intervals() const { return n_; }

private:
    void rates_into(std::span<const cplx> psi, std::span<const cplx> phi, std::span<cplx> dpsi,
                    std::span<cplx> dphi) const;

    int alpha_;
    std::size_t n_;
    double h_;
    double dt_max_;
    Helmholtz helm_;
    std::vector<double> u_, b_, du_, db_, ddu_, ddb_;
    mutable std::vector<cplx> dpsi_y_, dphi_y_, src_, inv_;
    mutable std::vector<cplx> k_[8];
    mutable std::vector<cplx> tmp_psi_, tmp_phi_;
};

Rates rhs(const ModeState& s, const BackgroundProfile& profile);
ModeState step_rk4(const ModeState& s, const BackgroundProfile& profile, double dt);

// max |W+-| over [-1,1] sampled on the grid
double max_speed(const BackgroundProfile& profile, std::size_t n);

// Kinetic plus magnetic energy of the mode, sum over nodes of |d psi|^2 + a^2 |psi|^2 + same for phi, times h.
double energy(const ModeState& s);

// Advance s to t_final with steps of at most dt (dt <= 0 means dt_max); the step count
// is fixed up front so that the final time is hit exactly.
void evolve(ModeState& s, const ModeSystem& sys, double t_final, double dt = 0.0);

struct EvolveOptions {
    double t_final = 200.0;
    std::size_t n = 2048;
    double dt = 0.0;  // <= 0: dt_max
    double probe_lo = 0.2;
    double probe_hi = 0.9;
    double sample_every = 1.0;
    double growth_fail = 10.0;
    std::vector<double> snapshot_times;
    island::IslandOptions island;
};

struct EvolutionReport {
    int alpha = 1;
    std::size_t n = 0;
    double dt = 0.0;
    std::size_t steps = 0;
    std::vector<double> times;
    std::vector<double> err_phi;
    std::vector<double> err_psi;
    std::vector<double> phi0_drift;
    std::vector<double> energy;
    double max_phi0_drift = 0.0;
    cplx phi0_at_0;
    cplx psi_final_at_0;
    cplx psi_inf_at_0;
    // over the second half of the samples
    double decreasing_fraction_phi = 0.0;
    double decreasing_fraction_psi = 0.0;
    double loglog_slope_phi = 0.0;  // d ln err_phi / d ln t
    double loglog_slope_psi = 0.0;
    std::vector<ModeState> snapshots;
    ModeState final_state;
};

EvolutionReport evolve_and_compare(const BackgroundProfile& profile, int alpha, const spectral::InitialData& data,
                                   const EvolveOptions& opt = {});

}  // namespace alfven::evolution
