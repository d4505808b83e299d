#pragma once

#include <complex>
#include <memory>
#include <utility>
#include <vector>

#include "alfven/profiles.hpp"
#include "alfven/source.hpp"
#include "alfven/sturmian.hpp"

namespace alfven::spectral {

using profiles::Side;
using profiles::SpectralPoint;
using sturmian::HomogeneousSolution;

struct SpectralOptions {
    sturmian::SolveOptions homog;
    double quad_tol = 1e-11;
    // distance below which a real c counts as 0 or an endpoint value
    double exclusion_tol = 1e-9;
};

// phi_+ and phi_- for one spectral point, with their values at y = 0.
struct HomogeneousPair {
    HomogeneousSolution plus;
    HomogeneousSolution minus;
    cplx phi_plus0, dphi_plus0;
    cplx phi_minus0, dphi_minus0;

    const HomogeneousSolution& side(Side s) const { return s == Side::plus ? plus : minus; }
};

HomogeneousPair solve_pair(const ExtendedProfile& ext, int alpha, const SpectralPoint& c,
                           const SpectralOptions& opt = {});

double l_weight(cplx x);

std::pair<cplx, cplx> compute_sigma(const ExtendedProfile& ext, const SpectralPoint& c);
cplx compute_P(const HomogeneousPair& pair);

// chi_+ and chi_- for real c; only meaningful away from the excluded points.
std::pair<int, int> compute_chi(const ExtendedProfile& ext, double c);
bool is_excluded(const ExtendedProfile& ext, double c, double tol = 1e-9);

// Direct quadrature of 1/(H phi^2) over [0,1] and [-1,0]; needs Im c != 0 or c outside D0.
std::pair<cplx, cplx> compute_I(const ExtendedProfile& ext, const HomogeneousPair& pair,
                                const SpectralOptions& opt = {});

// sigma I = sigma Pi + R1 + R2 + log_term on one side. Off the axis log_term is the
// complex I3; on the axis it is the real half-log of its boundary value.
struct IDecomposition {
    cplx sigma;
    cplx Pi;
    cplx R1;
    cplx R2;
    cplx log_term;

    cplx sigma_I() const { return sigma * Pi + R1 + R2 + log_term; }
};

IDecomposition decompose_I(const ExtendedProfile& ext, const HomogeneousSolution& sol,
                           const SpectralOptions& opt = {});

// I^re_+ and I^re_- for real c in D0 minus the excluded points.
std::pair<double, double> compute_I_re(const ExtendedProfile& ext, const HomogeneousPair& pair,
                                       const SpectralOptions& opt = {});

struct WronskianData {
    SpectralPoint c;
    bool boundary = false;         // evaluated on D0 through the limit formulas
    bool inverse_is_zero = false;  // real c at 0 or an endpoint value: 1/D taken as 0
    cplx I_plus, I_minus;
    cplx P;
    cplx D;
    cplx sigma_plus, sigma_minus;
    cplx Pi_plus, Pi_minus;
    cplx R1_plus, R2_plus, R1_minus, R2_minus;
    int chi_plus = 0, chi_minus = 0;
    double I_re_plus = 0.0, I_re_minus = 0.0;
    double D_re = 0.0, D_im = 0.0;
    cplx phi_plus0, dphi_plus0, phi_minus0, dphi_minus0;

    // the boundary value D^re + i D^im from above (sign +1) or below (sign -1)
    cplx D_limit(int sign) const { return cplx(D_re, sign * D_im); }
    double inv_abs_D() const;
};

WronskianData compute_D(const ExtendedProfile& ext, const HomogeneousPair& pair, const SpectralOptions& opt = {});
WronskianData compute_D(const ExtendedProfile& ext, int alpha, cplx c, const SpectralOptions& opt = {});

struct TLData {
    cplx T_plus, T_minus, L;
    cplx N_plus0, N_minus0;  // int_{y_c}^0 F phi on each side
};

TLData compute_TL(const ForcingTerm& F, const ExtendedProfile& ext, const HomogeneousPair& pair,
                  const SpectralOptions& opt = {});

struct Coefficients {
    cplx mu_plus, mu_minus, nu_plus, nu_minus;
};

Coefficients coefficients_closed_form(const WronskianData& w, const TLData& tl);
// Same coefficients from a dense solve of the four matching conditions.
Coefficients coefficients_linear_solve(const WronskianData& w, const TLData& tl);
// Boundary values mu^{+-}, nu^{+-} at real c, assembled from U and V.
Coefficients boundary_coefficients(const WronskianData& w, const TLData& tl, int sign);

struct InhomogeneousOptions {
    SpectralOptions spectral;
    std::size_t n_out = 1025;  // odd, so that y = 0 is a node
    double min_eps = 1e-6;
    double mismatch_fail = 1e-6;
};

namespace detail {
struct ThetaEvaluator;
}

struct InhomogeneousSolution {
    SpectralPoint c;
    std::vector<double> y;
    std::vector<cplx> theta;
    std::vector<cplx> dtheta;
    cplx mu_plus, mu_minus, nu_plus, nu_minus;
    cplx T_plus, T_minus, L;
    WronskianData wronskian;
    double representation_mismatch = 0.0;  // sup |Theta^0 - Theta^1| over both halves
    double value_jump = 0.0;               // |Theta_+(0) - Theta_-(0)|
    double slope_jump = 0.0;               // |Theta_+'(0) - Theta_-'(0)|
    double solve_discrepancy = 0.0;        // closed form vs dense matching solve

    // Theta and Theta' at any y in [-1,1], from the representation anchored at +-1
    cplx theta_at(double y, cplx* dtheta = nullptr) const;

    std::shared_ptr<const detail::ThetaEvaluator> evaluator;
};

InhomogeneousSolution solve_inhomogeneous(const SourceData& src, const ExtendedProfile& ext, cplx c,
                                          const InhomogeneousOptions& opt = {});

// max |d/dy(H Theta') - a^2 H Theta - F| / (1 + |F|) over interior output nodes. The flux
// derivative uses a centred 5-point stencil of width 4*step around each node; step <= 0
// means the output grid spacing.
double inhomogeneous_residual(const InhomogeneousSolution& sol, const SourceData& src, const ExtendedProfile& ext,
                              double step = 0.0);

// Smallest singular value of the Dirichlet finite-difference operator (H psi')' - a^2 H psi.
double stern_min_singular_value(const ExtendedProfile& ext, int alpha, cplx c, std::size_t n);

}  // namespace alfven::spectral
