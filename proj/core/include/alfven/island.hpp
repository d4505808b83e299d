#pragma once

#include <complex>
#include <vector>

#include "alfven/profiles.hpp"
#include "alfven/source.hpp"
#include "alfven/sturmian.hpp"

namespace alfven::island {

using profiles::ExtendedProfile;
using profiles::Side;
using sturmian::HomogeneousSolution;

struct IslandOptions {
    sturmian::SolveOptions homog{{2049}, 1e-12, 200};
    std::size_t n_out = 1025;  // odd, so that y = 0 is a node
    double quad_tol = 1e-14;
    double route_tol = 1e-6;   // H route vs Gamma route
};

// Gamma on one half of [-1,1], built from phi at c = 0. Near y = 0 only b*Gamma is finite.
class GammaEvaluator {
public:
    GammaEvaluator(const ExtendedProfile& ext, int alpha, Side side, const IslandOptions& opt = {});

    // int_{+-1}^y dz / ((u^2 - b^2) phi^2), y != 0 on this side
    double integral(double y) const;
    double gamma(double y) const;
    double b_gamma(double y) const;
    double d_b_gamma(double y) const;

    Side side() const { return side_; }
    const HomogeneousSolution& phi() const { return phi_; }
    // (u'(0)^2 - b'(0)^2) / b'(0)
    double scale() const { return scale_; }

private:
    double phi_at(double y) const { return phi_.phi_at(y).real(); }
    double dphi_at(double y) const { return phi_.dphi_at(y).real(); }
    double weight(double y) const;

    ExtendedProfile ext_;
    Side side_;
    double scale_;
    double tol_;
    HomogeneousSolution phi_;
    std::vector<double> cum_;  // integral at the nodes of phi_, zero at the edge
};

struct GammaProfile {
    Side side = Side::plus;
    std::vector<double> y;  // from 0 to the edge
    std::vector<double> gamma;  // NaN at y = 0
    std::vector<double> b_gamma;
};

GammaProfile compute_gamma(const ExtendedProfile& ext, int alpha, Side side, const IslandOptions& opt = {});

double kappa(const profiles::BackgroundProfile& profile);

struct BlowupDiagnostic {
    double kappa = 0.0;
    double log_slope = 0.0;        // plus side
    double log_slope_minus = 0.0;  // same fit at y = -2^-k
    std::vector<double> y;         // 2^-k, k = 4..14
    std::vector<double> d_plus, d_minus;  // signed d/dy(b Gamma) at +-2^-k
};

BlowupDiagnostic blowup_diagnostic(const ExtendedProfile& ext, int alpha, const IslandOptions& opt = {});
BlowupDiagnostic blowup_diagnostic(const ExtendedProfile& ext, const GammaEvaluator& plus,
                                   const GammaEvaluator& minus);

struct IslandProfile {
    int alpha = 1;
    cplx phi0_at_0;
    std::vector<double> y;  // uniform on [-1,1]
    std::vector<double> gamma_plus;   // on y[mid..], NaN at y = 0
    std::vector<double> gamma_minus;  // on y[..mid], NaN at y = 0
    std::vector<double> b_gamma;      // -1 at y = 0
    std::vector<cplx> psi_inf;
    std::vector<cplx> phi_inf;
    double kappa = 0.0;
    double log_slope = 0.0;
    double route_mismatch = 0.0;  // H route only: sup |phi_inf - Gamma route|

    std::size_t mid() const { return (y.size() - 1) / 2; }
};

IslandProfile limiting_profiles(const ExtendedProfile& ext, int alpha, cplx phi0_at_0, const IslandOptions& opt = {});

// J(y) = int_0^y F(z,0) phi(z) dz on the half containing y.
class ForcingMoment {
public:
    ForcingMoment(const spectral::SourceData& src, const ExtendedProfile& ext, const HomogeneousSolution& phi,
                  double tol);

    cplx operator()(double y) const;

private:
    spectral::ForcingTerm F_;
    HomogeneousSolution phi_;
    double tol_;
    std::vector<cplx> cum_;  // at the nodes of phi, zero at y = 0
};

// phi_inf = phi0(0) chi + b H(y,0), with H from the forcing at c = 0. Throws when it
// disagrees with limiting_profiles by more than opt.route_tol.
IslandProfile final_state_from_H(const spectral::SourceData& src, const ExtendedProfile& ext,
                                 const IslandOptions& opt = {});

}  // namespace alfven::island
