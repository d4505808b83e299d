#pragma once

#include <complex>
#include <span>
#include <vector>

#include "alfven/polynomial.hpp"
#include "alfven/profiles.hpp"

namespace alfven::spectral {

using profiles::ExtendedProfile;

// Initial mode data (psi0, phi0) as polynomials on [-1,1].
struct InitialData {
    ComplexPoly psi0{cplx(0.0)};
    ComplexPoly phi0{cplx(0.0)};
};

struct SourceData {
    int alpha = 1;
    ComplexPoly psi0;
    ComplexPoly phi0;
    cplx phi0_at_0;

    cplx psi0_hat(double y) const { return psi0(cplx(y)); }
    cplx phi0_hat(double y) const { return phi0(cplx(y)); }
    // vorticity -(psi0'' - a^2 psi0), extended by zero outside [-1,1]
    cplx omega0_hat(double y) const;
    // current -(phi0'' - a^2 phi0)
    cplx j0_hat(double y) const;
};

SourceData make_source(const InitialData& data, int alpha);

// F(y,c) = c*G1 - phi0(0) * f / b^3 for a fixed spectral parameter.
class ForcingTerm {
public:
    ForcingTerm(const SourceData& src, const ExtendedProfile& ext, cplx c);

    cplx operator()(double y) const;
    cplx g1(double y) const;
    cplx f_over_b3(double y) const;
    std::vector<cplx> sample(std::span<const double> nodes) const;

    // f with chi = 1, before the division by y^3
    const ComplexPoly& f_inner() const { return f_inner_; }
    cplx c() const { return c_; }

private:
    SourceData src_;
    ExtendedProfile ext_;
    cplx c_;
    ComplexPoly f_inner_;
    ComplexPoly f_tilde_;   // f_inner / y^3
    ComplexPoly b_tilde_;   // b / y
    ComplexPoly p_tilde_;   // (phi0 - phi0(0)) / y
};

std::vector<cplx> build_F(const SourceData& src, const ExtendedProfile& ext, cplx c, std::span<const double> nodes);

}  // namespace alfven::spectral
