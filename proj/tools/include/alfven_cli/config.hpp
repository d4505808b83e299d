#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "alfven/profiles.hpp"
#include "alfven/source.hpp"

namespace alfven::cli {

// Bad input: malformed JSON, unknown keys, out-of-range values, unreadable paths.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Emit { json, csv };

struct Scan {
    double lo = -1.0;
    double hi = 1.0;
    int steps = 201;  // points, both ends included
};

Scan parse_scan(const std::string& text);

struct RunConfig {
    profiles::BackgroundProfile profile;
    int alpha = 1;
    std::optional<std::size_t> n;
    std::optional<double> tol;
    double t_final = 200.0;
    double dt = 0.0;  // <= 0: the stability limit
    std::optional<Scan> scan;
    std::optional<double> eps;
    std::optional<cplx> c;
    // default data: psi0 = 0, phi0 = 1 - y^2
    spectral::InitialData initial{ComplexPoly{cplx(0.0)}, ComplexPoly{cplx(1.0), cplx(0.0), cplx(-1.0)}};
    double probe_lo = 0.2;
    double probe_hi = 0.9;
    double sample_every = 1.0;
    std::vector<double> snapshots;
    // compare thresholds
    double err_tol = 0.05;     // sup |phi - phi_inf| relative to |phi0(0)|, and sup |psi - psi_inf|
    double center_tol = 0.05;  // |psi(T,0) - phi0(0)/2|
    double drift_tol = 1e-6;
    int jobs = 1;
    std::string out;  // empty: stdout
    std::optional<Emit> emit;
};

// Throws UsageError on any unknown key or ill-typed value.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// Polynomial coefficients, ascending; each entry a number or [re, im].
ComplexPoly parse_complex_poly(const nlohmann::json& j, const std::string& what);

}  // namespace alfven::cli
