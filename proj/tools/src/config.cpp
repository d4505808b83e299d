#include "alfven_cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace alfven::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    if (!j.is_object()) throw UsageError(where + " must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!known.contains(key)) throw UsageError("unknown key \"" + key + "\" in " + where);
}

double number(const json& j, const std::string& what) {
    if (!j.is_number()) throw UsageError(what + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw UsageError(what + " must be finite");
    return v;
}

long integer(const json& j, const std::string& what) {
    if (!j.is_number_integer()) throw UsageError(what + " must be an integer");
    return j.get<long>();
}

RealPoly real_poly(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw UsageError(what + " must be a non-empty array of numbers");
    std::vector<double> c;
    for (const auto& v : j) c.push_back(number(v, what));
    return RealPoly(std::move(c));
}

cplx complex_value(const json& j, const std::string& what) {
    if (j.is_number()) return {number(j, what), 0.0};
    if (j.is_array() && j.size() == 2) return {number(j[0], what), number(j[1], what)};
    throw UsageError(what + " must be a number or [re, im]");
}

profiles::BackgroundProfile parse_profile(const json& j) {
    reject_unknown(j, {"u", "b", "c0"}, "profile");
    if (!j.contains("u") || !j.contains("b")) throw UsageError("profile needs \"u\" and \"b\"");
    const double c0 = j.contains("c0") ? number(j["c0"], "profile.c0") : 1e-3;
    if (c0 < 0) throw UsageError("profile.c0 must be non-negative");
    return {real_poly(j["u"], "profile.u"), real_poly(j["b"], "profile.b"), c0};
}

}  // namespace

Scan parse_scan(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw UsageError("scan must be lo:hi:steps, got \"" + text + "\"");
    auto num = [&](const std::string& s, auto& out) {
        const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw UsageError("bad number in scan: \"" + s + "\"");
    };
    Scan sc;
    num(parts[0], sc.lo);
    num(parts[1], sc.hi);
    num(parts[2], sc.steps);
    if (!(sc.lo <= sc.hi) || sc.steps < 1) throw UsageError("scan needs lo <= hi and steps >= 1");
    if (sc.steps == 1 && sc.lo != sc.hi) throw UsageError("a one-point scan needs lo == hi");
    return sc;
}

ComplexPoly parse_complex_poly(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw UsageError(what + " must be a non-empty array");
    std::vector<cplx> c;
    for (const auto& v : j) c.push_back(complex_value(v, what));
    return ComplexPoly(std::move(c));
}

RunConfig parse_config(const json& j) {
    reject_unknown(j, {"profile", "alpha", "n", "tol", "t_final", "dt", "scan", "eps", "c", "initial", "probe",
                       "sample_every", "snapshots", "err_tol", "center_tol", "drift_tol", "jobs", "out", "emit"},
                   "config");
    if (!j.contains("profile")) throw UsageError("config needs a \"profile\" block");
    RunConfig cfg;
    cfg.profile = parse_profile(j["profile"]);
    if (j.contains("alpha")) cfg.alpha = static_cast<int>(integer(j["alpha"], "alpha"));
    if (j.contains("n")) {
        const long n = integer(j["n"], "n");
        if (n < 2) throw UsageError("n must be >= 2");
        cfg.n = static_cast<std::size_t>(n);
    }
    if (j.contains("tol")) cfg.tol = number(j["tol"], "tol");
    if (j.contains("t_final")) cfg.t_final = number(j["t_final"], "t_final");
    if (j.contains("dt")) cfg.dt = number(j["dt"], "dt");
    if (j.contains("scan")) {
        if (!j["scan"].is_string()) throw UsageError("scan must be a string lo:hi:steps");
        cfg.scan = parse_scan(j["scan"].get<std::string>());
    }
    if (j.contains("eps")) cfg.eps = number(j["eps"], "eps");
    if (j.contains("c")) cfg.c = complex_value(j["c"], "c");
    if (j.contains("initial")) {
        const auto& d = j["initial"];
        reject_unknown(d, {"psi0", "phi0"}, "initial");
        cfg.initial = spectral::InitialData{};
        if (d.contains("psi0")) cfg.initial.psi0 = parse_complex_poly(d["psi0"], "initial.psi0");
        if (d.contains("phi0")) cfg.initial.phi0 = parse_complex_poly(d["phi0"], "initial.phi0");
    }
    if (j.contains("probe")) {
        const auto& p = j["probe"];
        if (!p.is_array() || p.size() != 2) throw UsageError("probe must be [lo, hi]");
        cfg.probe_lo = number(p[0], "probe");
        cfg.probe_hi = number(p[1], "probe");
    }
    if (j.contains("sample_every")) cfg.sample_every = number(j["sample_every"], "sample_every");
    if (j.contains("snapshots")) {
        if (!j["snapshots"].is_array()) throw UsageError("snapshots must be an array of times");
        for (const auto& t : j["snapshots"]) cfg.snapshots.push_back(number(t, "snapshots"));
    }
    if (j.contains("err_tol")) cfg.err_tol = number(j["err_tol"], "err_tol");
    if (j.contains("center_tol")) cfg.center_tol = number(j["center_tol"], "center_tol");
    if (j.contains("drift_tol")) cfg.drift_tol = number(j["drift_tol"], "drift_tol");
    if (j.contains("jobs")) cfg.jobs = static_cast<int>(integer(j["jobs"], "jobs"));
    if (j.contains("out")) {
        if (!j["out"].is_string()) throw UsageError("out must be a string");
        cfg.out = j["out"].get<std::string>();
    }
    if (j.contains("emit")) {
        const auto e = j["emit"].is_string() ? j["emit"].get<std::string>() : std::string();
        if (e == "json") cfg.emit = Emit::json;
        else if (e == "csv") cfg.emit = Emit::csv;
        else throw UsageError("emit must be \"json\" or \"csv\"");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("malformed JSON in " + path + ": " + e.what());
    }
    return parse_config(j);
}

}  // namespace alfven::cli
