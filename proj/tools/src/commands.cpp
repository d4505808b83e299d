#include "alfven_cli/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "alfven/evolution.hpp"
#include "alfven/island.hpp"
#include "alfven/spectral.hpp"
#include "alfven/sturmian.hpp"

namespace alfven::cli {

using nlohmann::ordered_json;

namespace {

ordered_json complex_json(cplx z) { return ordered_json::array({z.real(), z.imag()}); }

std::string fixed(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::vector<std::string> failures(const profiles::AssumptionReport& r) {
    std::vector<std::string> f;
    if (!r.regularity) f.push_back("(R) violated");
    if (!r.island) f.push_back("(I) violated");
    if (!r.monotone) f.push_back("(M) violated");
    if (!r.stern) f.push_back("(S) violated");
    return f;
}

// Profiles failing an assumption are a domain failure for every command but check.
profiles::ExtendedProfile validated(const RunConfig& cfg) {
    if (cfg.alpha < 1) throw UsageError("alpha must be a positive integer");
    const auto rep = profiles::check_assumptions(cfg.profile);
    const auto f = failures(rep);
    if (!f.empty()) {
        std::string msg = "profile rejected:";
        for (const auto& s : f) msg += " " + s;
        throw DomainError(msg);
    }
    return profiles::extend(cfg.profile);
}

cplx spectral_c(const RunConfig& cfg, cplx fallback) {
    cplx c = cfg.c.value_or(fallback);
    if (cfg.eps) c.imag(*cfg.eps);
    return c;
}

std::size_t odd_n(const RunConfig& cfg, std::size_t fallback) {
    const std::size_t n = cfg.n.value_or(fallback);
    if (n % 2 == 0) throw UsageError("n must be odd here so that y = 0 is an output node");
    return n;
}

// Runs body(i) for i in [0, count) on up to `jobs` threads; rethrows the failure with
// the smallest index so that the reported error does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, int jobs, Body&& body) {
    const std::size_t workers = std::min<std::size_t>(std::max(jobs, 1), std::max<std::size_t>(count, 1));
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

ordered_json profile_json(const profiles::BackgroundProfile& p) {
    return {{"u", p.u.coeffs()}, {"b", p.b.coeffs()}, {"c0", p.c0_margin}};
}

evolution::EvolveOptions evolve_options(const RunConfig& cfg) {
    evolution::EvolveOptions opt;
    opt.t_final = cfg.t_final;
    opt.n = cfg.n.value_or(2048);
    opt.dt = cfg.dt;
    opt.probe_lo = cfg.probe_lo;
    opt.probe_hi = cfg.probe_hi;
    opt.sample_every = cfg.sample_every;
    opt.snapshot_times = cfg.snapshots;
    if (cfg.tol) opt.island.homog.tol = *cfg.tol;
    return opt;
}

void add_evolution(CommandResult& r, const evolution::EvolutionReport& rep, const RunConfig& cfg) {
    csv::Table series({"t", "err_phi", "err_psi", "phi0_drift"});
    for (std::size_t i = 0; i < rep.times.size(); ++i)
        series.add_row({rep.times[i], rep.err_phi[i], rep.err_psi[i], rep.phi0_drift[i]});
    r.tables.emplace_back("evolve", std::move(series));
    for (std::size_t k = 0; k < rep.snapshots.size(); ++k) {
        const auto& s = rep.snapshots[k];
        csv::Table snap({"y", "re_psi", "im_psi", "re_phi", "im_phi"});
        for (std::size_t i = 0; i < s.y.size(); ++i)
            snap.add_row({s.y[i], s.psi[i].real(), s.psi[i].imag(), s.phi[i].real(), s.phi[i].imag()});
        r.tables.emplace_back("snapshot_" + std::to_string(k), std::move(snap));
    }
    auto& j = r.summary;
    j["alpha"] = rep.alpha;
    j["profile"] = profile_json(cfg.profile);
    j["n"] = rep.n;
    j["dt"] = rep.dt;
    j["steps"] = rep.steps;
    j["t_final"] = rep.times.back();
    j["probe"] = {cfg.probe_lo, cfg.probe_hi};
    j["err_phi"] = rep.err_phi.back();
    j["err_psi"] = rep.err_psi.back();
    j["max_phi0_drift"] = rep.max_phi0_drift;
    j["phi0_at_0"] = complex_json(rep.phi0_at_0);
    j["psi_final_at_0"] = complex_json(rep.psi_final_at_0);
    j["psi_inf_at_0"] = complex_json(rep.psi_inf_at_0);
    j["loglog_slope_phi"] = rep.loglog_slope_phi;
    j["loglog_slope_psi"] = rep.loglog_slope_psi;
    ordered_json times = ordered_json::array();
    for (const auto& s : rep.snapshots) times.push_back(s.t);
    j["snapshot_times"] = times;
}

}  // namespace

CommandResult cmd_check(const RunConfig& cfg) {
    CommandResult r;
    r.command = "check";
    const auto rep = profiles::check_assumptions(cfg.profile);
    const auto f = failures(rep);
    auto& j = r.summary;
    j["profile"] = profile_json(cfg.profile);
    j["pass"] = f.empty();
    j["regularity"] = rep.regularity;
    j["island"] = rep.island;
    j["monotone"] = rep.monotone;
    j["stern"] = rep.stern;
    j["monotone_margin"] = rep.monotone_margin;
    j["monotone_worst_y"] = rep.monotone_worst_y;
    j["stern_margin"] = rep.stern_margin;
    j["stern_worst_y"] = rep.stern_worst_y;
    j["failures"] = f;
    int case_id = 0;
    if (f.empty()) {
        const auto ext = profiles::extend(cfg.profile);
        case_id = ext.case_id();
        const auto& e = ext.endpoints();
        j["case_id"] = case_id;
        j["extension"] = {{"a_minus", ext.a_minus()}, {"a_plus", ext.a_plus()}};
        j["d0"] = {ext.d0_min(), ext.d0_max()};
        j["endpoints"] = {{"wp_right", e.wp_right}, {"wm_left", e.wm_left}, {"wm_right", e.wm_right},
                          {"wp_left", e.wp_left}};
    } else {
        r.exit_code = kExitDomain;
        for (const auto& s : f) r.message += (r.message.empty() ? "" : "; ") + s;
    }
    csv::Table t({"regularity", "island", "monotone", "stern", "monotone_margin", "stern_margin", "case_id"});
    t.add_row({double(rep.regularity), double(rep.island), double(rep.monotone), double(rep.stern),
               rep.monotone_margin, rep.stern_margin, double(case_id)});
    r.tables.emplace_back("check", std::move(t));
    return r;
}

CommandResult cmd_homog(const RunConfig& cfg) {
    const auto ext = validated(cfg);
    CommandResult r;
    r.command = "homog";
    const cplx c = spectral_c(cfg, 0.0);
    const auto sp = profiles::make_spectral_point(ext, c);
    sturmian::SolveOptions opt;
    opt.grid.n_nodes = cfg.n.value_or(1025);
    if (cfg.tol) opt.tol = *cfg.tol;
    auto& j = r.summary;
    j["alpha"] = cfg.alpha;
    j["c"] = complex_json(c);
    j["region"] = profiles::to_string(sp.region);
    for (const auto side : {profiles::Side::plus, profiles::Side::minus}) {
        const auto sol = sturmian::solve_homogeneous(ext, cfg.alpha, sp, side, opt);
        const std::string name = profiles::to_string(side);
        csv::Table t({"y", "re_phi", "im_phi", "re_dphi", "im_dphi"});
        for (std::size_t i = 0; i < sol.y.size(); ++i)
            t.add_row({sol.y[i], sol.phi[i].real(), sol.phi[i].imag(), sol.dphi[i].real(), sol.dphi[i].imag()});
        r.tables.emplace_back("homog_" + name, std::move(t));
        j[name] = {{"iterations", sol.iterations},
                   {"final_update", sol.final_update_norm},
                   {"y_c", sp.y_c(side)},
                   {"phi_at_0", complex_json(sol.phi_at(0.0))},
                   {"dphi_at_0", complex_json(sol.dphi_at(0.0))},
                   {"residual", sturmian::residual_homogeneous(sol, ext)}};
    }
    return r;
}

CommandResult cmd_wronskian(const RunConfig& cfg) {
    const auto ext = validated(cfg);
    CommandResult r;
    r.command = "wronskian";
    const Scan sc = cfg.scan.value_or(Scan{ext.d0_min(), ext.d0_max(), 201});
    const double eps = cfg.eps.value_or(0.0);
    const auto count = static_cast<std::size_t>(sc.steps);
    std::vector<spectral::WronskianData> rows(count);
    std::vector<double> cr(count);
    for (std::size_t k = 0; k < count; ++k) {
        // weighted form keeps a symmetric scan exactly symmetric, with 0 hit exactly
        const double m = static_cast<double>(count - 1);
        cr[k] = count == 1 ? sc.lo : (sc.lo * (m - k) + sc.hi * static_cast<double>(k)) / m;
    }
    parallel_for(count, cfg.jobs, [&](std::size_t k) {
        try {
            rows[k] = spectral::compute_D(ext, cfg.alpha, cplx(cr[k], eps));
        } catch (const NumericalError& e) {
            throw NumericalError(std::string(e.what()) + " (wronskian at c = " + csv::format(cr[k]) + " + " +
                                 csv::format(eps) + "i)");
        }
    });
    csv::Table t({"c_r", "eps", "re_D", "im_D", "D_re", "D_im", "chi_p", "chi_m", "inv_abs_D"});
    double min_d2 = INFINITY, at = NAN;
    int zero_rows = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const auto& w = rows[k];
        t.add_row({cr[k], eps, w.D.real(), w.D.imag(), w.D_re, w.D_im, double(w.chi_plus), double(w.chi_minus),
                   w.inv_abs_D()});
        if (w.inverse_is_zero) {
            ++zero_rows;
            continue;
        }
        const double d2 = std::norm(w.D);
        if (d2 < min_d2) {
            min_d2 = d2;
            at = cr[k];
        }
    }
    r.tables.emplace_back("wronskian", std::move(t));
    auto& j = r.summary;
    j["alpha"] = cfg.alpha;
    j["scan"] = {sc.lo, sc.hi, sc.steps};
    j["eps"] = eps;
    j["min_abs_D2"] = min_d2;
    j["min_at"] = at;
    j["inverse_zero_rows"] = zero_rows;
    return r;
}

CommandResult cmd_theta(const RunConfig& cfg) {
    const auto ext = validated(cfg);
    CommandResult r;
    r.command = "theta";
    const cplx c = spectral_c(cfg, cplx(0.3, 0.2));
    spectral::InhomogeneousOptions opt;
    opt.n_out = odd_n(cfg, 1025);
    if (cfg.tol) opt.spectral.homog.tol = *cfg.tol;
    const auto src = spectral::make_source(cfg.initial, cfg.alpha);
    const auto sol = spectral::solve_inhomogeneous(src, ext, c, opt);
    csv::Table t({"y", "re", "im"});
    for (std::size_t i = 0; i < sol.y.size(); ++i) t.add_row({sol.y[i], sol.theta[i].real(), sol.theta[i].imag()});
    r.tables.emplace_back("theta", std::move(t));
    const double h = sol.y[1] - sol.y[0];
    auto& j = r.summary;
    j["alpha"] = cfg.alpha;
    j["c"] = complex_json(c);
    j["residual"] = spectral::inhomogeneous_residual(sol, src, ext, h / 32.0);
    j["boundary"] = std::max(std::abs(sol.theta.front()), std::abs(sol.theta.back()));
    j["value_jump"] = sol.value_jump;
    j["slope_jump"] = sol.slope_jump;
    j["representation_mismatch"] = sol.representation_mismatch;
    j["mu_plus"] = complex_json(sol.mu_plus);
    j["mu_minus"] = complex_json(sol.mu_minus);
    j["nu_plus"] = complex_json(sol.nu_plus);
    j["nu_minus"] = complex_json(sol.nu_minus);
    return r;
}

CommandResult cmd_island(const RunConfig& cfg) {
    const auto ext = validated(cfg);
    CommandResult r;
    r.command = "island";
    island::IslandOptions opt;
    opt.n_out = odd_n(cfg, 1025);
    if (cfg.tol) opt.homog.tol = *cfg.tol;
    const auto src = spectral::make_source(cfg.initial, cfg.alpha);
    // the H route recomputes the final state and checks it against the Gamma route
    const auto p = island::final_state_from_H(src, ext, opt);
    csv::Table t({"y", "b_gamma", "re_psi_inf", "im_psi_inf", "re_phi_inf", "im_phi_inf"});
    for (std::size_t i = 0; i < p.y.size(); ++i)
        t.add_row({p.y[i], p.b_gamma[i], p.psi_inf[i].real(), p.psi_inf[i].imag(), p.phi_inf[i].real(),
                   p.phi_inf[i].imag()});
    r.tables.emplace_back("island", std::move(t));
    auto& j = r.summary;
    j["alpha"] = p.alpha;
    j["kappa"] = p.kappa;
    j["log_slope"] = p.log_slope;
    j["psi_inf_at_0"] = complex_json(p.psi_inf[p.mid()]);
    j["phi0_at_0"] = complex_json(p.phi0_at_0);
    j["route_mismatch"] = p.route_mismatch;
    return r;
}

CommandResult cmd_evolve(const RunConfig& cfg) {
    validated(cfg);
    CommandResult r;
    r.command = "evolve";
    add_evolution(r, evolution::evolve_and_compare(cfg.profile, cfg.alpha, cfg.initial, evolve_options(cfg)), cfg);
    return r;
}

CommandResult cmd_compare(const RunConfig& cfg) {
    validated(cfg);
    CommandResult r;
    r.command = "compare";
    const auto rep = evolution::evolve_and_compare(cfg.profile, cfg.alpha, cfg.initial, evolve_options(cfg));
    add_evolution(r, rep, cfg);

    const double scale = std::abs(rep.phi0_at_0);
    const double center = std::abs(rep.psi_final_at_0 - rep.psi_inf_at_0);
    const bool ok_phi = rep.err_phi.back() <= cfg.err_tol * scale;
    const bool ok_psi = rep.err_psi.back() <= cfg.err_tol;
    const bool ok_center = center <= cfg.center_tol;
    const bool ok_drift = rep.max_phi0_drift <= cfg.drift_tol;
    const bool pass = ok_phi && ok_psi && ok_center && ok_drift;
    auto& j = r.summary;
    j["center_error"] = center;
    j["thresholds"] = {{"err_phi", cfg.err_tol * scale},
                       {"err_psi", cfg.err_tol},
                       {"center", cfg.center_tol},
                       {"drift", cfg.drift_tol}};
    j["pass"] = pass;

    std::string& s = r.text;
    s += "       t      err_phi      err_psi   phi0_drift\n";
    const std::size_t m = rep.times.size();
    const std::size_t stride = std::max<std::size_t>(1, (m - 1) / 20);
    for (std::size_t i = 0; i < m; ++i) {
        if (i % stride != 0 && i + 1 != m) continue;
        s += fixed("%8.2f", rep.times[i]) + fixed("  %11.4e", rep.err_phi[i]) + fixed("  %11.4e", rep.err_psi[i]) +
             fixed("  %11.4e", rep.phi0_drift[i]) + "\n";
    }
    auto line = [&](const char* what, double v, double limit, bool ok) {
        s += std::string(what) + fixed("%11.4e", v) + fixed("  limit %11.4e  ", limit) + (ok ? "ok" : "FAIL") + "\n";
    };
    line("sup |phi - phi_inf| at T  ", rep.err_phi.back(), cfg.err_tol * scale, ok_phi);
    line("sup |psi - psi_inf| at T  ", rep.err_psi.back(), cfg.err_tol, ok_psi);
    line("|psi(T,0) - psi_inf(0)|   ", center, cfg.center_tol, ok_center);
    line("max |phi(t,0) - phi(0,0)| ", rep.max_phi0_drift, cfg.drift_tol, ok_drift);
    s += pass ? "PASS\n" : "FAIL\n";
    if (!pass) {
        r.exit_code = kExitDomain;
        r.message = "compare: thresholds not met";
    }
    return r;
}

CommandResult run_command(const std::string& name, const RunConfig& cfg) {
    if (name == "check") return cmd_check(cfg);
    if (name == "homog") return cmd_homog(cfg);
    if (name == "wronskian") return cmd_wronskian(cfg);
    if (name == "theta") return cmd_theta(cfg);
    if (name == "island") return cmd_island(cfg);
    if (name == "evolve") return cmd_evolve(cfg);
    if (name == "compare") return cmd_compare(cfg);
    throw UsageError("unknown command " + name);
}

}  // namespace alfven::cli
