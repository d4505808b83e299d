#include "alfven/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <utility>

#include "alfven/numerics.hpp"

namespace alfven::evolution {

namespace {

void check_intervals(std::size_t n) {
    if (n < 8 || n % 2 != 0) throw std::invalid_argument("evolution: n must be even and >= 8");
}

}  // namespace

ModeState make_state(int alpha, std::size_t n, const spectral::InitialData& data) {
    check_intervals(n);
    if (alpha == 0) throw std::invalid_argument("evolution: alpha must be nonzero");
    ModeState s;
    s.alpha = alpha;
    s.y = symmetric_grid(n + 1);
    s.psi.resize(n + 1);
    s.phi.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        s.psi[i] = data.psi0(cplx(s.y[i]));
        s.phi[i] = data.phi0(cplx(s.y[i]));
    }
    for (std::size_t i : {std::size_t{0}, n}) {
        if (std::abs(s.psi[i]) > 1e-12 || std::abs(s.phi[i]) > 1e-12)
            throw std::invalid_argument("evolution: initial data must vanish at y = +-1");
        s.psi[i] = cplx{};
        s.phi[i] = cplx{};
    }
    return s;
}

Helmholtz::Helmholtz(int alpha, std::size_t n) : n_(n) {
    check_intervals(n);
    const double h = 2.0 / static_cast<double>(n);
    inv_h2_ = 1.0 / (h * h);
    const double diag = -2.0 * inv_h2_ - static_cast<double>(alpha) * alpha;
    cprime_.assign(n + 1, 0.0);
    denom_.assign(n + 1, 0.0);
    denom_[1] = diag;
    cprime_[1] = inv_h2_ / diag;
    for (std::size_t i = 2; i < n; ++i) {
        denom_[i] = diag - inv_h2_ * cprime_[i - 1];
        cprime_[i] = inv_h2_ / denom_[i];
    }
}

void Helmholtz::solve(std::span<const cplx> rhs, std::span<cplx> out) const {
    if (rhs.size() != n_ + 1 || out.size() != n_ + 1) throw std::invalid_argument("helmholtz: size mismatch");
    out[0] = cplx{};
    for (std::size_t i = 1; i < n_; ++i) out[i] = (rhs[i] - inv_h2_ * out[i - 1]) / denom_[i];
    out[n_] = cplx{};
    for (std::size_t i = n_ - 1; i-- > 1;) out[i] -= cprime_[i] * out[i + 1];
}

std::vector<cplx> Helmholtz::solve(std::span<const cplx> rhs) const {
    std::vector<cplx> out(n_ + 1);
    solve(rhs, out);
    return out;
}

std::vector<cplx> helmholtz_solve(std::span<const cplx> rhs, int alpha, std::size_t n) {
    thread_local std::map<std::pair<int, std::size_t>, Helmholtz> cache;
    auto it = cache.find({alpha, n});
    if (it == cache.end()) it = cache.emplace(std::pair{alpha, n}, Helmholtz(alpha, n)).first;
    return it->second.solve(rhs);
}

void d_dy(std::span<const cplx> f, double h, std::span<cplx> out) {
    const std::size_t m = f.size();
    if (m < 5 || out.size() != m) throw std::invalid_argument("d_dy: need at least 5 nodes");
    const double s = 1.0 / (12.0 * h);
    out[0] = s * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    out[1] = s * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for (std::size_t i = 2; i + 2 < m; ++i) out[i] = s * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    const std::size_t e = m - 1;
    out[e - 1] = -s * (-3.0 * f[e] - 10.0 * f[e - 1] + 18.0 * f[e - 2] - 6.0 * f[e - 3] + f[e - 4]);
    out[e] = -s * (-25.0 * f[e] + 48.0 * f[e - 1] - 36.0 * f[e - 2] + 16.0 * f[e - 3] - 3.0 * f[e - 4]);
}

std::vector<cplx> d_dy(std::span<const cplx> f, double h) {
    std::vector<cplx> out(f.size());
    d_dy(f, h, out);
    return out;
}

double max_speed(const BackgroundProfile& profile, std::size_t n) {
    const auto y = symmetric_grid(n + 1);
    const RealPoly wp = profile.w_plus(), wm = profile.w_minus();
    double v = 0.0;
    for (double x : y) v = std::max({v, std::abs(wp(x)), std::abs(wm(x))});
    return v;
}

ModeSystem::ModeSystem(const BackgroundProfile& profile, int alpha, std::size_t n)
    : alpha_(alpha), n_(n), h_(2.0 / static_cast<double>(n)), helm_(alpha, n) {
    if (alpha == 0) throw std::invalid_argument("evolution: alpha must be nonzero");
    dt_max_ = 0.5 * h_ / max_speed(profile, n);
    const auto y = symmetric_grid(n + 1);
    const RealPoly du = profile.u.derivative(), db = profile.b.derivative();
    const RealPoly ddu = profile.u.derivative(2), ddb = profile.b.derivative(2);
    for (double x : y) {
        u_.push_back(profile.u(x));
        b_.push_back(profile.b(x));
        du_.push_back(du(x));
        db_.push_back(db(x));
        ddu_.push_back(ddu(x));
        ddb_.push_back(ddb(x));
    }
    for (auto* v : {&dpsi_y_, &dphi_y_, &src_, &inv_, &tmp_psi_, &tmp_phi_}) v->assign(n + 1, cplx{});
    for (auto& k : k_) k.assign(n + 1, cplx{});
}

void ModeSystem::rates_into(std::span<const cplx> psi, std::span<const cplx> phi, std::span<cplx> dpsi,
                            std::span<cplx> dphi) const {
    d_dy(psi, h_, dpsi_y_);
    d_dy(phi, h_, dphi_y_);
    for (std::size_t i = 0; i <= n_; ++i)
        src_[i] = ddu_[i] * psi[i] - ddb_[i] * phi[i] + du_[i] * dpsi_y_[i] - db_[i] * dphi_y_[i];
    helm_.solve(src_, inv_);
    const cplx ia(0.0, static_cast<double>(alpha_));
    for (std::size_t i = 1; i < n_; ++i) {
        dpsi[i] = ia * (b_[i] * phi[i] - u_[i] * psi[i]) + 2.0 * ia * inv_[i];
        dphi[i] = ia * (b_[i] * psi[i] - u_[i] * phi[i]);
    }
    dpsi[0] = dpsi[n_] = dphi[0] = dphi[n_] = cplx{};
}

void ModeSystem::rates(const ModeState& s, Rates& r) const {
    if (s.intervals() != n_) throw std::invalid_argument("evolution: state and system grids differ");
    r.dpsi.resize(n_ + 1);
    r.dphi.resize(n_ + 1);
    rates_into(s.psi, s.phi, r.dpsi, r.dphi);
}

Rates ModeSystem::rates(const ModeState& s) const {
    Rates r;
    rates(s, r);
    return r;
}

void ModeSystem::step(ModeState& s, double dt) const {
    if (s.intervals() != n_) throw std::invalid_argument("evolution: state and system grids differ");
    if (dt > dt_max_ * (1.0 + 1e-12)) throw DomainError("step_rk4: dt exceeds the stability limit");
    auto& k1p = k_[0];
    auto& k1f = k_[1];
    auto& k2p = k_[2];
    auto& k2f = k_[3];
    auto& k3p = k_[4];
    auto& k3f = k_[5];
    auto& k4p = k_[6];
    auto& k4f = k_[7];
    const std::size_t m = n_ + 1;
    rates_into(s.psi, s.phi, k1p, k1f);
    for (std::size_t i = 0; i < m; ++i) {
        tmp_psi_[i] = s.psi[i] + 0.5 * dt * k1p[i];
        tmp_phi_[i] = s.phi[i] + 0.5 * dt * k1f[i];
    }
    rates_into(tmp_psi_, tmp_phi_, k2p, k2f);
    for (std::size_t i = 0; i < m; ++i) {
        tmp_psi_[i] = s.psi[i] + 0.5 * dt * k2p[i];
        tmp_phi_[i] = s.phi[i] + 0.5 * dt * k2f[i];
    }
    rates_into(tmp_psi_, tmp_phi_, k3p, k3f);
    for (std::size_t i = 0; i < m; ++i) {
        tmp_psi_[i] = s.psi[i] + dt * k3p[i];
        tmp_phi_[i] = s.phi[i] + dt * k3f[i];
    }
    rates_into(tmp_psi_, tmp_phi_, k4p, k4f);
    const double w = dt / 6.0;
    for (std::size_t i = 1; i + 1 < m; ++i) {
        s.psi[i] += w * (k1p[i] + 2.0 * k2p[i] + 2.0 * k3p[i] + k4p[i]);
        s.phi[i] += w * (k1f[i] + 2.0 * k2f[i] + 2.0 * k3f[i] + k4f[i]);
    }
    s.psi.front() = s.psi.back() = s.phi.front() = s.phi.back() = cplx{};
    s.t += dt;
}

Rates rhs(const ModeState& s, const BackgroundProfile& profile) {
    return ModeSystem(profile, s.alpha, s.intervals()).rates(s);
}

ModeState step_rk4(const ModeState& s, const BackgroundProfile& profile, double dt) {
    ModeState out = s;
    ModeSystem(profile, s.alpha, s.intervals()).step(out, dt);
    return out;
}

double energy(const ModeState& s) {
    const double h = s.h();
    const double a2 = static_cast<double>(s.alpha) * s.alpha;
    const auto dpsi = d_dy(s.psi, h), dphi = d_dy(s.phi, h);
    double e = 0.0;
    for (std::size_t i = 0; i < s.y.size(); ++i)
        e += std::norm(dpsi[i]) + a2 * std::norm(s.psi[i]) + std::norm(dphi[i]) + a2 * std::norm(s.phi[i]);
    return e * h;
}

namespace {

std::size_t step_count(double span, double dt) {
    return static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
}

}  // namespace

void evolve(ModeState& s, const ModeSystem& sys, double t_final, double dt) {
    const double span = t_final - s.t;
    if (span <= 0.0) return;
    const double base = dt > 0.0 ? std::min(dt, sys.dt_max()) : sys.dt_max();
    const std::size_t steps = std::max<std::size_t>(1, step_count(span, base));
    const double step = span / static_cast<double>(steps);
    for (std::size_t k = 0; k < steps; ++k) sys.step(s, step);
    s.t = t_final;
}

EvolutionReport evolve_and_compare(const BackgroundProfile& profile, int alpha, const spectral::InitialData& data,
                                   const EvolveOptions& opt) {
    if (!(opt.t_final > 0.0)) throw std::invalid_argument("evolve: t_final must be positive");
    if (!(opt.probe_lo < opt.probe_hi)) throw std::invalid_argument("evolve: empty probe window");
    if (!(opt.sample_every > 0.0)) throw std::invalid_argument("evolve: sample interval must be positive");
    const auto ext = profiles::extend(profile);
    const ModeSystem sys(profile, alpha, opt.n);
    ModeState s = make_state(alpha, opt.n, data);
    const std::size_t n = opt.n, mid = n / 2;

    EvolutionReport rep;
    rep.alpha = alpha;
    rep.n = n;
    const double base = opt.dt > 0.0 ? std::min(opt.dt, sys.dt_max()) : sys.dt_max();
    rep.steps = step_count(opt.t_final, base);
    rep.dt = opt.t_final / static_cast<double>(rep.steps);
    rep.phi0_at_0 = data.phi0(cplx(0.0));
    const double u1 = profile.u.derivative()(0.0), b1 = profile.b.derivative()(0.0);
    rep.psi_inf_at_0 = (u1 / b1) * rep.phi0_at_0;

    // island prediction at the probe nodes
    std::vector<std::size_t> probe;
    std::vector<cplx> phi_inf, psi_inf;
    {
        std::unique_ptr<island::GammaEvaluator> gp, gm;
        if (opt.probe_hi > 0.0) gp = std::make_unique<island::GammaEvaluator>(ext, alpha, profiles::Side::plus, opt.island);
        if (opt.probe_lo < 0.0) gm = std::make_unique<island::GammaEvaluator>(ext, alpha, profiles::Side::minus, opt.island);
        for (std::size_t i = 0; i <= n; ++i) {
            const double y = s.y[i];
            if (y < opt.probe_lo || y > opt.probe_hi) continue;
            probe.push_back(i);
            if (y == 0.0) {
                phi_inf.push_back(rep.phi0_at_0);
                psi_inf.push_back(rep.psi_inf_at_0);
                continue;
            }
            const double bg = y > 0.0 ? gp->b_gamma(y) : gm->b_gamma(y);
            phi_inf.push_back(-bg * rep.phi0_at_0);
            psi_inf.push_back((profile.u(y) / profile.b(y)) * phi_inf.back());
        }
    }
    if (probe.empty()) throw std::invalid_argument("evolve: probe window contains no grid nodes");

    const cplx phi_mid0 = s.phi[mid];
    const double e0 = energy(s);
    auto sample = [&]() {
        double ep = 0.0, es = 0.0;
        for (std::size_t k = 0; k < probe.size(); ++k) {
            ep = std::max(ep, std::abs(s.phi[probe[k]] - phi_inf[k]));
            es = std::max(es, std::abs(s.psi[probe[k]] - psi_inf[k]));
        }
        const double e = energy(s);
        rep.times.push_back(s.t);
        rep.err_phi.push_back(ep);
        rep.err_psi.push_back(es);
        rep.phi0_drift.push_back(std::abs(s.phi[mid] - phi_mid0));
        rep.energy.push_back(e);
        rep.max_phi0_drift = std::max(rep.max_phi0_drift, rep.phi0_drift.back());
        if (e0 > 0.0 && std::sqrt(e / e0) > opt.growth_fail)
            throw NumericalError("evolve: norm growth beyond the instability threshold");
    };

    // sample and snapshot events on the step lattice
    auto step_of = [&](double t) {
        return static_cast<std::size_t>(std::llround(std::clamp(t, 0.0, opt.t_final) / rep.dt));
    };
    std::map<std::size_t, int> events;  // bit 1: sample, bit 2: snapshot
    for (double t = 0.0; t < opt.t_final - 1e-9 * opt.t_final; t += opt.sample_every) events[step_of(t)] |= 1;
    events[rep.steps] |= 1;
    for (double t : opt.snapshot_times) events[step_of(t)] |= 2;

    std::size_t done = 0;
    for (const auto& [k, what] : events) {
        for (; done < k; ++done) sys.step(s, rep.dt);
        if (k == rep.steps) s.t = opt.t_final;
        if (what & 1) sample();
        if (what & 2) rep.snapshots.push_back(s);
    }

    const std::size_t m = rep.times.size();
    const std::size_t start = m / 2;
    if (m - start >= 2) {
        std::size_t dec_phi = 0, dec_psi = 0;
        std::vector<double> lt, lp, ls, ltp;
        for (std::size_t i = start; i < m; ++i) {
            if (i > start) {
                dec_phi += rep.err_phi[i] < rep.err_phi[i - 1];
                dec_psi += rep.err_psi[i] < rep.err_psi[i - 1];
            }
            if (rep.times[i] > 0.0 && rep.err_phi[i] > 0.0) {
                lt.push_back(std::log(rep.times[i]));
                lp.push_back(std::log(rep.err_phi[i]));
            }
            if (rep.times[i] > 0.0 && rep.err_psi[i] > 0.0) {
                ltp.push_back(std::log(rep.times[i]));
                ls.push_back(std::log(rep.err_psi[i]));
            }
        }
        rep.decreasing_fraction_phi = static_cast<double>(dec_phi) / static_cast<double>(m - start - 1);
        rep.decreasing_fraction_psi = static_cast<double>(dec_psi) / static_cast<double>(m - start - 1);
        if (lt.size() >= 2) rep.loglog_slope_phi = ls_slope(lt, lp);
        if (ltp.size() >= 2) rep.loglog_slope_psi = ls_slope(ltp, ls);
    }
    rep.psi_final_at_0 = s.psi[mid];
    rep.final_state = std::move(s);
    return rep;
}

}  // namespace alfven::evolution
