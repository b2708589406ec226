#include "mvn/flow.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <stdexcept>

namespace mvn {

ComplexField compute_omega(const RealField& p, bool dealias) {
    const ComplexField pc = to_complex(p);
    const ComplexField p2 = product(pc, pc, dealias);
    return dbar_inverse(wirtinger(p2, Dir::dz));
}

ComplexField compute_zeta(const RealField& p, const ComplexField& omega, bool dealias) {
    const ComplexField pc = to_complex(p);
    const ComplexField p2 = product(pc, pc, dealias);
    const ComplexField dp = wirtinger(pc, Dir::dz);
    const ComplexField g = product(p2, omega, dealias) - product(dp, dp, dealias);
    return dbar_inverse(wirtinger(g, Dir::dz));
}

ComplexField flow_rhs_plus(const RealField& p, int n, bool dealias, bool include_head) {
    if (n != 1 && n != 2) throw std::invalid_argument("flow n must be 1 or 2");
    const ComplexField pc = to_complex(p);
    const ComplexField om = compute_omega(p, dealias);
    const ComplexField dp = wirtinger(pc, Dir::dz);
    const ComplexField dom = wirtinger(om, Dir::dz);

    if (n == 1) {
        // 3 w (d p) + 3/2 p (d w)  [+ d^3 p]
        ComplexField rhs = 3.0 * product(om, dp, dealias) + 1.5 * product(pc, dom, dealias);
        if (include_head) rhs = rhs + wirtinger(pc, Dir::dz, 3);
        return rhs;
    }

    const ComplexField zt = compute_zeta(p, om, dealias);
    const ComplexField d3p = wirtinger(pc, Dir::dz, 3);
    const ComplexField d2p = wirtinger(pc, Dir::dz, 2);
    const ComplexField d2om = wirtinger(om, Dir::dz, 2);
    const ComplexField om2 = product(om, om, dealias);

    // 5 w d^3 p + 15/2 (d w)(d^2 p) + 5/2 (d p)(2 w^2 + 3 d^2 w + 2 zt)
    //   + 5/2 p d(w^2 + zt + d^2 w)   [+ d^5 p]
    const ComplexField bracket1 = 2.0 * om2 + 3.0 * d2om + 2.0 * zt;
    const ComplexField bracket2 = wirtinger(om2 + zt + d2om, Dir::dz);
    ComplexField rhs = 5.0 * product(om, d3p, dealias) + 7.5 * product(dom, d2p, dealias) +
                       2.5 * product(dp, bracket1, dealias) + 2.5 * product(pc, bracket2, dealias);
    if (include_head) rhs = rhs + wirtinger(pc, Dir::dz, 5);
    return rhs;
}

RealField flow_rhs(const RealField& p, int n, bool dealias) {
    const ComplexField plus = flow_rhs_plus(p, n, dealias, true);
    RealField out(p.grid);
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = 2.0 * plus.v[i].real();
    return out;
}

double willmore(const RealField& p) {
    RealField p2(p.grid);
    for (std::size_t i = 0; i < p.v.size(); ++i) p2.v[i] = p.v[i] * p.v[i];
    return 2.0 * integrate(p2);
}

double flux_residual_numeric(const RealField& p, int n) {
    if (n != 1 && n != 2) throw std::invalid_argument("flow n must be 1 or 2");
    const ComplexField pc = to_complex(p);
    const ComplexField om = compute_omega(p, false);
    const ComplexField p2 = product(pc, pc, false);
    const ComplexField dp = wirtinger(pc, Dir::dz);

    ComplexField flux(p.grid);
    if (n == 1) {
        // d^2 p^2 - 3 (d p)^2 + 3 p^2 w
        flux = wirtinger(p2, Dir::dz, 2) - 3.0 * product(dp, dp, false) +
               3.0 * product(p2, om, false);
    } else {
        const ComplexField zt = compute_zeta(p, om, false);
        const ComplexField d2om = wirtinger(om, Dir::dz, 2);
        const ComplexField om2 = product(om, om, false);
        const ComplexField dp2 = product(dp, dp, false);
        // d^4 p^2 - 5 d^2 (d p)^2 + 5 (d^2 p)^2 + 5 w d^2 p^2 - 15 w (d p)^2
        //   + 5/2 (d w)(d p^2) + 5 p^2 (w^2 + zt + d^2 w)
        const ComplexField d2p = wirtinger(pc, Dir::dz, 2);
        flux = wirtinger(p2, Dir::dz, 4) - 5.0 * wirtinger(dp2, Dir::dz, 2) +
               5.0 * product(d2p, d2p, false) + 5.0 * product(om, wirtinger(p2, Dir::dz, 2), false) -
               15.0 * product(om, dp2, false) +
               2.5 * product(wirtinger(om, Dir::dz), wirtinger(p2, Dir::dz), false) +
               5.0 * product(p2, om2 + zt + d2om, false);
    }

    const ComplexField lhs = 2.0 * product(pc, flow_rhs_plus(p, n, false, true), false);
    const ComplexField resid = lhs - wirtinger(flux, Dir::dz);
    const double denom = max_abs(lhs);
    return denom == 0 ? max_abs(resid) : max_abs(resid) / denom;
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "ifrk4") return Scheme::ifrk4;
    if (s == "rk4") return Scheme::rk4;
    throw std::invalid_argument("unknown scheme '" + s + "' (expected ifrk4 or rk4)");
}

double default_dt(const Grid& g, int n_flow, Scheme scheme) {
    const int kcut = g.n / 3;
    const double k_half = (two_pi / g.length) * kcut / 2.0;
    const double c =
        scheme == Scheme::ifrk4 ? dt_heuristic_c_ifrk4[n_flow - 1] : dt_heuristic_c;
    return c / std::pow(k_half, 2 * n_flow + 1);
}

namespace {

// Spectral symbol of the dispersive head del^{2n+1} + dbar^{2n+1}
// (purely imaginary for every mode).
std::vector<cplx> head_symbol(const Grid& g, int n_flow) {
    const int n = g.n;
    const double k0 = two_pi / g.length;
    const int m = 2 * n_flow + 1;
    std::vector<cplx> lam(g.size());
    for (int jx = 0; jx < n; ++jx) {
        const double kx = k0 * mode_number(jx, n);
        for (int jy = 0; jy < n; ++jy) {
            const double ky = k0 * mode_number(jy, n);
            const cplx sd(ky / 2, kx / 2), sdb(-ky / 2, kx / 2);
            cplx a = 1, b = 1;
            for (int i = 0; i < m; ++i) {
                a *= sd;
                b *= sdb;
            }
            lam[std::size_t(jx) * n + jy] = a + b;
        }
    }
    return lam;
}

// With dealiasing on, the state itself is kept band-limited: products are
// truncated anyway, and modes beyond the cutoff would otherwise sit outside
// the rk4 stability region at the default step, fed by roundoff alone.
void truncate_band(std::vector<cplx>& hat, const Grid& g) {
    const int n = g.n, kcut = n / 3;
    for (int jx = 0; jx < n; ++jx)
        for (int jy = 0; jy < n; ++jy)
            if (std::abs(mode_number(jx, n)) > kcut || std::abs(mode_number(jy, n)) > kcut)
                hat[std::size_t(jx) * n + jy] = 0;
}

void check_state(const RealField& p) {
    if (!all_finite(p) || max_abs(p) > blowup_cap)
        throw std::runtime_error("blow-up detected: max|p| exceeds cap or is not finite");
}

std::vector<cplx> nonlinear_hat(const std::vector<cplx>& phat, const Grid& g, int n_flow,
                                bool dealias) {
    ComplexField pc(g);
    pc.v = ifft2(g, phat);
    RealField p = real_part(pc);
    const ComplexField plus = flow_rhs_plus(p, n_flow, dealias, false);
    ComplexField total(g);
    for (std::size_t i = 0; i < total.v.size(); ++i) total.v[i] = 2.0 * plus.v[i].real();
    return fft2(g, total.v);
}

}  // namespace

FlowState step(const FlowState& s, double dt, Scheme scheme, bool dealias, StepStats* stats) {
    if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
    check_state(s.p);
    const Grid& g = s.p.grid;
    FlowState out;
    out.t = s.t + dt;
    out.n_flow = s.n_flow;
    double discarded = 0;

    if (scheme == Scheme::rk4) {
        auto axpy = [&](const RealField& base, double c, const RealField& k) {
            RealField r(g);
            for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] = base.v[i] + c * k.v[i];
            return r;
        };
        const RealField k1 = flow_rhs(s.p, s.n_flow, dealias);
        const RealField k2 = flow_rhs(axpy(s.p, dt / 2, k1), s.n_flow, dealias);
        const RealField k3 = flow_rhs(axpy(s.p, dt / 2, k2), s.n_flow, dealias);
        const RealField k4 = flow_rhs(axpy(s.p, dt, k3), s.n_flow, dealias);
        out.p = RealField(g);
        for (std::size_t i = 0; i < out.p.v.size(); ++i)
            out.p.v[i] =
                s.p.v[i] + dt / 6 * (k1.v[i] + 2 * k2.v[i] + 2 * k3.v[i] + k4.v[i]);
        if (dealias) {
            auto hat = fft2(g, to_complex(out.p).v);
            truncate_band(hat, g);
            ComplexField pf(g);
            pf.v = ifft2(g, hat);
            out.p = real_part(pf, &discarded);
        }
    } else {
        // Integrating-factor RK4: exact propagation of the dispersive head.
        const std::vector<cplx> lam = head_symbol(g, s.n_flow);
        const std::size_t sz = g.size();
        std::vector<cplx> e_half(sz), e_full(sz);
        for (std::size_t i = 0; i < sz; ++i) {
            e_half[i] = std::exp(lam[i] * (dt / 2));
            e_full[i] = e_half[i] * e_half[i];
        }
        const std::vector<cplx> phat = fft2(g, to_complex(s.p).v);
        auto comb = [&](const std::vector<cplx>& x, const std::vector<cplx>& scale_x, double c,
                        const std::vector<cplx>& k, const std::vector<cplx>* scale_k) {
            std::vector<cplx> r(sz);
            for (std::size_t i = 0; i < sz; ++i)
                r[i] = scale_x[i] * x[i] + c * (scale_k ? (*scale_k)[i] * k[i] : k[i]);
            return r;
        };
        const auto a = nonlinear_hat(phat, g, s.n_flow, dealias);
        const auto b = nonlinear_hat(comb(phat, e_half, dt / 2, a, &e_half), g, s.n_flow, dealias);
        const auto c = nonlinear_hat(comb(phat, e_half, dt / 2, b, nullptr), g, s.n_flow, dealias);
        const auto d =
            nonlinear_hat(comb(phat, e_full, dt, c, &e_half), g, s.n_flow, dealias);
        std::vector<cplx> next(sz);
        for (std::size_t i = 0; i < sz; ++i)
            next[i] = e_full[i] * phat[i] +
                      dt / 6.0 *
                          (e_full[i] * a[i] + 2.0 * e_half[i] * (b[i] + c[i]) + d[i]);
        if (dealias) truncate_band(next, g);
        ComplexField pf(g);
        pf.v = ifft2(g, next);
        out.p = real_part(pf, &discarded);
    }

    check_state(out.p);
    if (stats) stats->discarded_imag = discarded;
    return out;
}

RealField make_initial_condition(const FlowRunConfig& cfg, const Grid& g) {
    RealField p(g);
    if (cfg.ic_kind == "cosine") {
        const double k = two_pi / g.length * cfg.mode;
        for (int ix = 0; ix < g.n; ++ix)
            for (int iy = 0; iy < g.n; ++iy) p.at(ix, iy) = cfg.amplitude * std::cos(k * g.x(ix));
        return p;
    }

    // Spectral construction; normalized to max|p| = amplitude afterwards.
    const int n = g.n;
    ComplexField hat(g);
    if (cfg.ic_kind == "random_band") {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        auto put = [&](int kx, int ky, cplx v) {
            hat.at((kx % n + n) % n, (ky % n + n) % n) = v;
        };
        for (int kx = 0; kx <= cfg.kmax; ++kx)
            for (int ky = -cfg.kmax; ky <= cfg.kmax; ++ky) {
                if (kx == 0 && ky < 0) continue;  // mirror partner fills it
                if (kx == 0 && ky == 0) {
                    put(0, 0, cplx(u(rng), 0));
                    continue;
                }
                const cplx v(u(rng), u(rng));
                put(kx, ky, v);
                put(-kx, -ky, std::conj(v));
            }
    } else {  // bump: truncated Gaussian spectrum, deterministic
        const double k0 = 2.0;
        const int kcap = 8;
        for (int kx = -kcap; kx <= kcap; ++kx)
            for (int ky = -kcap; ky <= kcap; ++ky)
                hat.at((kx % n + n) % n, (ky % n + n) % n) =
                    std::exp(-(kx * kx + ky * ky) / (2 * k0 * k0));
    }
    ComplexField pf(g);
    pf.v = ifft2(g, hat.v);
    p = real_part(pf);
    const double m = max_abs(p);
    if (m > 0)
        for (double& x : p.v) x *= cfg.amplitude / m;
    return p;
}

EvolveSummary evolve(const FlowRunConfig& cfg) {
    cfg.validate();
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);

    const Grid g = make_grid(cfg.n, cfg.length);
    const Scheme scheme = scheme_from_string(cfg.scheme);
    const double dt = cfg.dt > 0 ? cfg.dt : default_dt(g, cfg.n_flow, scheme);

    {
        std::FILE* fp = std::fopen((cfg.out_dir + "/resolved.cfg").c_str(), "w");
        if (!fp) throw std::runtime_error("cannot write resolved config in " + cfg.out_dir);
        std::fputs(cfg.resolved_text(dt).c_str(), fp);
        std::fclose(fp);
    }

    std::FILE* csv = std::fopen((cfg.out_dir + "/diagnostics.csv").c_str(), "w");
    if (!csv) throw std::runtime_error("cannot write diagnostics in " + cfg.out_dir);
    std::fprintf(csv, "step,t,S,max_abs_p,s_drift_rel,flux_residual\n");

    FlowState state{make_initial_condition(cfg, g), 0.0, cfg.n_flow};
    const double s0 = willmore(state.p);
    EvolveSummary summary;
    summary.dt = dt;
    summary.s_initial = s0;

    auto snapshot = [&](int step_idx) {
        char name[64];
        std::snprintf(name, sizeof name, "/snapshot_%06d.field", step_idx);
        write_field(cfg.out_dir + name, state.p);
    };
    auto log_row = [&](int step_idx, double flux_resid, bool have_flux) {
        const double s = willmore(state.p);
        const double drift = s0 != 0 ? std::abs(s - s0) / std::abs(s0) : std::abs(s - s0);
        if (have_flux)
            std::fprintf(csv, "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", step_idx, state.t, s,
                         max_abs(state.p), drift, flux_resid);
        else
            std::fprintf(csv, "%d,%.17g,%.17g,%.17g,%.17g,\n", step_idx, state.t, s,
                         max_abs(state.p), drift);
        summary.s_final = s;
        summary.s_drift_rel = drift;
    };

    snapshot(0);
    log_row(0, 0, false);
    try {
        for (int k = 1; k <= cfg.steps; ++k) {
            StepStats stats;
            state = step(state, dt, scheme, cfg.dealias, &stats);
            summary.max_discarded_imag = std::max(summary.max_discarded_imag, stats.discarded_imag);
            summary.steps_done = k;
            const bool flux_now = cfg.flux_every > 0 && k % cfg.flux_every == 0;
            log_row(k, flux_now ? flux_residual_numeric(state.p, cfg.n_flow) : 0, flux_now);
            if (cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0) snapshot(k);
        }
    } catch (...) {
        std::fclose(csv);
        throw;
    }
    if (cfg.steps > 0 && (cfg.snapshot_every == 0 || cfg.steps % cfg.snapshot_every != 0))
        snapshot(cfg.steps);
    std::fclose(csv);
    return summary;
}

}  // namespace mvn
