// Acceptance suite: one check per release criterion, each printed as a
// PASS/FAIL line. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "mvn/flow.hpp"
#include "mvn/grideval.hpp"
#include "mvn/surface.hpp"
#include "mvn/verify.hpp"

using namespace mvn;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%2d] %-46s %s  (%s)\n", idx, name.c_str(), ok ? "PASS" : "FAIL",
                detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double drift_after(const RealField& p0, int n_flow, double dt, int steps) {
    const double s0 = willmore(p0);
    FlowState st{p0, 0, n_flow};
    for (int k = 0; k < steps; ++k) st = step(st, dt, Scheme::ifrk4, true);
    return std::abs(willmore(st.p) - s0) / s0;
}

}  // namespace

int main() {
    const auto t_start = std::chrono::steady_clock::now();

    // 1. Symbolic compatibility, both parts, exact zero.
    {
        const auto c_start = std::chrono::steady_clock::now();
        const LaxTriple t = build_triple_n2();
        const bool plus = compatibility_residual(t, Part::plus).is_zero();
        const bool minus = compatibility_residual(t, Part::minus).is_zero();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - c_start).count();
        report(1, "symbolic compatibility (plus, minus)", plus && minus && secs < 60,
               fmt("exact zeros, %.2f s", secs));
    }

    // 2. Five telescoping identities, exact zero.
    {
        const LaxTriple t = build_triple_n2();
        bool all = true;
        for (const DiffPoly& r : telescoping_residuals(t)) all = all && r.is_zero();
        report(2, "telescoping identities (5 equations)", all, "exact zeros");
    }

    // 3. Flux identities and agreement of the two n=2 forms.
    {
        const bool ok = flux_residual(1, FluxForm::direct).is_zero() &&
                        flux_residual(2, FluxForm::direct).is_zero() &&
                        flux_residual(2, FluxForm::simpler).is_zero() &&
                        (flux_expression(2, FluxForm::direct) -
                         flux_expression(2, FluxForm::simpler))
                            .is_zero();
        report(3, "flux identities (n=1; n=2 direct+simpler)", ok, "exact zeros");
    }

    // 4. Numeric-symbolic agreement at n = 128, dealiasing off.
    {
        FlowRunConfig cfg;
        cfg.n = 128;
        cfg.ic_kind = "random_band";
        cfg.kmax = 4;
        cfg.amplitude = 0.1;
        cfg.seed = 11;
        const RealField p = make_initial_condition(cfg, make_grid(cfg.n));
        const ComplexField omega = compute_omega(p);
        const ComplexField zeta = compute_zeta(p, omega);
        const GridBinding bind{&p, &omega, &zeta};
        double worst = 0;
        for (int n : {1, 2}) {
            const RealField rhs = flow_rhs(p, n, false);
            const ComplexField sym = eval_on_grid(flow_rhs_symbolic(n), bind);
            double err = 0;
            for (std::size_t i = 0; i < rhs.v.size(); ++i)
                err = std::max(err, std::abs(rhs.v[i] - 2 * sym.v[i].real()));
            worst = std::max(worst, err / max_abs(rhs));
        }
        report(4, "numeric vs symbolic flow rhs (n=128)", worst <= 1e-10,
               fmt("rel err %.2e <= 1e-10", worst));
    }

    // 5. Conservation of S over 1000 ifrk4 steps; halving dt gives ~16x.
    {
        FlowRunConfig cfg;
        cfg.n = 64;
        cfg.ic_kind = "random_band";
        cfg.kmax = 4;
        cfg.amplitude = 0.1;
        cfg.seed = 7;
        const Grid g = make_grid(cfg.n);
        const RealField p0 = make_initial_condition(cfg, g);
        for (int n_flow : {1, 2}) {
            const double dt = default_dt(g, n_flow, Scheme::ifrk4);
            const double d1 = drift_after(p0, n_flow, dt, 1000);
            const double d2 = drift_after(p0, n_flow, dt / 2, 2000);
            const double ratio = d1 / d2;
            report(5, fmt("S conservation, flow %.0f (1000 steps)", n_flow),
                   d1 <= 1e-6 && ratio >= 10 && ratio <= 24,
                   fmt("drift %.2e <= 1e-6, halving ratio %.1f in [10,24]", d1, ratio));
        }
    }

    // 6. Pointwise flux divergence, both flows, 4-mode ICs at n = 128.
    {
        FlowRunConfig cfg;
        cfg.n = 128;
        cfg.ic_kind = "random_band";
        cfg.kmax = 4;
        cfg.amplitude = 0.1;
        cfg.seed = 23;
        const RealField p = make_initial_condition(cfg, make_grid(cfg.n));
        const double r1 = flux_residual_numeric(p, 1);
        const double r2 = flux_residual_numeric(p, 2);
        report(6, "numeric flux divergence (n=128)", r1 <= 1e-8 && r2 <= 1e-8,
               fmt("residuals %.2e, %.2e <= 1e-8", r1, r2));
    }

    // 7. d-bar inversion at machine precision; gauge obstruction raised.
    {
        const Grid g = make_grid(64);
        double worst = 0;
        const int modes[3][2] = {{0, 1}, {3, -2}, {-5, 4}};
        for (const auto& m : modes) {
            ComplexField f(g);
            for (int ix = 0; ix < g.n; ++ix)
                for (int iy = 0; iy < g.n; ++iy)
                    f.at(ix, iy) = std::exp(cplx(0, m[0] * g.x(ix) + m[1] * g.y(iy)));
            const ComplexField back = wirtinger(dbar_inverse(f), Dir::dzbar);
            worst = std::max(worst, max_abs(back - f) / max_abs(f));
        }
        bool caught = false;
        try {
            dbar_inverse(ComplexField(g, 1.0));
        } catch (const std::exception&) {
            caught = true;
        }
        report(7, "d-bar inversion single modes + obstruction", worst <= 1e-13 && caught,
               fmt("rel err %.2e <= 1e-13, obstruction raised", worst));
    }

    // 8. Weierstrass round trip on the sphere chart.
    {
        const Chart c = Chart::open(128, -10, 10, -10, 10);
        const Immersion S = make_sphere(c);
        const SpinorField psi = extract_spinors(S);
        const FrameCurvature fc = frame_and_curvature(S);
        const int m = chart_core_margin(c);
        const double dirac = dirac_residual(psi, potential_field(fc), m);
        const ClosednessResiduals cr = check_closed(psi);
        const double closed = std::max(cr.r_plus, cr.r_3);
        const InduceResult ind = induce_surface(psi);
        double rt = 0;
        for (int i = 1; i < c.n - 1; ++i)
            for (int j = 1; j < c.n - 1; ++j)
                for (int k = 0; k < 3; ++k)
                    rt = std::max(rt, std::abs(ind.X.X[k].at(i, j).real() -
                                               (S.X[k].at(i, j).real() -
                                                S.X[k].at(0, 0).real())));
        const bool ok = rt <= 1e-5 && dirac <= 1e-5 && closed <= 1e-5 &&
                        ind.path_independence <= 10 * closed;
        report(8, "sphere round trip (n=128, |z|<=10)", ok,
               fmt("round trip %.2e, dirac %.2e, closed %.2e", rt, dirac, closed));
    }

    // 9. Willmore equivalence and the closed-form sphere value.
    {
        double worst = 0;
        auto two_routes = [&worst](const FrameCurvature& fc,
                                   const std::vector<std::uint8_t>* mask) {
            const double a = willmore_geometric(fc, mask);
            const double b = willmore_potential(fc, mask);
            if (a != 0 || b != 0) worst = std::max(worst, std::abs(a - b) / std::max(a, b));
            return a;
        };
        const Chart cs = Chart::open(128, -10, 10, -10, 10);
        const FrameCurvature fs = frame_and_curvature(make_sphere(cs));
        const auto mask = disk_mask(cs, 10.0);
        const double sphere_value = two_routes(fs, &mask);
        two_routes(fs, nullptr);
        const Chart ce = Chart::open(96, -1.5, 1.5, -1.5, 1.5);
        two_routes(frame_and_curvature(make_enneper(ce)), nullptr);
        const Chart cb = Chart::open(96, 0.2, 0.2 + two_pi / 4, 0.0, 1.5);
        two_routes(frame_and_curvature(make_bent_strip(cb)), nullptr);
        const double closed_form = two_pi * (1 - 1.0 / 101.0);
        const double sphere_err = std::abs(sphere_value - closed_form) / closed_form;
        report(9, "Willmore: geometric = 2 int p^2; sphere value",
               worst <= 1e-10 && sphere_err <= 0.01,
               fmt("route diff %.2e <= 1e-10, sphere err %.2e <= 1e-2", worst, sphere_err));
    }

    // 10. Enneper minimal-surface residuals.
    {
        const Chart c = Chart::open(96, -1.5, 1.5, -1.5, 1.5);
        const Immersion E = make_enneper(c);
        const SpinorField psi = extract_spinors(E);
        const int m = chart_core_margin(c);
        const std::vector<double> zero(c.size(), 0.0);
        const double dirac = dirac_residual(psi, zero, m);
        const FrameCurvature fc = frame_and_curvature(E);
        double maxH = 0, maxPhi = 0;
        for (std::size_t q = 0; q < c.size(); ++q) {
            maxH = std::max(maxH, std::abs(fc.H[q]));
            maxPhi = std::max(maxPhi, std::abs(fc.phi[q]));
        }
        const double h_resid = maxH / maxPhi;
        report(10, "Enneper minimal surface (p = 0)", dirac <= 1e-6 && h_resid <= 1e-6,
               fmt("dirac %.2e, H residual %.2e <= 1e-6", dirac, h_resid));
    }

    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    std::printf("%d of 11 acceptance lines passed in %.1f s\n", 11 - failures, total);
    return failures;
}
