#include "mvn/surface.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace mvn {

namespace {

std::array<ChartField, 3> del_X(const Immersion& X) {
    return {wirt(X.X[0], Dir::dz), wirt(X.X[1], Dir::dz), wirt(X.X[2], Dir::dz)};
}

double rel_residual(const ChartField& r, double scale) {
    return scale > 0 ? max_abs(r) / scale : max_abs(r);
}

}  // namespace

double conformality_residual(const Immersion& X) {
    const auto dX = del_X(X);
    double worst = 0, scale = 0;
    for (std::size_t i = 0; i < X.chart.size(); ++i) {
        cplx gzz = 0;
        double norm = 0;
        for (int j = 0; j < 3; ++j) {
            gzz += dX[j].v[i] * dX[j].v[i];
            norm += std::norm(dX[j].v[i]);
        }
        worst = std::max(worst, std::abs(gzz));
        scale = std::max(scale, norm);
    }
    return scale > 0 ? worst / scale : worst;
}

SpinorField extract_spinors(const Immersion& X, double tol_conf) {
    const double conf = conformality_residual(X);
    if (conf > tol_conf) {
        char msg[128];
        std::snprintf(msg, sizeof msg, "non-conformal immersion (residual %.3e > %.3e)", conf,
                      tol_conf);
        throw std::runtime_error(msg);
    }

    ChartField F(X.chart);
    for (std::size_t i = 0; i < F.v.size(); ++i) F.v[i] = X.X[1].v[i] + cplx(0, 1) * X.X[0].v[i];

    // A derivative field at the noise floor of its partner is identically
    // zero (plane-like data); its "square root" would be amplified noise.
    const ChartField W1 = wirt(F, Dir::dzbar);
    const ChartField W2 = cplx(-1, 0) * wirt(F, Dir::dz);
    const double w_scale = std::max(max_abs(W1), max_abs(W2));
    auto root_or_zero = [&](const ChartField& W) {
        if (max_abs(W) <= 1e-12 * w_scale) return ChartField(X.chart);
        return continuous_sqrt(W);
    };
    SpinorField psi{X.chart, root_or_zero(W1), root_or_zero(W2)};

    // The sqrt fixes each spinor only up to a global sign; the pair sign is
    // immaterial but the relative sign must reproduce del X3 = -psi2 conj(psi1).
    const ChartField d3 = wirt(X.X[2], Dir::dz);
    double keep = 0, flip = 0;
    for (std::size_t i = 0; i < F.v.size(); ++i) {
        const cplx t = psi.psi2.v[i] * std::conj(psi.psi1.v[i]);
        keep = std::max(keep, std::abs(t + d3.v[i]));
        flip = std::max(flip, std::abs(-t + d3.v[i]));
    }
    if (flip < keep) psi.psi2 = cplx(-1, 0) * psi.psi2;
    return psi;
}

namespace {

double max_abs_interior(const ChartField& f, int margin) {
    if (margin <= 0 || f.chart.kind == ChartKind::periodic) return max_abs(f);
    double m = 0;
    for (int i = margin; i < f.chart.n - margin; ++i)
        for (int j = margin; j < f.chart.n - margin; ++j)
            m = std::max(m, std::abs(f.at(i, j)));
    return m;
}

}  // namespace

int chart_core_margin(const Chart& c) {
    if (c.kind == ChartKind::periodic) return 0;
    return c.n >= 76 ? 36 : 1;  // window band width, or the one-sided rim
}

double dirac_residual(const SpinorField& psi, const std::vector<double>& p, int margin) {
    if (p.size() != psi.chart.size()) throw std::invalid_argument("p has wrong sample count");
    const ChartField d1 = wirt(psi.psi1, Dir::dz);
    const ChartField d2 = wirt(psi.psi2, Dir::dzbar);
    const ChartField d1b = wirt(psi.psi1, Dir::dzbar);
    const ChartField d2z = wirt(psi.psi2, Dir::dz);
    ChartField r1(psi.chart), r2(psi.chart), p2(psi.chart), p1(psi.chart);
    for (std::size_t i = 0; i < p.size(); ++i) {
        p2.v[i] = p[i] * psi.psi2.v[i];
        p1.v[i] = p[i] * psi.psi1.v[i];
        r1.v[i] = d1.v[i] - p2.v[i];
        r2.v[i] = d2.v[i] + p1.v[i];
    }
    // Scale from the full first-order data plus a spinor-magnitude floor,
    // so identically-vanishing equation sides (minimal surfaces, constant
    // spinors) stay well-normalized.
    const double scale = std::max({max_abs_interior(d1, margin), max_abs_interior(d2, margin),
                                   max_abs_interior(d1b, margin), max_abs_interior(d2z, margin),
                                   max_abs_interior(p1, margin), max_abs_interior(p2, margin),
                                   std::max(max_abs(psi.psi1), max_abs(psi.psi2))});
    if (scale == 0) return 0;
    return std::max(max_abs_interior(r1, margin), max_abs_interior(r2, margin)) / scale;
}

ClosednessResiduals check_closed(const SpinorField& psi) {
    const ChartField sq1 = pointwise(psi.psi1, psi.psi1);
    const ChartField sq2 = pointwise(psi.psi2, psi.psi2);
    const ChartField a = wirt(sq1, Dir::dz), b = wirt(sq2, Dir::dzbar);
    const ChartField m21 = pointwise(psi.psi2, conj(psi.psi1));
    const ChartField m12 = pointwise(psi.psi1, conj(psi.psi2));
    const ChartField c = wirt(m21, Dir::dzbar), d = wirt(m12, Dir::dz);
    // Scale from the full derivative data of the form coefficients, with a
    // spinor-magnitude floor: for minimal surfaces both equation sides
    // vanish identically and the naive normalization degenerates.
    const double spin2 = std::pow(std::max(max_abs(psi.psi1), max_abs(psi.psi2)), 2);
    const double s_plus = std::max({max_abs(a), max_abs(b), max_abs(wirt(sq1, Dir::dzbar)),
                                    max_abs(wirt(sq2, Dir::dz)), spin2});
    const double s_3 = std::max({max_abs(c), max_abs(d), max_abs(wirt(m21, Dir::dz)),
                                 max_abs(wirt(m12, Dir::dzbar)), spin2});
    ClosednessResiduals r;
    r.r_plus = rel_residual(a + b, s_plus);
    r.r_3 = rel_residual(c - d, s_3);
    return r;
}

InduceResult induce_surface(const SpinorField& psi, int bi, int bj, double tol_closed) {
    const Chart& c = psi.chart;
    if (bi < 0 || bi >= c.n || bj < 0 || bj >= c.n)
        throw std::invalid_argument("basepoint outside the chart");
    const ClosednessResiduals cr = check_closed(psi);
    if (std::max(cr.r_plus, cr.r_3) > tol_closed) {
        char msg[128];
        std::snprintf(msg, sizeof msg, "forms not closed (residuals %.3e, %.3e > %.3e)",
                      cr.r_plus, cr.r_3, tol_closed);
        throw std::runtime_error(msg);
    }

    // Axis integrands: along x, dz = dzbar = dx; along y, dz = i dy,
    // dzbar = -i dy.  Omega_plus = conj(psi1)^2 dz - conj(psi2)^2 dzbar,
    // Omega_3 = -(psi2 conj(psi1) dz + psi1 conj(psi2) dzbar).
    const ChartField q1 = conj(pointwise(psi.psi1, psi.psi1));
    const ChartField q2 = conj(pointwise(psi.psi2, psi.psi2));
    const ChartField m = pointwise(psi.psi2, conj(psi.psi1));
    ChartField ax_p(c), ay_p(c), ax_3(c), ay_3(c);
    for (std::size_t i = 0; i < c.size(); ++i) {
        ax_p.v[i] = q1.v[i] - q2.v[i];
        ay_p.v[i] = cplx(0, 1) * (q1.v[i] + q2.v[i]);
        ax_3.v[i] = -2.0 * m.v[i].real();
        ay_3.v[i] = 2.0 * m.v[i].imag();
    }

    const ChartField Fx_p = cumint_x(ax_p), Fy_p = cumint_y(ay_p);
    const ChartField Fx_3 = cumint_x(ax_3), Fy_3 = cumint_y(ay_3);

    InduceResult out;
    out.X.chart = c;
    for (auto& comp : out.X.X) comp = ChartField(c);
    double worst = 0;
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) {
            const cplx Ip_x = Fx_p.at(i, bj) - Fx_p.at(bi, bj) + Fy_p.at(i, j) - Fy_p.at(i, bj);
            const cplx Ip_y = Fy_p.at(bi, j) - Fy_p.at(bi, bj) + Fx_p.at(i, j) - Fx_p.at(bi, j);
            const cplx I3_x = Fx_3.at(i, bj) - Fx_3.at(bi, bj) + Fy_3.at(i, j) - Fy_3.at(i, bj);
            const cplx I3_y = Fy_3.at(bi, j) - Fy_3.at(bi, bj) + Fx_3.at(i, j) - Fx_3.at(bi, j);
            worst = std::max(worst, std::abs(Ip_x - Ip_y));
            worst = std::max(worst, std::abs(I3_x - I3_y));
            // X2 - i X1 = int Omega_plus
            out.X.X[0].at(i, j) = -Ip_x.imag();
            out.X.X[1].at(i, j) = Ip_x.real();
            out.X.X[2].at(i, j) = I3_x.real();
        }
    out.path_independence = worst;
    if (worst > 10 * tol_closed) {
        char msg[128];
        std::snprintf(msg, sizeof msg,
                      "path-independence residual %.3e exceeds 10 x tol_closed %.3e", worst,
                      tol_closed);
        throw std::runtime_error(msg);
    }

    if (c.kind == ChartKind::periodic) {
        const double Lx = c.ax1 - c.ax0, Ly = c.ay1 - c.ay0;
        cplx sx_p = 0, sy_p = 0, sx_3 = 0, sy_3 = 0;
        for (int k = 0; k < c.n; ++k) {
            sx_p += ax_p.at(k, bj);
            sy_p += ay_p.at(bi, k);
            sx_3 += ax_3.at(k, bj);
            sy_3 += ay_3.at(bi, k);
        }
        out.period_x_plus = sx_p * Lx / double(c.n);
        out.period_y_plus = sy_p * Ly / double(c.n);
        out.period_x_3 = sx_3 * Lx / double(c.n);
        out.period_y_3 = sy_3 * Ly / double(c.n);
    }
    return out;
}

FrameCurvature frame_and_curvature(const Immersion& X) {
    const Chart& c = X.chart;
    const auto dX = del_X(X);
    FrameCurvature fc;
    fc.chart = c;
    fc.lambda.resize(c.size());
    fc.H.resize(c.size());
    fc.K.resize(c.size());
    fc.phi.resize(c.size());
    for (int a = 0; a < 3; ++a) {
        fc.e1[a].resize(c.size());
        fc.e2[a].resize(c.size());
        fc.e3[a].resize(c.size());
    }

    double lam_max = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        double norm = 0;
        for (int j = 0; j < 3; ++j) norm += std::norm(dX[j].v[i]);
        fc.lambda[i] = std::sqrt(2.0 * norm);
        lam_max = std::max(lam_max, fc.lambda[i]);
    }
    const int lo = c.kind == ChartKind::open ? 1 : 0;
    const int hi = c.kind == ChartKind::open ? c.n - 2 : c.n - 1;
    for (int i = lo; i <= hi; ++i)
        for (int j = lo; j <= hi; ++j)
            if (fc.lambda[std::size_t(i) * c.n + j] < 1e-8 * lam_max)
                throw std::runtime_error("degenerate metric: conformal factor vanishes");

    std::array<ChartField, 3> ddX, d2X;
    for (int j = 0; j < 3; ++j) {
        ddX[j] = wirt_dd(X.X[j]);
        d2X[j] = wirt2(X.X[j], Dir::dz);
    }

    for (std::size_t i = 0; i < c.size(); ++i) {
        const double lam = fc.lambda[i];
        const double inv = lam > 0 ? 1.0 / lam : 0.0;
        double e1[3], e2[3];
        for (int j = 0; j < 3; ++j) {
            e1[j] = 2.0 * dX[j].v[i].real() * inv;
            e2[j] = -2.0 * dX[j].v[i].imag() * inv;
        }
        const double e3[3] = {e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2],
                              e1[0] * e2[1] - e1[1] * e2[0]};
        double h = 0;
        cplx ph = 0;
        const double lam2inv = lam > 0 ? 2.0 / (lam * lam) : 0.0;
        for (int j = 0; j < 3; ++j) {
            h += ddX[j].v[i].real() * e3[j];
            ph += d2X[j].v[i] * e3[j];
        }
        h *= lam2inv;
        ph *= lam2inv;
        fc.H[i] = h;
        fc.phi[i] = ph;
        fc.K[i] = h * h - std::norm(ph);
        for (int j = 0; j < 3; ++j) {
            fc.e1[j][i] = e1[j];
            fc.e2[j][i] = e2[j];
            fc.e3[j][i] = e3[j];
        }
    }
    return fc;
}

std::vector<double> potential_field(const FrameCurvature& fc) {
    std::vector<double> p(fc.lambda.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = 0.5 * fc.lambda[i] * fc.H[i];
    return p;
}

double willmore_geometric(const FrameCurvature& fc, const std::vector<std::uint8_t>* mask) {
    ChartField integrand(fc.chart);
    for (std::size_t i = 0; i < integrand.v.size(); ++i)
        integrand.v[i] = 0.5 * fc.lambda[i] * fc.lambda[i] * fc.H[i] * fc.H[i];
    return chart_integrate(integrand, mask).real();
}

double willmore_potential(const FrameCurvature& fc, const std::vector<std::uint8_t>* mask) {
    const std::vector<double> p = potential_field(fc);
    ChartField integrand(fc.chart);
    for (std::size_t i = 0; i < integrand.v.size(); ++i) integrand.v[i] = 2.0 * p[i] * p[i];
    return chart_integrate(integrand, mask).real();
}

StructureReport structure_residuals(const Immersion& X, const SpinorField* psi,
                                    int margin) {
    const Chart& c = X.chart;
    const FrameCurvature fc = frame_and_curvature(X);
    StructureReport rep{};

    ChartField lam_field(c);
    for (std::size_t i = 0; i < c.size(); ++i) lam_field.v[i] = fc.lambda[i];
    const ChartField dlam = wirt(lam_field, Dir::dz);

    double worst1 = 0, scale1 = 0, worst3 = 0, scale3 = 0;
    for (int j = 0; j < 3; ++j) {
        const ChartField ddXj = wirt_dd(X.X[j]);
        const ChartField d2Xj = wirt2(X.X[j], Dir::dz);
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double lam22 = 0.5 * fc.lambda[i] * fc.lambda[i];
            const cplx r1 = ddXj.v[i] - lam22 * fc.H[i] * fc.e3[j][i];
            const cplx frame(fc.e1[j][i], -fc.e2[j][i]);  // (e1 - i e2)_j
            const cplx r3 = d2Xj.v[i] - dlam.v[i] * frame - lam22 * fc.phi[i] * fc.e3[j][i];
            worst1 = std::max(worst1, std::abs(r1));
            scale1 = std::max(scale1, std::abs(ddXj.v[i]));
            worst3 = std::max(worst3, std::abs(r3));
            scale3 = std::max(scale3, std::abs(d2Xj.v[i]));
        }
    }
    rep.eq_mean = scale1 > 0 ? worst1 / scale1 : worst1;
    rep.eq_hopf = scale3 > 0 ? worst3 / scale3 : worst3;

    if (psi) {
        ChartField n1(c), n2(c);
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double inv = fc.lambda[i] > 0 ? 1.0 / fc.lambda[i] : 0.0;
            n1.v[i] = psi->psi1.v[i] * inv;
            n2.v[i] = psi->psi2.v[i] * inv;
        }
        const ChartField a = wirt(n1, Dir::dzbar), b = wirt(n2, Dir::dz);
        ChartField h1(c), h2(c);
        // Spinor-scale floor keeps umbilic surfaces (both sides ~ 0) from
        // degenerating into 0/0.
        const double floor = std::max(max_abs(psi->psi1), max_abs(psi->psi2));
        double s1 = floor, s2 = floor;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const cplx t1 = 0.5 * std::conj(fc.phi[i]) * psi->psi2.v[i];
            const cplx t2 = 0.5 * fc.phi[i] * psi->psi1.v[i];
            h1.v[i] = a.v[i] - t1;
            h2.v[i] = b.v[i] + t2;
            s1 = std::max({s1, std::abs(a.v[i]), std::abs(t1)});
            s2 = std::max({s2, std::abs(b.v[i]), std::abs(t2)});
        }
        rep.hopf1 = s1 > 0 ? max_abs_interior(h1, margin) / s1 : 0;
        rep.hopf2 = s2 > 0 ? max_abs_interior(h2, margin) / s2 : 0;

        double worst = 0, scale = 0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double lam_spin =
                std::norm(psi->psi1.v[i]) + std::norm(psi->psi2.v[i]);
            worst = std::max(worst, std::abs(lam_spin - fc.lambda[i]));
            scale = std::max(scale, fc.lambda[i]);
        }
        rep.lambda_consistency = scale > 0 ? worst / scale : worst;
    }
    return rep;
}

void export_obj(const Immersion& X, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open " + path + " for writing");
    const int n = X.chart.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            std::fprintf(fp, "v %.10g %.10g %.10g\n", X.X[0].at(i, j).real(),
                         X.X[1].at(i, j).real(), X.X[2].at(i, j).real());
    auto id = [n](int i, int j) { return i * n + j + 1; };
    const int cells = X.chart.kind == ChartKind::periodic ? n : n - 1;
    for (int i = 0; i < cells; ++i)
        for (int j = 0; j < cells; ++j) {
            const int i1 = (i + 1) % n, j1 = (j + 1) % n;
            std::fprintf(fp, "f %d %d %d\n", id(i, j), id(i1, j), id(i1, j1));
            std::fprintf(fp, "f %d %d %d\n", id(i, j), id(i1, j1), id(i, j1));
        }
    std::fclose(fp);
}

Immersion make_plane(const Chart& c) {
    Immersion X{c, {ChartField(c), ChartField(c), ChartField(c)}};
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) {
            X.X[0].at(i, j) = c.x(i);
            X.X[1].at(i, j) = c.y(j);
        }
    return X;
}

Immersion make_sphere(const Chart& c) {
    Immersion X{c, {ChartField(c), ChartField(c), ChartField(c)}};
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) {
            const double x = c.x(i), y = c.y(j), r2 = x * x + y * y;
            X.X[0].at(i, j) = 2 * x / (1 + r2);
            X.X[1].at(i, j) = 2 * y / (1 + r2);
            X.X[2].at(i, j) = (r2 - 1) / (1 + r2);
        }
    return X;
}

Immersion make_enneper(const Chart& c) {
    Immersion X{c, {ChartField(c), ChartField(c), ChartField(c)}};
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) {
            const double x = c.x(i), y = c.y(j);
            X.X[0].at(i, j) = x - x * x * x / 3 + x * y * y;
            X.X[1].at(i, j) = -y + y * y * y / 3 - x * x * y;
            X.X[2].at(i, j) = x * x - y * y;
        }
    return X;
}

Immersion make_bent_strip(const Chart& c) {
    Immersion X{c, {ChartField(c), ChartField(c), ChartField(c)}};
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) {
            X.X[0].at(i, j) = std::cos(c.x(i));
            X.X[1].at(i, j) = std::sin(c.x(i));
            X.X[2].at(i, j) = c.y(j);
        }
    return X;
}

std::vector<std::uint8_t> disk_mask(const Chart& c, double radius) {
    std::vector<std::uint8_t> mask(c.size(), 0);
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j)
            if (c.x(i) * c.x(i) + c.y(j) * c.y(j) <= radius * radius)
                mask[std::size_t(i) * c.n + j] = 1;
    return mask;
}

}  // namespace mvn
