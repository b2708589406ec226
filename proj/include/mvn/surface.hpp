#pragma once

// Generalized Weierstrass representation: spinors from conformal
// immersions, the Dirac system and closed-form checks, surface
// reconstruction by contour integration, frame/curvature data and the
// Willmore functional.
//
// Conventions: with F = X2 + i X1 the spinors are psi1 = sqrt(dbar F),
// psi2 = sqrt(-del F) (branch by continuity; the relative sign is fixed
// against del X3 = -psi2 conj(psi1), which resolves the mirror
// ambiguity). Frames use e3 = e1 x e2; the mean curvature sign follows
// that orientation.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mvn/chart.hpp"

namespace mvn {

struct Immersion {
    Chart chart;
    std::array<ChartField, 3> X;  // target coordinates (real-valued)
};

struct SpinorField {
    Chart chart;
    ChartField psi1, psi2;
};

struct FrameCurvature {
    Chart chart;
    std::vector<double> lambda;                 // conformal factor
    std::array<std::vector<double>, 3> e1, e2, e3;
    std::vector<double> H;                      // mean curvature
    std::vector<cplx> phi;                      // Hopf quantity
    std::vector<double> K;                      // Gaussian curvature
};

// max |sum_j (del X_j)^2| / max sum_j |del X_j|^2.
double conformality_residual(const Immersion& X);

SpinorField extract_spinors(const Immersion& X, double tol_conf = 1e-6);

// Width of the boundary band of an open chart where derivatives fall back
// to finite differences; residual checks quoted "on the interior" skip it.
int chart_core_margin(const Chart& c);

// p sampled on the chart (row-major), usually lambda H / 2. Residuals are
// max-norms relative to the first-order scale of the spinor data, taken
// over samples at least `margin` from an open-chart edge.
double dirac_residual(const SpinorField& psi, const std::vector<double>& p, int margin = 0);

struct ClosednessResiduals {
    double r_plus;  // || del(psi1^2) + dbar(psi2^2) ||, relative
    double r_3;     // || dbar(psi2 conj psi1) - del(psi1 conj psi2) ||, relative
};
ClosednessResiduals check_closed(const SpinorField& psi);

struct InduceResult {
    Immersion X;                 // x-first paths; X(basepoint) = 0
    double path_independence;    // max |x-first - y-first| over samples
    // Periods per axis of the two closed forms (periodic charts only).
    cplx period_x_plus{}, period_y_plus{}, period_x_3{}, period_y_3{};
};

InduceResult induce_surface(const SpinorField& psi, int bi = 0, int bj = 0,
                            double tol_closed = 1e-5);

FrameCurvature frame_and_curvature(const Immersion& X);

std::vector<double> potential_field(const FrameCurvature& fc);  // p = lambda H / 2

// int (lambda^2/2) H^2 dx dy, and the same value through p: 2 int p^2.
double willmore_geometric(const FrameCurvature& fc,
                          const std::vector<std::uint8_t>* mask = nullptr);
double willmore_potential(const FrameCurvature& fc,
                          const std::vector<std::uint8_t>* mask = nullptr);

struct StructureReport {
    double eq_mean;             // ddbar X vs (lambda^2/2) H e3
    double eq_hopf;             // d^2 X vs d lambda (e1 - i e2) + (lambda^2/2) phi e3
    double hopf1, hopf2;        // dbar(psi1/lambda) = (conj phi/2) psi2 and mate
    double lambda_consistency;  // |psi1|^2 + |psi2|^2 vs lambda from X
};
// Max-norms taken over samples at least `margin` from an open-chart edge.
StructureReport structure_residuals(const Immersion& X, const SpinorField* psi = nullptr,
                                    int margin = 0);

void export_obj(const Immersion& X, const std::string& path);

// Built-in immersions with closed-form coordinates.
Immersion make_plane(const Chart& c);
Immersion make_sphere(const Chart& c);   // unit sphere, stereographic
Immersion make_enneper(const Chart& c);
Immersion make_bent_strip(const Chart& c);  // unit-cylinder patch

std::vector<std::uint8_t> disk_mask(const Chart& c, double radius);

}  // namespace mvn
