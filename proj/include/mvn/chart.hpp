#pragma once

// Charts for immersions: periodic (square, spectral calculus) or open
// (rectangular, endpoint-inclusive sampling).
//
// Open-chart derivatives are hybrid. A smooth erf-blend window w (rising
// over ~8 sigma, sigma = 3h, inside each edge) makes w*f periodic to
// ~1e-9 relative, so FFT differentiation is valid wherever w = 1; samples
// in the boundary band where w < 1 use 4th-order finite differences
// (one-sided at the edges, Fornberg weights). The band is exact for
// polynomial data and accurate wherever the field varies slowly near the
// boundary; rapidly varying data should be kept inside the core.

#include <cstdint>
#include <string>
#include <vector>

#include "mvn/field.hpp"

namespace mvn {

enum class ChartKind { periodic, open };

struct Chart {
    ChartKind kind = ChartKind::open;
    int n = 0;
    double ax0 = 0, ax1 = 0, ay0 = 0, ay1 = 0;  // extent

    static Chart periodic(int n, double length);  // [0,L) x [0,L)
    static Chart open(int n, double x0, double x1, double y0, double y1);

    double hx() const { return kind == ChartKind::periodic ? (ax1 - ax0) / n : (ax1 - ax0) / (n - 1); }
    double hy() const { return kind == ChartKind::periodic ? (ay1 - ay0) / n : (ay1 - ay0) / (n - 1); }
    double x(int i) const { return ax0 + i * hx(); }
    double y(int j) const { return ay0 + j * hy(); }
    std::size_t size() const { return std::size_t(n) * std::size_t(n); }
    bool operator==(const Chart&) const = default;
};

// Row-major over (x, y): index = ix*n + iy.
struct ChartField {
    Chart chart;
    std::vector<cplx> v;

    ChartField() = default;
    explicit ChartField(const Chart& c, cplx fill = {}) : chart(c), v(c.size(), fill) {}
    cplx& at(int i, int j) { return v[std::size_t(i) * chart.n + j]; }
    const cplx& at(int i, int j) const { return v[std::size_t(i) * chart.n + j]; }
};

// Pure axis derivative d^m/dx^m or d^m/dy^m, m in [1, 5].
ChartField deriv_x(const ChartField& f, int m = 1);
ChartField deriv_y(const ChartField& f, int m = 1);

// Wirtinger combinations built from the axis derivatives.
ChartField wirt(const ChartField& f, Dir dir);       // del or dbar
ChartField wirt_dd(const ChartField& f);             // del dbar = (Dxx+Dyy)/4
ChartField wirt2(const ChartField& f, Dir dir);      // del^2 or dbar^2

// Cumulative line integrals from index 0 along the axis, per line:
// F(i,j) = int_{x_0}^{x_i} f(., y_j) dx (and the y analogue). Open charts
// use trapezoid sums with Gregory endpoint corrections (orders h^2..h^6
// from hybrid line derivatives); periodic charts use the exact spectral
// antiderivative plus the linear mean term.
ChartField cumint_x(const ChartField& f);
ChartField cumint_y(const ChartField& f);

// Quadrature over the chart. Open charts use trapezoid weights, or a plain
// masked Riemann sum when a mask is given (1 = include).
cplx chart_integrate(const ChartField& f, const std::vector<std::uint8_t>* mask = nullptr);

ChartField operator+(const ChartField& a, const ChartField& b);
ChartField operator-(const ChartField& a, const ChartField& b);
ChartField operator*(cplx s, const ChartField& f);
ChartField pointwise(const ChartField& a, const ChartField& b);  // product
ChartField conj(const ChartField& f);
double max_abs(const ChartField& f);

// Branch-continuous square root: principal root at the basepoint (0,0),
// then a row-major sweep taking the root nearer the already-swept
// neighbor of larger magnitude. Throws "branch discontinuity" when the
// swept field is not consistently single-valued (odd-winding zeros),
// detected by adjacent values more than 90 degrees apart away from zeros.
ChartField continuous_sqrt(const ChartField& f);

// Field text format with chart metadata:
//   # n=<n> length=<x-extent> kind=<real|complex> chart=<periodic|open>
//     xmin=.. xmax=.. ymin=.. ymax=..
// then n^2 samples in row-major order ("re" or "re im" per line).
void write_chart_field(const std::string& path, const ChartField& f, bool as_real = false);
ChartField read_chart_field(const std::string& path);

}  // namespace mvn
