#include "mvn/chart.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <map>
#include <mutex>
#include <queue>
#include <stdexcept>

namespace mvn {

Chart Chart::periodic(int n, double length) {
    if (n < 8 || n % 2 != 0)
        throw std::invalid_argument("periodic chart: n must be even >= 8");
    if (!(length > 0)) throw std::invalid_argument("periodic chart: length must be positive");
    return Chart{ChartKind::periodic, n, 0, length, 0, length};
}

Chart Chart::open(int n, double x0, double x1, double y0, double y1) {
    if (n < 2) throw std::invalid_argument("open chart: n must be >= 2");
    if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("open chart: empty extent");
    return Chart{ChartKind::open, n, x0, x1, y0, y1};
}

// ---------------------------------------------------------------------
// 1-d FFT on lines.

namespace {

struct LinePlan {
    fftw_complex* buf = nullptr;
    fftw_plan fwd{}, bwd{};
    explicit LinePlan(int n) {
        buf = fftw_alloc_complex(static_cast<std::size_t>(n));
        fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    LinePlan(const LinePlan&) = delete;
    ~LinePlan() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }
};

LinePlan& line_plan(int n) {
    static std::mutex mu;
    static std::map<int, LinePlan*> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, new LinePlan(n)).first;
    return *it->second;
}

std::mutex line_mu;

// Spectral m-th derivative of one periodic line with period n*h.
void spectral_line_deriv(const cplx* in, cplx* out, int n, double h, int m) {
    LinePlan& lp = line_plan(n);
    std::lock_guard<std::mutex> lock(line_mu);
    std::memcpy(lp.buf, in, std::size_t(n) * sizeof(cplx));
    fftw_execute(lp.fwd);
    auto* hat = reinterpret_cast<cplx*>(lp.buf);
    const double k0 = two_pi / (n * h);
    for (int j = 0; j < n; ++j) {
        const double k = k0 * mode_number(j, n);
        cplx factor = 1;
        for (int q = 0; q < m; ++q) factor *= cplx(0, k);
        hat[j] *= factor / double(n);
    }
    fftw_execute(lp.bwd);
    std::memcpy(static_cast<void*>(out), lp.buf, std::size_t(n) * sizeof(cplx));
}

// Spectral antiderivative (zero at index 0) plus the mean linear term.
void spectral_line_cumint(const cplx* in, cplx* out, int n, double h) {
    LinePlan& lp = line_plan(n);
    std::lock_guard<std::mutex> lock(line_mu);
    std::memcpy(lp.buf, in, std::size_t(n) * sizeof(cplx));
    fftw_execute(lp.fwd);
    auto* hat = reinterpret_cast<cplx*>(lp.buf);
    const double k0 = two_pi / (n * h);
    const cplx mean = hat[0] / double(n);
    hat[0] = 0;
    for (int j = 1; j < n; ++j) {
        const double k = k0 * mode_number(j, n);
        hat[j] /= cplx(0, k) * double(n);
    }
    fftw_execute(lp.bwd);
    const cplx a0 = reinterpret_cast<cplx*>(lp.buf)[0];
    for (int j = 0; j < n; ++j)
        out[j] = mean * (j * h) + reinterpret_cast<cplx*>(lp.buf)[j] - a0;
}

// ---------------------------------------------------------------------
// Finite differences (Fornberg weights), 4th order.

// Weights for the m-th derivative at x0 given nodes xs (unit spacing ok).
std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m) {
    const int n = int(xs.size());
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0, c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0, c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = c[i][m];
    return w;
}

// Cached uniform-grid weights: stencil of npts = m+4 nodes, one row per
// evaluation offset r in [0, npts).
const std::vector<std::vector<double>>& fd_weight_table(int m) {
    static std::mutex mu;
    static std::map<int, std::vector<std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) {
        const int npts = m + 4;
        std::vector<double> xs(npts);
        for (int i = 0; i < npts; ++i) xs[i] = i;
        std::vector<std::vector<double>> rows;
        for (int r = 0; r < npts; ++r) rows.push_back(fd_weights(r, xs, m));
        it = cache.emplace(m, std::move(rows)).first;
    }
    return it->second;
}

void fd_line_deriv(const cplx* in, cplx* out, int n, double h, int m) {
    const int npts = m + 4;
    if (n < npts) throw std::invalid_argument("chart too small for requested derivative order");
    const auto& table = fd_weight_table(m);
    const double scale = 1.0 / std::pow(h, m);
    for (int i = 0; i < n; ++i) {
        const int start = std::clamp(i - (npts - 1) / 2, 0, n - npts);
        const auto& w = table[std::size_t(i - start)];
        cplx acc = 0;
        for (int k = 0; k < npts; ++k) acc += w[std::size_t(k)] * in[start + k];
        out[i] = acc * scale;
    }
}

// ---------------------------------------------------------------------
// Window for open-chart spectral differentiation.

struct Window {
    std::vector<double> w;
    std::vector<double> wd[6];      // d^q w / dx^q at unit spacing, q = 1..5
    int core_lo = 0, core_hi = -1;  // inclusive index range where w ~ 1
    bool usable = false;
};

Window make_window(int n) {
    Window win;
    if (n < 76) return win;  // too small; pure FD
    const double sigma = 4.0;       // in units of h
    const double rise = 5 * sigma;  // center of the erf blend
    win.w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double lo = 0.5 * (1 + std::erf((i - rise) / sigma));
        const double hi = 0.5 * (1 + std::erf(((n - 1 - i) - rise) / sigma));
        win.w[std::size_t(i)] = lo * hi;
    }
    win.core_lo = int(std::ceil(9 * sigma));
    win.core_hi = n - 1 - win.core_lo;
    win.usable = win.core_lo < win.core_hi;
    if (win.usable) {
        // Analytic derivatives of the two erf blends (Hermite-Gaussian
        // closed forms; finite differences are useless on the far tail).
        auto hermite = [](int k, double u) {
            switch (k) {
                case 0: return 1.0;
                case 1: return 2 * u;
                case 2: return 4 * u * u - 2;
                case 3: return 8 * u * u * u - 12 * u;
                default: return 16 * u * u * u * u - 48 * u * u + 12;
            }
        };
        const double inv_sqrt_pi = 0.5641895835477563;
        // blend value and derivatives 0..5 w.r.t. the sample index
        auto blend = [&](double u, double du, std::array<double, 6>& d) {
            d[0] = 0.5 * (1 + std::erf(u));
            const double g = inv_sqrt_pi * std::exp(-u * u);
            double chain = du;
            for (int q = 1; q <= 5; ++q) {
                const double sgn = (q - 1) % 2 == 0 ? 1.0 : -1.0;
                d[std::size_t(q)] = chain * sgn * hermite(q - 1, u) * g;
                chain *= du;
            }
        };
        for (int q = 1; q <= 5; ++q) win.wd[q].resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            std::array<double, 6> lo, hi;
            blend((i - rise) / sigma, 1.0 / sigma, lo);
            blend(((n - 1 - i) - rise) / sigma, -1.0 / sigma, hi);
            for (int q = 1; q <= 5; ++q) {
                double acc = 0, c = 1;
                for (int j = 0; j <= q; ++j) {
                    acc += c * lo[std::size_t(j)] * hi[std::size_t(q - j)];
                    c = c * (q - j) / (j + 1);
                }
                win.wd[q][std::size_t(i)] = acc;
            }
        }
    }
    return win;
}

const Window& window_for(int n) {
    static std::mutex mu;
    static std::map<int, Window> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_window(n)).first;
    return it->second;
}

// Hybrid line derivative for open charts. On the core the spectral result
// differentiates w*f, not f; the deviation
//   d^m(w f) - d^m f = (w - 1) f^(m) + sum_{q>=1} C(m,q) w^(q) f^(m-q)
// is subtracted with w-derivatives from the window table and FD estimates
// of the f-derivatives (the terms carry e^{-16}-scale window factors, so
// 4th-order estimates leave ~1e-9 of them).
void open_line_deriv(const cplx* in, cplx* out, int n, double h, int m) {
    fd_line_deriv(in, out, n, h, m);
    const Window& win = window_for(n);
    if (!win.usable) return;
    std::vector<cplx> windowed(static_cast<std::size_t>(n)), spec(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) windowed[std::size_t(i)] = win.w[std::size_t(i)] * in[i];
    spectral_line_deriv(windowed.data(), spec.data(), n, h, m);

    std::vector<std::vector<cplx>> fd_low(static_cast<std::size_t>(m));  // orders 1..m-1
    for (int q = 1; q < m; ++q) {
        fd_low[std::size_t(q)].resize(static_cast<std::size_t>(n));
        fd_line_deriv(in, fd_low[std::size_t(q)].data(), n, h, q);
    }
    double binom_mq = 1.0;
    std::vector<double> cmq(std::size_t(m) + 1);
    for (int q = 0; q <= m; ++q) {
        cmq[std::size_t(q)] = binom_mq;
        binom_mq = binom_mq * (m - q) / (q + 1);
    }
    const double hinv = 1.0 / h;
    for (int i = win.core_lo; i <= win.core_hi; ++i) {
        cplx corr = (win.w[std::size_t(i)] - 1.0) * out[i];  // out still holds fd^(m)
        double hq = hinv;
        for (int q = 1; q <= m; ++q) {
            const cplx flow = q == m ? in[i] : fd_low[std::size_t(m - q)][std::size_t(i)];
            corr += cmq[std::size_t(q)] * win.wd[q][std::size_t(i)] * hq * flow;
            hq *= hinv;
        }
        out[i] = spec[std::size_t(i)] - corr;
    }
}

// Gregory endpoint corrections on top of the prefix trapezoid sums.
void open_line_cumint(const cplx* in, cplx* out, int n, double h) {
    out[0] = 0;
    for (int i = 1; i < n; ++i) out[i] = out[i - 1] + 0.5 * h * (in[i - 1] + in[i]);
    static const double coef[3] = {-1.0 / 12, 1.0 / 720, -1.0 / 30240};
    double hpow = h * h;
    for (int q = 0; q < 3; ++q) {
        const int m = 2 * q + 1;
        if (n < m + 4) break;
        std::vector<cplx> dm(static_cast<std::size_t>(n));
        open_line_deriv(in, dm.data(), n, h, m);
        for (int i = 1; i < n; ++i) out[i] += coef[q] * hpow * (dm[std::size_t(i)] - dm[0]);
        hpow *= h * h;
    }
}

template <typename LineFn>
ChartField map_lines_x(const ChartField& f, LineFn&& fn) {
    const int n = f.chart.n;
    ChartField out(f.chart);
    std::vector<cplx> line(static_cast<std::size_t>(n)), res(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) line[std::size_t(i)] = f.at(i, j);
        fn(line.data(), res.data(), n);
        for (int i = 0; i < n; ++i) out.at(i, j) = res[std::size_t(i)];
    }
    return out;
}

template <typename LineFn>
ChartField map_lines_y(const ChartField& f, LineFn&& fn) {
    const int n = f.chart.n;
    ChartField out(f.chart);
    std::vector<cplx> res(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const cplx* line = &f.v[std::size_t(i) * n];
        fn(line, res.data(), n);
        for (int j = 0; j < n; ++j) out.at(i, j) = res[std::size_t(j)];
    }
    return out;
}

void check_order(int m) {
    if (m < 1 || m > 5) throw std::invalid_argument("axis derivative order must be in [1, 5]");
}

}  // namespace

ChartField deriv_x(const ChartField& f, int m) {
    check_order(m);
    const double h = f.chart.hx();
    if (f.chart.kind == ChartKind::periodic)
        return map_lines_x(f, [&](const cplx* in, cplx* out, int n) {
            spectral_line_deriv(in, out, n, h, m);
        });
    return map_lines_x(
        f, [&](const cplx* in, cplx* out, int n) { open_line_deriv(in, out, n, h, m); });
}

ChartField deriv_y(const ChartField& f, int m) {
    check_order(m);
    const double h = f.chart.hy();
    if (f.chart.kind == ChartKind::periodic)
        return map_lines_y(f, [&](const cplx* in, cplx* out, int n) {
            spectral_line_deriv(in, out, n, h, m);
        });
    return map_lines_y(
        f, [&](const cplx* in, cplx* out, int n) { open_line_deriv(in, out, n, h, m); });
}

ChartField wirt(const ChartField& f, Dir dir) {
    const ChartField dx = deriv_x(f, 1), dy = deriv_y(f, 1);
    ChartField out(f.chart);
    const cplx iy = dir == Dir::dz ? cplx(0, -0.5) : cplx(0, 0.5);
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = 0.5 * dx.v[i] + iy * dy.v[i];
    return out;
}

ChartField wirt_dd(const ChartField& f) {
    const ChartField dxx = deriv_x(f, 2), dyy = deriv_y(f, 2);
    ChartField out(f.chart);
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = 0.25 * (dxx.v[i] + dyy.v[i]);
    return out;
}

ChartField wirt2(const ChartField& f, Dir dir) {
    const ChartField dxx = deriv_x(f, 2), dyy = deriv_y(f, 2);
    const ChartField dxy = deriv_y(deriv_x(f, 1), 1);
    ChartField out(f.chart);
    const cplx ixy = dir == Dir::dz ? cplx(0, -0.5) : cplx(0, 0.5);
    for (std::size_t i = 0; i < out.v.size(); ++i)
        out.v[i] = 0.25 * (dxx.v[i] - dyy.v[i]) + ixy * dxy.v[i];
    return out;
}

ChartField cumint_x(const ChartField& f) {
    const double h = f.chart.hx();
    if (f.chart.kind == ChartKind::periodic)
        return map_lines_x(f, [&](const cplx* in, cplx* out, int n) {
            spectral_line_cumint(in, out, n, h);
        });
    return map_lines_x(f,
                       [&](const cplx* in, cplx* out, int n) { open_line_cumint(in, out, n, h); });
}

ChartField cumint_y(const ChartField& f) {
    const double h = f.chart.hy();
    if (f.chart.kind == ChartKind::periodic)
        return map_lines_y(f, [&](const cplx* in, cplx* out, int n) {
            spectral_line_cumint(in, out, n, h);
        });
    return map_lines_y(f,
                       [&](const cplx* in, cplx* out, int n) { open_line_cumint(in, out, n, h); });
}

cplx chart_integrate(const ChartField& f, const std::vector<std::uint8_t>* mask) {
    const int n = f.chart.n;
    const double cell = f.chart.hx() * f.chart.hy();
    cplx sum = 0;
    if (mask) {
        if (mask->size() != f.v.size()) throw std::invalid_argument("mask size mismatch");
        for (std::size_t i = 0; i < f.v.size(); ++i)
            if ((*mask)[i]) sum += f.v[i];
        return sum * cell;
    }
    if (f.chart.kind == ChartKind::periodic) {
        for (const cplx& z : f.v) sum += z;
        return sum * cell;
    }
    for (int i = 0; i < n; ++i) {
        const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        for (int j = 0; j < n; ++j) {
            const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            sum += wi * wj * f.at(i, j);
        }
    }
    return sum * cell;
}

ChartField operator+(const ChartField& a, const ChartField& b) {
    if (!(a.chart == b.chart)) throw std::invalid_argument("chart mismatch");
    ChartField out(a.chart);
    for (std::size_t i = 0; i < a.v.size(); ++i) out.v[i] = a.v[i] + b.v[i];
    return out;
}

ChartField operator-(const ChartField& a, const ChartField& b) {
    if (!(a.chart == b.chart)) throw std::invalid_argument("chart mismatch");
    ChartField out(a.chart);
    for (std::size_t i = 0; i < a.v.size(); ++i) out.v[i] = a.v[i] - b.v[i];
    return out;
}

ChartField operator*(cplx s, const ChartField& f) {
    ChartField out(f.chart);
    for (std::size_t i = 0; i < f.v.size(); ++i) out.v[i] = s * f.v[i];
    return out;
}

ChartField pointwise(const ChartField& a, const ChartField& b) {
    if (!(a.chart == b.chart)) throw std::invalid_argument("chart mismatch");
    ChartField out(a.chart);
    for (std::size_t i = 0; i < a.v.size(); ++i) out.v[i] = a.v[i] * b.v[i];
    return out;
}

ChartField conj(const ChartField& f) {
    ChartField out(f.chart);
    for (std::size_t i = 0; i < f.v.size(); ++i) out.v[i] = std::conj(f.v[i]);
    return out;
}

double max_abs(const ChartField& f) {
    double m = 0;
    for (const cplx& z : f.v) m = std::max(m, std::abs(z));
    return m;
}

ChartField continuous_sqrt(const ChartField& f) {
    const int n = f.chart.n;
    ChartField out(f.chart);

    // Quality-guided fill: grow from the largest-|f| sample, always
    // extending to the highest-|f| frontier sample next, so zeros (where
    // the root turns fastest) are assigned last from well-established
    // neighbors. Each sample takes the root nearer the mean of its
    // assigned neighbors; parent-to-child rotations then stay below 90
    // degrees across simple root zeros.
    std::vector<std::uint8_t> assigned(f.v.size(), 0);
    using Entry = std::pair<double, int>;  // (|f|, flat index)
    std::priority_queue<Entry> frontier;
    int seed = 0;
    for (int k = 1; k < int(f.v.size()); ++k)
        if (std::abs(f.v[std::size_t(k)]) > std::abs(f.v[std::size_t(seed)])) seed = k;
    out.v[std::size_t(seed)] = std::sqrt(f.v[std::size_t(seed)]);  // principal root
    assigned[std::size_t(seed)] = 1;
    auto push_neighbors = [&](int idx) {
        const int i = idx / n, j = idx % n;
        const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
        for (int q = 0; q < 4; ++q) {
            const int ii = i + di[q], jj = j + dj[q];
            if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
            const int nb = ii * n + jj;
            if (!assigned[std::size_t(nb)])
                frontier.emplace(std::abs(f.v[std::size_t(nb)]), -nb);
        }
    };
    push_neighbors(seed);
    while (!frontier.empty()) {
        const int idx = -frontier.top().second;
        frontier.pop();
        if (assigned[std::size_t(idx)]) continue;
        const int i = idx / n, j = idx % n;
        cplx ref = 0;
        const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
        for (int q = 0; q < 4; ++q) {
            const int ii = i + di[q], jj = j + dj[q];
            if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
            const int nb = ii * n + jj;
            if (assigned[std::size_t(nb)]) ref += out.v[std::size_t(nb)];
        }
        const cplx w = std::sqrt(f.v[std::size_t(idx)]);
        out.v[std::size_t(idx)] = std::abs(w - ref) <= std::abs(-w - ref) ? w : -w;
        assigned[std::size_t(idx)] = 1;
        push_neighbors(idx);
    }

    // Next to a zero of f the root turns ~90 degrees per sample and the
    // swept references cannot decide the sign; repair isolated bad picks
    // by majority vote of the four neighbors (votes weighted by magnitude,
    // right-angle pairs abstain). A genuine odd-winding zero leaves a
    // seam no pointwise flipping can remove.
    const double gmax = max_abs(out);
    const double zero_gate = 0.05 * gmax;
    auto vote = [&](const cplx& a, const cplx& b) -> double {
        const double w = std::min(std::abs(a), std::abs(b));
        if (w <= zero_gate) return 0;
        const double same = std::abs(a - b), flip = std::abs(a + b);
        if (std::abs(same - flip) <= 1e-6 * (same + flip)) return 0;
        return same < flip ? w : -w;
    };
    for (int pass = 0; pass < 8; ++pass) {
        bool changed = false;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double score = 0;
                if (i > 0) score += vote(out.at(i, j), out.at(i - 1, j));
                if (i + 1 < n) score += vote(out.at(i, j), out.at(i + 1, j));
                if (j > 0) score += vote(out.at(i, j), out.at(i, j - 1));
                if (j + 1 < n) score += vote(out.at(i, j), out.at(i, j + 1));
                if (score < 0) {
                    out.at(i, j) = -out.at(i, j);
                    changed = true;
                }
            }
        if (!changed) break;
    }

    auto inconsistent = [&](const cplx& a, const cplx& b) {
        if (std::min(std::abs(a), std::abs(b)) <= zero_gate) return false;
        return std::abs(a - b) > std::abs(a + b) * (1 + 1e-9);
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i + 1 < n && inconsistent(out.at(i, j), out.at(i + 1, j)))
                throw std::runtime_error("branch discontinuity: no continuous square root");
            if (j + 1 < n && inconsistent(out.at(i, j), out.at(i, j + 1)))
                throw std::runtime_error("branch discontinuity: no continuous square root");
        }
    return out;
}

}  // namespace mvn

// ---------------------------------------------------------------------

namespace mvn {

void write_chart_field(const std::string& path, const ChartField& f, bool as_real) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open " + path + " for writing");
    const Chart& c = f.chart;
    std::fprintf(fp, "# n=%d length=%.17g kind=%s chart=%s xmin=%.17g xmax=%.17g "
                     "ymin=%.17g ymax=%.17g\n",
                 c.n, c.ax1 - c.ax0, as_real ? "real" : "complex",
                 c.kind == ChartKind::periodic ? "periodic" : "open", c.ax0, c.ax1, c.ay0,
                 c.ay1);
    for (const cplx& z : f.v) {
        if (as_real)
            std::fprintf(fp, "%.17g\n", z.real());
        else
            std::fprintf(fp, "%.17g %.17g\n", z.real(), z.imag());
    }
    std::fclose(fp);
}

ChartField read_chart_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string header;
    std::getline(in, header);
    if (header.empty() || header[0] != '#')
        throw std::runtime_error(path + ": missing field header");
    int n = 0;
    double length = 0, x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    bool have_extent = false, periodic = true;
    std::string kind = "complex";
    std::istringstream hs(header.substr(1));
    std::string tok;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "n") n = std::stoi(val);
        else if (key == "length") length = std::stod(val);
        else if (key == "kind") kind = val;
        else if (key == "chart") periodic = val != "open";
        else if (key == "xmin") { x0 = std::stod(val); have_extent = true; }
        else if (key == "xmax") x1 = std::stod(val);
        else if (key == "ymin") y0 = std::stod(val);
        else if (key == "ymax") y1 = std::stod(val);
    }
    if (n <= 0) throw std::runtime_error(path + ": malformed field header");
    Chart c;
    if (periodic)
        c = Chart::periodic(n, length > 0 ? length : two_pi);
    else if (have_extent)
        c = Chart::open(n, x0, x1, y0, y1);
    else
        throw std::runtime_error(path + ": open chart without extent");
    ChartField f(c);
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        double re = 0, im = 0;
        in >> re;
        if (kind == "complex") in >> im;
        if (!in) throw std::runtime_error(path + ": truncated field data");
        f.v[i] = {re, im};
    }
    return f;
}

}  // namespace mvn
