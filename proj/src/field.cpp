#include "mvn/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

namespace mvn {

Grid make_grid(int n, double length) {
    if (n < 8 || n % 2 != 0) throw std::invalid_argument("n must be even >= 8");
    if (!(length > 0)) throw std::invalid_argument("length must be positive");
    return Grid{n, length};
}

// ---------------------------------------------------------------------
// FFT backend: one cached in-place plan pair per grid size.

namespace {

struct PlanPair {
    fftw_complex* buf = nullptr;
    fftw_plan fwd{}, bwd{};
    std::size_t count = 0;

    explicit PlanPair(int n) {
        count = std::size_t(n) * n;
        buf = fftw_alloc_complex(count);
        fwd = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    PlanPair(const PlanPair&) = delete;
    ~PlanPair() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }
};

PlanPair& plans_for(int n) {
    static std::mutex mu;
    static std::map<int, PlanPair*> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, new PlanPair(n)).first;
    return *it->second;
}

std::vector<cplx> run_fft(const Grid& g, const std::vector<cplx>& in, bool forward) {
    PlanPair& p = plans_for(g.n);
    static std::mutex mu;  // plans share their buffer
    std::lock_guard<std::mutex> lock(mu);
    std::memcpy(p.buf, in.data(), p.count * sizeof(cplx));
    fftw_execute(forward ? p.fwd : p.bwd);
    std::vector<cplx> out(p.count);
    std::memcpy(static_cast<void*>(out.data()), p.buf, p.count * sizeof(cplx));
    if (!forward) {
        const double s = 1.0 / double(p.count);
        for (auto& z : out) z *= s;
    }
    return out;
}

void check_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw std::invalid_argument("grid mismatch");
}

}  // namespace

std::vector<cplx> fft2(const Grid& g, const std::vector<cplx>& in) { return run_fft(g, in, true); }
std::vector<cplx> ifft2(const Grid& g, const std::vector<cplx>& in) { return run_fft(g, in, false); }

ComplexField wirtinger(const ComplexField& f, Dir dir, int order) {
    if (order < 1 || order > 8) throw std::invalid_argument("derivative order must be in [1, 8]");
    const int n = f.grid.n;
    const double k0 = two_pi / f.grid.length;
    auto hat = fft2(f.grid, f.v);
    for (int jx = 0; jx < n; ++jx) {
        const double kx = k0 * mode_number(jx, n);
        for (int jy = 0; jy < n; ++jy) {
            const double ky = k0 * mode_number(jy, n);
            const cplx sigma = dir == Dir::dz ? cplx(ky / 2, kx / 2) : cplx(-ky / 2, kx / 2);
            cplx factor = 1;
            for (int m = 0; m < order; ++m) factor *= sigma;
            hat[std::size_t(jx) * n + jy] *= factor;
        }
    }
    ComplexField out(f.grid);
    out.v = ifft2(f.grid, hat);
    return out;
}

ComplexField dbar_inverse(const ComplexField& f, double tol_mean_factor) {
    const int n = f.grid.n;
    const double k0 = two_pi / f.grid.length;
    auto hat = fft2(f.grid, f.v);
    const double mean_abs = std::abs(hat[0]) / f.grid.size();
    if (mean_abs > tol_mean_factor * std::max(max_abs(f), 1e-300))
        throw std::runtime_error("gauge obstruction: dbar_inverse of field with nonzero mean");
    hat[0] = 0;  // zero-mean gauge
    for (int jx = 0; jx < n; ++jx) {
        const double kx = k0 * mode_number(jx, n);
        for (int jy = 0; jy < n; ++jy) {
            if (jx == 0 && jy == 0) continue;
            const double ky = k0 * mode_number(jy, n);
            hat[std::size_t(jx) * n + jy] /= cplx(-ky / 2, kx / 2);
        }
    }
    ComplexField out(f.grid);
    out.v = ifft2(f.grid, hat);
    return out;
}

ComplexField product(const ComplexField& f, const ComplexField& g, bool dealias) {
    check_same_grid(f.grid, g.grid);
    ComplexField out(f.grid);
    for (std::size_t i = 0; i < f.v.size(); ++i) out.v[i] = f.v[i] * g.v[i];
    if (!dealias) return out;
    const int n = f.grid.n;
    const int kcut = n / 3;
    auto hat = fft2(f.grid, out.v);
    for (int jx = 0; jx < n; ++jx)
        for (int jy = 0; jy < n; ++jy)
            if (std::abs(mode_number(jx, n)) > kcut || std::abs(mode_number(jy, n)) > kcut)
                hat[std::size_t(jx) * n + jy] = 0;
    out.v = ifft2(f.grid, hat);
    return out;
}

cplx integrate(const ComplexField& f) {
    cplx sum = 0;
    for (const cplx& z : f.v) sum += z;
    return sum / double(f.grid.size()) * f.grid.length * f.grid.length;
}

double integrate(const RealField& f) {
    double sum = 0;
    for (double x : f.v) sum += x;
    return sum / double(f.grid.size()) * f.grid.length * f.grid.length;
}

ComplexField to_complex(const RealField& f) {
    ComplexField out(f.grid);
    for (std::size_t i = 0; i < f.v.size(); ++i) out.v[i] = f.v[i];
    return out;
}

RealField real_part(const ComplexField& f, double* discarded_imag) {
    RealField out(f.grid);
    double worst = 0;
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        out.v[i] = f.v[i].real();
        worst = std::max(worst, std::abs(f.v[i].imag()));
    }
    if (discarded_imag) *discarded_imag = worst;
    return out;
}

double max_abs(const ComplexField& f) {
    double m = 0;
    for (const cplx& z : f.v) m = std::max(m, std::abs(z));
    return m;
}

double max_abs(const RealField& f) {
    double m = 0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

bool all_finite(const ComplexField& f) {
    for (const cplx& z : f.v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

bool all_finite(const RealField& f) {
    for (double x : f.v)
        if (!std::isfinite(x)) return false;
    return true;
}

ComplexField operator+(const ComplexField& a, const ComplexField& b) {
    check_same_grid(a.grid, b.grid);
    ComplexField out(a.grid);
    for (std::size_t i = 0; i < a.v.size(); ++i) out.v[i] = a.v[i] + b.v[i];
    return out;
}

ComplexField operator-(const ComplexField& a, const ComplexField& b) {
    check_same_grid(a.grid, b.grid);
    ComplexField out(a.grid);
    for (std::size_t i = 0; i < a.v.size(); ++i) out.v[i] = a.v[i] - b.v[i];
    return out;
}

ComplexField operator*(cplx s, const ComplexField& f) {
    ComplexField out(f.grid);
    for (std::size_t i = 0; i < f.v.size(); ++i) out.v[i] = s * f.v[i];
    return out;
}

ComplexField conj(const ComplexField& f) {
    ComplexField out(f.grid);
    for (std::size_t i = 0; i < f.v.size(); ++i) out.v[i] = std::conj(f.v[i]);
    return out;
}

}  // namespace mvn
