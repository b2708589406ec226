#pragma once

// Periodic-grid complex/real fields with spectral (FFT) calculus.
//
// Conventions used throughout:
//   z = x + iy,  del = (d/dx - i d/dy)/2,  dbar = (d/dx + i d/dy)/2.
// On the mode e^{i(kx*x + ky*y)} these act as multiplication by
//   sigma_del  = (i*kx + ky)/2,   sigma_dbar = (i*kx - ky)/2.
// Integrals ( ∫ f dz dzbar in the operator identities ) are taken with the
// Lebesgue measure dx dy: integrate(f) = mean(f) * length^2.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvn {

using cplx = std::complex<double>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

struct Grid {
    int n = 0;          // samples per axis, even, >= 8
    double length = 0;  // physical period per axis

    double spacing() const { return length / n; }
    std::size_t size() const { return std::size_t(n) * std::size_t(n); }
    double x(int j) const { return j * spacing(); }
    double y(int k) const { return k * spacing(); }
    bool operator==(const Grid&) const = default;
};

Grid make_grid(int n, double length = two_pi);

// Row-major over (x, y): index = ix*n + iy.
struct ComplexField {
    Grid grid;
    std::vector<cplx> v;

    ComplexField() = default;
    explicit ComplexField(const Grid& g, cplx fill = {}) : grid(g), v(g.size(), fill) {}
    cplx& at(int ix, int iy) { return v[std::size_t(ix) * grid.n + iy]; }
    const cplx& at(int ix, int iy) const { return v[std::size_t(ix) * grid.n + iy]; }
};

struct RealField {
    Grid grid;
    std::vector<double> v;

    RealField() = default;
    explicit RealField(const Grid& g, double fill = 0) : grid(g), v(g.size(), fill) {}
    double& at(int ix, int iy) { return v[std::size_t(ix) * grid.n + iy]; }
    const double& at(int ix, int iy) const { return v[std::size_t(ix) * grid.n + iy]; }
};

enum class Dir { dz, dzbar };

// Spectral derivative del^order or dbar^order. order in [1, 8].
ComplexField wirtinger(const ComplexField& f, Dir dir, int order = 1);

// Unique zero-mean g with dbar g = f. Throws "gauge obstruction" if the
// k = 0 mode of f exceeds tol_mean = tol_mean_factor * max|f|.
ComplexField dbar_inverse(const ComplexField& f, double tol_mean_factor = 1e-12);

// Pointwise product; optional 2/3-rule truncation of the result
// (modes with |k_x| or |k_y| above floor(n/3) are zeroed).
ComplexField product(const ComplexField& f, const ComplexField& g, bool dealias);

cplx integrate(const ComplexField& f);
double integrate(const RealField& f);

ComplexField to_complex(const RealField& f);
// Real part; if report != nullptr, stores max|Im f|.
RealField real_part(const ComplexField& f, double* discarded_imag = nullptr);

double max_abs(const ComplexField& f);
double max_abs(const RealField& f);
bool all_finite(const ComplexField& f);
bool all_finite(const RealField& f);

ComplexField operator+(const ComplexField& a, const ComplexField& b);
ComplexField operator-(const ComplexField& a, const ComplexField& b);
ComplexField operator*(cplx s, const ComplexField& f);
ComplexField conj(const ComplexField& f);

// Forward/backward 2-d FFT (unnormalized forward; backward divides by n^2).
std::vector<cplx> fft2(const Grid& g, const std::vector<cplx>& in);
std::vector<cplx> ifft2(const Grid& g, const std::vector<cplx>& in);

// Signed mode number for row j: j <= n/2 ? j : j - n.
inline int mode_number(int j, int n) { return j <= n / 2 ? j : j - n; }

// --- field text format ------------------------------------------------
// line 1:  # n=<n> length=<float> kind=<real|complex> [key=value ...]
// then n^2 lines, row-major: "re" or "re im", >= 15 significant digits.

void write_field(const std::string& path, const ComplexField& f);
void write_field(const std::string& path, const RealField& f);
ComplexField read_complex_field(const std::string& path);
RealField read_real_field(const std::string& path);

}  // namespace mvn
