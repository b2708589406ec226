#pragma once

// Exact differential-polynomial algebra over the generators
//   p, w (omega), zt (zeta), wb (omega-bar), ztb (zeta-bar)
// with rational coefficients and formal Wirtinger derivatives d = del,
// db = dbar.
//
// Normal form: dbar never acts on w or zt, and del never acts on wb or
// ztb. The offending derivatives are eliminated on construction by the
// nonlocal constraint rewrites
//   db w   -> 2 p (d p)                        [dbar omega = del p^2]
//   db zt  -> 2 p w (d p) + p^2 (d w) - 2 (d p)(d^2 p)
//   d  wb  -> 2 p (db p)
//   d  ztb -> 2 p wb (db p) + p^2 (db wb) - 2 (db p)(db^2 p)
// applied under further differentiation. p is real-valued, so formal
// conjugation fixes it and swaps w <-> wb, zt <-> ztb, d <-> db.
// The zero polynomial is the unique representative of an identity.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace mvn {

using Rational = boost::multiprecision::cpp_rational;

enum class Gen : std::uint8_t { p = 0, w, zt, wb, ztb };

const char* gen_name(Gen g);

struct DerivSymbol {
    Gen gen{};
    int a = 0;  // del-order
    int b = 0;  // dbar-order
    friend auto operator<=>(const DerivSymbol&, const DerivSymbol&) = default;
};

struct Monomial {
    Rational coeff;
    std::vector<DerivSymbol> factors;  // sorted ascending by (gen, a, b)

    friend bool operator==(const Monomial& x, const Monomial& y) {
        return x.coeff == y.coeff && x.factors == y.factors;
    }
};

enum class FDir { dz, dzbar };

class DiffPoly {
  public:
    DiffPoly() = default;

    static DiffPoly zero() { return {}; }
    static DiffPoly constant(const Rational& c);
    static DiffPoly generator(Gen g);
    // Canonical symbol only: asserts b == 0 for w/zt and a == 0 for wb/ztb.
    static DiffPoly symbol(Gen g, int a, int b);

    const std::vector<Monomial>& monomials() const { return mono_; }
    bool is_zero() const { return mono_.empty(); }
    std::size_t term_count() const { return mono_.size(); }
    Rational coeff_of(const std::vector<DerivSymbol>& factors) const;

    // Adds c * factors (factors need not be sorted) and re-normalizes.
    void add_term(const Rational& c, std::vector<DerivSymbol> factors);

    bool operator==(const DiffPoly& o) const { return mono_ == o.mono_; }

    std::string str() const;

  private:
    std::vector<Monomial> mono_;
    friend DiffPoly operator+(const DiffPoly&, const DiffPoly&);
    friend DiffPoly operator-(const DiffPoly&, const DiffPoly&);
    friend DiffPoly operator*(const DiffPoly&, const DiffPoly&);
    friend DiffPoly operator*(const Rational&, const DiffPoly&);
    friend DiffPoly operator-(const DiffPoly&);
    friend DiffPoly deriv(const DiffPoly&, FDir, int);
    friend DiffPoly conj_formal(const DiffPoly&);
};

DiffPoly operator+(const DiffPoly& a, const DiffPoly& b);
DiffPoly operator-(const DiffPoly& a, const DiffPoly& b);
DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
DiffPoly operator*(const Rational& c, const DiffPoly& a);
DiffPoly operator-(const DiffPoly& a);

// d^order (dz) or db^order (dzbar), rewriting forbidden derivatives.
DiffPoly deriv(const DiffPoly& a, FDir dir, int order = 1);

// Formal conjugation: p(a,b) -> p(b,a), w <-> wb, zt <-> ztb; rationals fixed.
DiffPoly conj_formal(const DiffPoly& a);

std::string rational_str(const Rational& r);

}  // namespace mvn
