#include "mvn/diffpoly.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>

namespace mvn {

const char* gen_name(Gen g) {
    switch (g) {
        case Gen::p: return "p";
        case Gen::w: return "w";
        case Gen::zt: return "zt";
        case Gen::wb: return "wb";
        case Gen::ztb: return "ztb";
    }
    return "?";
}

namespace {

bool canonical(const DerivSymbol& s) {
    if (s.a < 0 || s.b < 0) return false;
    if ((s.gen == Gen::w || s.gen == Gen::zt) && s.b != 0) return false;
    if ((s.gen == Gen::wb || s.gen == Gen::ztb) && s.a != 0) return false;
    return true;
}

// Accumulator keyed by sorted factor lists; flattened to a DiffPoly at the end.
struct Acc {
    std::map<std::vector<DerivSymbol>, Rational> terms;

    void add(const Rational& c, std::vector<DerivSymbol> f) {
        if (c == 0) return;
        std::sort(f.begin(), f.end());
        auto [it, fresh] = terms.emplace(std::move(f), c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }
    void add(const Rational& scale, const Monomial& m) { add(scale * m.coeff, m.factors); }
    void add_poly(const Rational& scale, const DiffPoly& p) {
        for (const Monomial& m : p.monomials()) add(scale, m);
    }
};

DiffPoly flatten(Acc&& acc) {
    DiffPoly out;
    for (auto& [f, c] : acc.terms) out.add_term(c, f);
    return out;
}

}  // namespace

DiffPoly DiffPoly::constant(const Rational& c) {
    DiffPoly out;
    out.add_term(c, {});
    return out;
}

DiffPoly DiffPoly::generator(Gen g) { return symbol(g, 0, 0); }

DiffPoly DiffPoly::symbol(Gen g, int a, int b) {
    DerivSymbol s{g, a, b};
    if (!canonical(s)) throw std::invalid_argument("non-canonical derivative symbol");
    DiffPoly out;
    out.add_term(1, {s});
    return out;
}

Rational DiffPoly::coeff_of(const std::vector<DerivSymbol>& factors) const {
    std::vector<DerivSymbol> key = factors;
    std::sort(key.begin(), key.end());
    for (const Monomial& m : mono_)
        if (m.factors == key) return m.coeff;
    return 0;
}

void DiffPoly::add_term(const Rational& c, std::vector<DerivSymbol> factors) {
    if (c == 0) return;
    std::sort(factors.begin(), factors.end());
    auto pos = std::lower_bound(mono_.begin(), mono_.end(), factors,
                                [](const Monomial& m, const std::vector<DerivSymbol>& f) {
                                    return m.factors < f;
                                });
    if (pos != mono_.end() && pos->factors == factors) {
        pos->coeff += c;
        if (pos->coeff == 0) mono_.erase(pos);
    } else {
        mono_.insert(pos, Monomial{c, std::move(factors)});
    }
}

DiffPoly operator+(const DiffPoly& a, const DiffPoly& b) {
    Acc acc;
    acc.add_poly(1, a);
    acc.add_poly(1, b);
    return flatten(std::move(acc));
}

DiffPoly operator-(const DiffPoly& a, const DiffPoly& b) {
    Acc acc;
    acc.add_poly(1, a);
    acc.add_poly(-1, b);
    return flatten(std::move(acc));
}

DiffPoly operator-(const DiffPoly& a) { return Rational(-1) * a; }

DiffPoly operator*(const Rational& c, const DiffPoly& a) {
    Acc acc;
    acc.add_poly(c, a);
    return flatten(std::move(acc));
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
    Acc acc;
    for (const Monomial& ma : a.monomials())
        for (const Monomial& mb : b.monomials()) {
            std::vector<DerivSymbol> f;
            f.reserve(ma.factors.size() + mb.factors.size());
            f.insert(f.end(), ma.factors.begin(), ma.factors.end());
            f.insert(f.end(), mb.factors.begin(), mb.factors.end());
            acc.add(ma.coeff * mb.coeff, std::move(f));
        }
    return flatten(std::move(acc));
}

namespace {

DiffPoly sym(Gen g, int a, int b) { return DiffPoly::symbol(g, a, b); }

// Rewrite images for the forbidden first derivatives.
const DiffPoly& rw_db_w() {  // db w = 2 p (d p)
    static const DiffPoly r = Rational(2) * (sym(Gen::p, 0, 0) * sym(Gen::p, 1, 0));
    return r;
}
const DiffPoly& rw_db_zt() {  // db zt = 2 p w (d p) + p^2 (d w) - 2 (d p)(d^2 p)
    static const DiffPoly r =
        Rational(2) * (sym(Gen::p, 0, 0) * sym(Gen::w, 0, 0) * sym(Gen::p, 1, 0)) +
        sym(Gen::p, 0, 0) * sym(Gen::p, 0, 0) * sym(Gen::w, 1, 0) -
        Rational(2) * (sym(Gen::p, 1, 0) * sym(Gen::p, 2, 0));
    return r;
}
const DiffPoly& rw_d_wb() {  // d wb = 2 p (db p)
    static const DiffPoly r = Rational(2) * (sym(Gen::p, 0, 0) * sym(Gen::p, 0, 1));
    return r;
}
const DiffPoly& rw_d_ztb() {  // d ztb = 2 p wb (db p) + p^2 (db wb) - 2 (db p)(db^2 p)
    static const DiffPoly r =
        Rational(2) * (sym(Gen::p, 0, 0) * sym(Gen::wb, 0, 0) * sym(Gen::p, 0, 1)) +
        sym(Gen::p, 0, 0) * sym(Gen::p, 0, 0) * sym(Gen::wb, 0, 1) -
        Rational(2) * (sym(Gen::p, 0, 1) * sym(Gen::p, 0, 2));
    return r;
}

// First derivative of a single symbol; may expand through a rewrite.
DiffPoly d_symbol(const DerivSymbol& s, FDir dir) {
    if (dir == FDir::dz) {
        switch (s.gen) {
            case Gen::p: return sym(Gen::p, s.a + 1, s.b);
            case Gen::w: return sym(Gen::w, s.a + 1, 0);
            case Gen::zt: return sym(Gen::zt, s.a + 1, 0);
            // d db^b wb = db^b (d wb); the image holds only p/wb symbols.
            case Gen::wb: return deriv(rw_d_wb(), FDir::dzbar, s.b);
            case Gen::ztb: return deriv(rw_d_ztb(), FDir::dzbar, s.b);
        }
    } else {
        switch (s.gen) {
            case Gen::p: return sym(Gen::p, s.a, s.b + 1);
            case Gen::wb: return sym(Gen::wb, 0, s.b + 1);
            case Gen::ztb: return sym(Gen::ztb, 0, s.b + 1);
            case Gen::w: return deriv(rw_db_w(), FDir::dz, s.a);
            case Gen::zt: return deriv(rw_db_zt(), FDir::dz, s.a);
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

DiffPoly deriv(const DiffPoly& a, FDir dir, int order) {
    if (order < 0) throw std::invalid_argument("negative derivative order");
    DiffPoly cur = a;
    for (int pass = 0; pass < order; ++pass) {
        Acc acc;
        for (const Monomial& m : cur.monomials()) {
            for (std::size_t k = 0; k < m.factors.size(); ++k) {
                DiffPoly dk = d_symbol(m.factors[k], dir);
                std::vector<DerivSymbol> rest;
                rest.reserve(m.factors.size() - 1);
                for (std::size_t j = 0; j < m.factors.size(); ++j)
                    if (j != k) rest.push_back(m.factors[j]);
                for (const Monomial& md : dk.monomials()) {
                    std::vector<DerivSymbol> f = rest;
                    f.insert(f.end(), md.factors.begin(), md.factors.end());
                    acc.add(m.coeff * md.coeff, std::move(f));
                }
            }
        }
        cur = flatten(std::move(acc));
    }
    return cur;
}

DiffPoly conj_formal(const DiffPoly& a) {
    Acc acc;
    for (const Monomial& m : a.monomials()) {
        std::vector<DerivSymbol> f;
        f.reserve(m.factors.size());
        for (const DerivSymbol& s : m.factors) {
            switch (s.gen) {
                case Gen::p: f.push_back({Gen::p, s.b, s.a}); break;
                case Gen::w: f.push_back({Gen::wb, 0, s.a}); break;
                case Gen::zt: f.push_back({Gen::ztb, 0, s.a}); break;
                case Gen::wb: f.push_back({Gen::w, s.b, 0}); break;
                case Gen::ztb: f.push_back({Gen::zt, s.b, 0}); break;
            }
        }
        acc.add(m.coeff, std::move(f));
    }
    return flatten(std::move(acc));
}

// --- canonical printing (re-parseable by the expression grammar) -------

std::string rational_str(const Rational& r) { return r.str(); }

namespace {

std::string symbol_str(const DerivSymbol& s) {
    std::string base = gen_name(s.gen);
    if (s.b > 0) base = "db(" + base + (s.b > 1 ? "," + std::to_string(s.b) : "") + ")";
    if (s.a > 0) base = "d(" + base + (s.a > 1 ? "," + std::to_string(s.a) : "") + ")";
    return base;
}

std::string monomial_body(const Monomial& m) {
    Rational c = m.coeff < 0 ? Rational(-m.coeff) : m.coeff;
    std::string out;
    if (m.factors.empty() || c != 1) out = rational_str(c);
    for (const DerivSymbol& s : m.factors) {
        if (!out.empty()) out += "*";
        out += symbol_str(s);
    }
    return out;
}

}  // namespace

std::string DiffPoly::str() const {
    if (mono_.empty()) return "0";
    // Leading (highest-order) terms first.
    std::vector<const Monomial*> order;
    order.reserve(mono_.size());
    for (const Monomial& m : mono_) order.push_back(&m);
    std::reverse(order.begin(), order.end());
    std::string out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const bool neg = order[i]->coeff < 0;
        if (i == 0)
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        out += monomial_body(*order[i]);
    }
    return out;
}

}  // namespace mvn
