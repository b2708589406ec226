#include "mvn/diffop.hpp"

#include <vector>

namespace mvn {

bool Mat2::is_zero() const {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!e[i][j].is_zero()) return false;
    return true;
}

Mat2 Mat2::identity() { return diag(DiffPoly::constant(1), DiffPoly::constant(1)); }

Mat2 Mat2::diag(const DiffPoly& d0, const DiffPoly& d1) {
    Mat2 m;
    m(0, 0) = d0;
    m(1, 1) = d1;
    return m;
}

Mat2 operator+(const Mat2& a, const Mat2& b) {
    Mat2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = a(i, j) + b(i, j);
    return out;
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return out;
}

Mat2 operator*(const Rational& c, const Mat2& a) {
    Mat2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = c * a(i, j);
    return out;
}

Mat2 deriv(const Mat2& m, FDir dir, int order) {
    Mat2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = deriv(m(i, j), dir, order);
    return out;
}

Mat2 conj_formal(const Mat2& m) {
    Mat2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = conj_formal(m(i, j));
    return out;
}

MatrixOperator MatrixOperator::term(const Mat2& m, int a, int b) {
    MatrixOperator op;
    op.add_term(m, a, b);
    return op;
}

MatrixOperator MatrixOperator::identity_shift(int a, int b) {
    return term(Mat2::identity(), a, b);
}

std::size_t MatrixOperator::term_count() const {
    std::size_t count = 0;
    for (const auto& [key, m] : terms_)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) count += m(i, j).term_count();
    return count;
}

const Mat2* MatrixOperator::coeff(int a, int b) const {
    auto it = terms_.find({a, b});
    return it == terms_.end() ? nullptr : &it->second;
}

void MatrixOperator::add_term(const Mat2& m, int a, int b) {
    auto [it, fresh] = terms_.emplace(Key{a, b}, m);
    if (!fresh) it->second = it->second + m;
    if (it->second.is_zero()) terms_.erase(it);
}

void MatrixOperator::set_entry(int a, int b, int i, int j, const DiffPoly& v) {
    Mat2 m = coeff(a, b) ? *coeff(a, b) : Mat2{};
    m(i, j) = v;
    terms_.erase({a, b});
    if (!m.is_zero()) terms_.emplace(Key{a, b}, m);
}

MatrixOperator operator+(const MatrixOperator& a, const MatrixOperator& b) {
    MatrixOperator out = a;
    for (const auto& [key, m] : b.terms()) out.add_term(m, key.first, key.second);
    return out;
}

MatrixOperator operator-(const MatrixOperator& a, const MatrixOperator& b) {
    MatrixOperator out = a;
    for (const auto& [key, m] : b.terms()) out.add_term(Rational(-1) * m, key.first, key.second);
    return out;
}

MatrixOperator operator-(const MatrixOperator& a) { return MatrixOperator::zero() - a; }

namespace {

Rational binom(int n, int k) {
    Rational r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace

MatrixOperator compose(const MatrixOperator& a, const MatrixOperator& b) {
    MatrixOperator out;
    for (const auto& [ka, ma] : a.terms()) {
        const auto [ord_a, ord_b] = ka;
        for (const auto& [kb, mb] : b.terms()) {
            const auto [ord_c, ord_d] = kb;
            // db^j of the right coefficient, computed incrementally.
            Mat2 mb_j = mb;
            for (int j = 0; j <= ord_b; ++j) {
                if (j > 0) mb_j = deriv(mb_j, FDir::dzbar, 1);
                Mat2 mb_ij = mb_j;
                for (int i = 0; i <= ord_a; ++i) {
                    if (i > 0) mb_ij = deriv(mb_ij, FDir::dz, 1);
                    const Rational c = binom(ord_a, i) * binom(ord_b, j);
                    out.add_term(c * (ma * mb_ij), ord_a - i + ord_c, ord_b - j + ord_d);
                }
            }
        }
    }
    return out;
}

MatrixOperator commutator(const MatrixOperator& a, const MatrixOperator& b) {
    return compose(a, b) - compose(b, a);
}

MatrixOperator conj_transform(const MatrixOperator& a) {
    MatrixOperator out;
    for (const auto& [key, m] : a.terms()) {
        const Mat2 c = conj_formal(m);
        Mat2 s;  // J c J^{-1}
        s(0, 0) = c(1, 1);
        s(0, 1) = -c(1, 0);
        s(1, 0) = -c(0, 1);
        s(1, 1) = c(0, 0);
        out.add_term(s, key.second, key.first);
    }
    return out;
}

std::array<DiffPoly, 2> apply(const MatrixOperator& a, const std::array<DiffPoly, 2>& v) {
    std::array<DiffPoly, 2> out;
    for (const auto& [key, m] : a.terms()) {
        std::array<DiffPoly, 2> dv;
        for (int j = 0; j < 2; ++j) dv[j] = deriv(deriv(v[j], FDir::dz, key.first), FDir::dzbar, key.second);
        for (int i = 0; i < 2; ++i) out[i] = out[i] + m(i, 0) * dv[0] + m(i, 1) * dv[1];
    }
    return out;
}

std::string MatrixOperator::str() const {
    if (terms_.empty()) return "0";
    // Leading derivative orders first: descending (a, b).
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto [a, b] = it->first;
        const Mat2& m = it->second;
        if (!out.empty()) out += " + ";
        out += "[[" + m(0, 0).str() + ", " + m(0, 1).str() + "], [" + m(1, 0).str() + ", " +
               m(1, 1).str() + "]]";
        if (a > 0) out += "*D" + (a > 1 ? "^" + std::to_string(a) : "");
        if (b > 0) out += "*Db" + (b > 1 ? "^" + std::to_string(b) : "");
    }
    return out;
}

}  // namespace mvn
