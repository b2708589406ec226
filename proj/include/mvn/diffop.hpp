#pragma once

// 2x2 matrix differential operators: finite sums  sum_{a,b} M_{ab} D^a Db^b
// with DiffPoly matrix coefficients acting by multiplication from the left.

#include <array>
#include <map>
#include <string>
#include <utility>

#include "mvn/diffpoly.hpp"

namespace mvn {

struct Mat2 {
    std::array<std::array<DiffPoly, 2>, 2> e{};

    DiffPoly& operator()(int i, int j) { return e[i][j]; }
    const DiffPoly& operator()(int i, int j) const { return e[i][j]; }
    bool is_zero() const;
    bool operator==(const Mat2&) const = default;

    static Mat2 identity();
    static Mat2 diag(const DiffPoly& d0, const DiffPoly& d1);
};

Mat2 operator+(const Mat2& a, const Mat2& b);
Mat2 operator*(const Mat2& a, const Mat2& b);  // entrywise DiffPoly products
Mat2 operator*(const Rational& c, const Mat2& a);
Mat2 deriv(const Mat2& m, FDir dir, int order = 1);
Mat2 conj_formal(const Mat2& m);

class MatrixOperator {
  public:
    using Key = std::pair<int, int>;  // (a: D-order, b: Db-order)

    MatrixOperator() = default;
    static MatrixOperator zero() { return {}; }
    // M * D^a * Db^b
    static MatrixOperator term(const Mat2& m, int a = 0, int b = 0);
    static MatrixOperator identity_shift(int a, int b);

    const std::map<Key, Mat2>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const;  // total nonzero DiffPoly monomials
    const Mat2* coeff(int a, int b) const;

    void add_term(const Mat2& m, int a, int b);
    // Replaces one matrix entry of the coefficient at (a, b).
    void set_entry(int a, int b, int i, int j, const DiffPoly& v);

    bool operator==(const MatrixOperator&) const = default;

    std::string str() const;

  private:
    std::map<Key, Mat2> terms_;  // no all-zero matrices stored
};

MatrixOperator operator+(const MatrixOperator& a, const MatrixOperator& b);
MatrixOperator operator-(const MatrixOperator& a, const MatrixOperator& b);
MatrixOperator operator-(const MatrixOperator& a);

// Operator product by the generalized Leibniz rule
//   (F D^a Db^b)(G D^c Db^d) =
//     sum_{i<=a, j<=b} C(a,i) C(b,j) F (d^i db^j G) D^{a-i+c} Db^{b-j+d}.
MatrixOperator compose(const MatrixOperator& a, const MatrixOperator& b);
MatrixOperator commutator(const MatrixOperator& a, const MatrixOperator& b);

// J conj(A) J^{-1} with J = [[0,-1],[1,0]]; conjugation swaps D <-> Db
// and w <-> wb, zt <-> ztb, fixes p and rational coefficients.
MatrixOperator conj_transform(const MatrixOperator& a);

// Apply to a column of differential polynomials (for spot checks).
std::array<DiffPoly, 2> apply(const MatrixOperator& a, const std::array<DiffPoly, 2>& v);

}  // namespace mvn
