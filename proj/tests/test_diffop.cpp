#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mvn/grideval.hpp"
#include "mvn/parse.hpp"
#include "mvn/verify.hpp"

using namespace mvn;

namespace {

DiffPoly sym(Gen g, int a = 0, int b = 0) { return DiffPoly::symbol(g, a, b); }

// Random canonical polynomial: a few monomials over low-order symbols.
DiffPoly random_poly(std::mt19937_64& rng, int max_monomials = 3, int max_factors = 2) {
    std::uniform_int_distribution<int> gen_pick(0, 4), ord(0, 2), den(1, 3), num(-4, 4);
    DiffPoly out;
    const int m = 1 + int(rng() % std::uint64_t(max_monomials));
    for (int t = 0; t < m; ++t) {
        std::vector<DerivSymbol> factors;
        const int nf = int(rng() % std::uint64_t(max_factors + 1));
        for (int f = 0; f < nf; ++f) {
            const Gen g = Gen(gen_pick(rng));
            int a = ord(rng), b = ord(rng);
            if (g == Gen::w || g == Gen::zt) b = 0;
            if (g == Gen::wb || g == Gen::ztb) a = 0;
            factors.push_back({g, a, b});
        }
        const int n = num(rng);
        if (n != 0) out.add_term(Rational(n) / den(rng), factors);
    }
    return out;
}

MatrixOperator random_operator(std::mt19937_64& rng) {
    MatrixOperator op;
    const int terms = 1 + int(rng() % 2);
    for (int t = 0; t < terms; ++t) {
        Mat2 m;
        m(int(rng() % 2), int(rng() % 2)) = random_poly(rng, 2, 1);
        op.add_term(m, int(rng() % 3), int(rng() % 2));
    }
    return op;
}

}  // namespace

TEST_CASE("parser accepts the flow expressions") {
    const DiffPoly flow1 = parse_poly("d(p,3) + 3*w*d(p) + 3/2*p*d(w)");
    DiffPoly expect = deriv(sym(Gen::p), FDir::dz, 3) +
                      Rational(3) * (sym(Gen::w) * sym(Gen::p, 1, 0)) +
                      Rational(3, 2) * (sym(Gen::p) * sym(Gen::w, 1, 0));
    CHECK(flow1 == expect);
    CHECK(flow1.str() == "d(p,3) + 3*d(p)*w + 3/2*p*d(w)");
}

TEST_CASE("nonlocal rewrites") {
    // db w = 2 p (d p)
    CHECK(parse_poly("db(w)") == Rational(2) * (sym(Gen::p) * sym(Gen::p, 1, 0)));
    // db^2 w = 2 (db p)(d p) + 2 p (d db p)
    const DiffPoly db2w = deriv(sym(Gen::w), FDir::dzbar, 2);
    const DiffPoly expect = Rational(2) * (sym(Gen::p, 0, 1) * sym(Gen::p, 1, 0)) +
                            Rational(2) * (sym(Gen::p) * sym(Gen::p, 1, 1));
    CHECK(db2w == expect);
    // db zt = 2 p w (d p) + p^2 (d w) - 2 (d p)(d^2 p)
    const DiffPoly dbzt = deriv(sym(Gen::zt), FDir::dzbar, 1);
    const DiffPoly expect_zt =
        Rational(2) * (sym(Gen::p) * sym(Gen::w) * sym(Gen::p, 1, 0)) +
        sym(Gen::p) * sym(Gen::p) * sym(Gen::w, 1, 0) -
        Rational(2) * (sym(Gen::p, 1, 0) * sym(Gen::p, 2, 0));
    CHECK(dbzt == expect_zt);
    // conjugate rule: d wb = 2 p (db p)
    CHECK(deriv(sym(Gen::wb), FDir::dz, 1) ==
          Rational(2) * (sym(Gen::p) * sym(Gen::p, 0, 1)));
}

TEST_CASE("parser errors carry positions") {
    try {
        parse("d(p");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.pos == 3);
    }
    try {
        parse("3 + q");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.pos == 4);
    }
    // matrix where a scalar is expected
    CHECK_THROWS_AS(parse("d([[p, 0], [0, p]])"), ParseError);
    CHECK_THROWS_AS(parse("1/0"), ParseError);
    CHECK_THROWS_AS(parse("p + "), ParseError);
}

TEST_CASE("canonical printing round-trips through the parser") {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 50; ++t) {
        const DiffPoly q = random_poly(rng);
        CHECK(parse_poly(q.str()) == q);
    }
    const LaxTriple trip = build_triple_n2();
    const MatrixOperator a2 = trip.A_plus;
    CHECK(parse_operator(a2.str()) == a2);
    CHECK(DiffPoly::zero().str() == "0");
}

TEST_CASE("rewrite order does not matter (confluence)") {
    // dbar^b applied to w, zt in every split order up to b = 3, with a del
    // interleaved, always reaches the same canonical form.
    for (Gen g : {Gen::w, Gen::zt}) {
        const DiffPoly base = DiffPoly::generator(g);
        for (int b = 1; b <= 3; ++b) {
            const DiffPoly whole = deriv(base, FDir::dzbar, b);
            DiffPoly stepped = base;
            for (int k = 0; k < b; ++k) stepped = deriv(stepped, FDir::dzbar, 1);
            CHECK(whole == stepped);
            if (b >= 2) {
                const DiffPoly split =
                    deriv(deriv(base, FDir::dzbar, 1), FDir::dzbar, b - 1);
                CHECK(whole == split);
            }
            CHECK(deriv(deriv(whole, FDir::dz, 1), FDir::dzbar, 1) ==
                  deriv(deriv(whole, FDir::dzbar, 1), FDir::dz, 1));
        }
    }
}

TEST_CASE("partial derivatives commute") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 40; ++t) {
        const DiffPoly q = random_poly(rng);
        CHECK(deriv(deriv(q, FDir::dz), FDir::dzbar) ==
              deriv(deriv(q, FDir::dzbar), FDir::dz));
    }
}

TEST_CASE("compose is the Leibniz expansion") {
    // del o (p .) = p del + (del p)
    const MatrixOperator D = parse_operator("D");
    const MatrixOperator P = parse_operator("p");
    MatrixOperator expect = parse_operator("p*D") + parse_operator("d(p)");
    CHECK(compose(D, P) == expect);

    // del^2 o (f .) = f del^2 + 2 (del f) del + (del^2 f)
    const MatrixOperator D2 = parse_operator("D^2");
    const MatrixOperator F = parse_operator("w*p");
    const MatrixOperator lhs = compose(D2, F);
    const DiffPoly f = parse_poly("w*p");
    MatrixOperator rhs = MatrixOperator::term(Mat2::diag(f, f), 2, 0);
    const DiffPoly df = deriv(f, FDir::dz);
    rhs.add_term(Rational(2) * Mat2::diag(df, df), 1, 0);
    const DiffPoly d2f = deriv(f, FDir::dz, 2);
    rhs.add_term(Mat2::diag(d2f, d2f), 0, 0);
    CHECK(lhs == rhs);
}

TEST_CASE("operator application matches repeated differentiation") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 20; ++t) {
        const DiffPoly f = random_poly(rng), g = random_poly(rng);
        const MatrixOperator op =
            compose(MatrixOperator::identity_shift(2, 1), MatrixOperator::term(Mat2::diag(f, f)));
        const auto applied = apply(op, {g, DiffPoly::zero()});
        const DiffPoly direct =
            deriv(deriv(f * g, FDir::dz, 2), FDir::dzbar, 1);
        CHECK(applied[0] == direct);
    }
}

TEST_CASE("commutators") {
    CHECK(commutator(parse_operator("D"), parse_operator("Db")).is_zero());
    CHECK(commutator(parse_operator("D"), parse_operator("p")) == parse_operator("d(p)"));
    // [Db, w .] = (db w) . = 2 p (d p)
    CHECK(commutator(parse_operator("Db"), parse_operator("w")) ==
          parse_operator("2*p*d(p)"));

    std::mt19937_64 rng(31);
    for (int t = 0; t < 10; ++t) {
        const MatrixOperator A = random_operator(rng), B = random_operator(rng),
                             C = random_operator(rng);
        CHECK(commutator(A, B) == -commutator(B, A));
        const MatrixOperator jacobi = commutator(A, commutator(B, C)) +
                                      commutator(B, commutator(C, A)) +
                                      commutator(C, commutator(A, B));
        CHECK(jacobi.is_zero());
        CHECK(compose(compose(A, B), C) == compose(A, compose(B, C)));
    }
}

TEST_CASE("conjugation transform") {
    std::mt19937_64 rng(55);
    for (int t = 0; t < 20; ++t) {
        const MatrixOperator A = random_operator(rng);
        CHECK(conj_transform(conj_transform(A)) == A);
    }
    const MatrixOperator L = dirac_operator();
    CHECK(conj_transform(L) == L);
}

TEST_CASE("eval_on_grid agrees with field arithmetic") {
    const Grid g = make_grid(32);
    RealField p(g);
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            p.at(ix, iy) = 0.2 * std::cos(g.x(ix)) + 0.1 * std::sin(g.y(iy));
    const ComplexField pc = to_complex(p);
    const ComplexField omega = dbar_inverse(wirtinger(product(pc, pc, false), Dir::dz));
    const ComplexField dp = wirtinger(pc, Dir::dz);
    const ComplexField zeta =
        dbar_inverse(wirtinger(product(product(pc, pc, false), omega, false) -
                                   product(dp, dp, false),
                               Dir::dz));
    const GridBinding bind{&p, &omega, &zeta};

    // p^2 evaluates pointwise
    const ComplexField p2 = eval_on_grid(parse_poly("p*p"), bind);
    CHECK(max_abs(p2 - product(pc, pc, false)) < 1e-12);

    // ring homomorphism witness for the omega constraint: the binding was
    // built so that dbar(omega) = del(p^2) = eval(2 p d(p)).
    const ComplexField lhs = wirtinger(omega, Dir::dzbar);
    const ComplexField rhs = eval_on_grid(parse_poly("2*p*d(p)"), bind);
    CHECK(max_abs(lhs - rhs) / max_abs(rhs) < 1e-10);

    // eval(q r) = eval(q) eval(r), eval(d q) = del eval(q)
    std::mt19937_64 rng(13);
    for (int t = 0; t < 8; ++t) {
        const DiffPoly q = random_poly(rng), r = random_poly(rng);
        const ComplexField eq = eval_on_grid(q, bind), er = eval_on_grid(r, bind);
        const ComplexField eqr = eval_on_grid(q * r, bind);
        const double scale = std::max({max_abs(eqr), max_abs(eq), max_abs(er), 1.0});
        CHECK(max_abs(eqr - product(eq, er, false)) / scale < 1e-10);
        const ComplexField edq = eval_on_grid(deriv(q, FDir::dz), bind);
        const double dscale = std::max(max_abs(edq), 1.0);
        CHECK(max_abs(edq - wirtinger(eq, Dir::dz)) / dscale < 1e-10);
    }

    // conjugate generators evaluate as conjugates of the bound fields
    const ComplexField wb_eval = eval_on_grid(parse_poly("wb"), bind);
    CHECK(max_abs(wb_eval - conj(omega)) < 1e-14);
    const ComplexField dwb = eval_on_grid(deriv(parse_poly("wb"), FDir::dzbar), bind);
    CHECK(max_abs(dwb - wirtinger(conj(omega), Dir::dzbar)) < 1e-12);

    const GridBinding no_omega{&p, nullptr, nullptr};
    CHECK_THROWS_AS(eval_on_grid(parse_poly("w"), no_omega), std::invalid_argument);
}
