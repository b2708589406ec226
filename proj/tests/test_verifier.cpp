#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mvn/parse.hpp"
#include "mvn/verify.hpp"

using namespace mvn;

TEST_CASE("triple carries the concrete matrices") {
    const LaxTriple t = build_triple_n2();

    const Mat2* V = t.A_plus.coeff(3, 0);
    REQUIRE(V != nullptr);
    CHECK((*V)(0, 1) == parse_poly("-5*d(p)"));
    CHECK((*V)(1, 1) == parse_poly("5*w"));
    CHECK((*V)(0, 0).is_zero());
    CHECK((*V)(1, 0).is_zero());

    const Mat2* head = t.A_plus.coeff(5, 0);
    REQUIRE(head != nullptr);
    CHECK(*head == Mat2::identity());

    const Mat2* T = t.B_plus.coeff(0, 0);
    REQUIRE(T != nullptr);
    CHECK((*T)(1, 0).coeff_of({{Gen::p, 4, 0}}) == Rational(5));

    // the 12-entries of R, S, T are copied from W, X, Z
    CHECK((*t.B_plus.coeff(2, 0))(0, 1) == (*t.A_plus.coeff(2, 0))(0, 1));
    CHECK((*t.B_plus.coeff(1, 0))(0, 1) == (*t.A_plus.coeff(1, 0))(0, 1));
    CHECK((*T)(0, 1) == (*t.A_plus.coeff(0, 0))(0, 1));

    CHECK(t.flow_rhs_plus.coeff_of({{Gen::w, 1, 0}, {Gen::p, 2, 0}}) == Rational(15, 2));
}

TEST_CASE("flow right-hand sides") {
    CHECK(flow_rhs_symbolic(1) == parse_poly("d(p,3) + 3*w*d(p) + 3/2*p*d(w)"));
    CHECK(flow_rhs_symbolic(2) ==
          parse_poly("d(p,5) + 5*w*d(p,3) + 15/2*d(w)*d(p,2)"
                     " + 5/2*d(p)*(2*w*w + 3*d(w,2) + 2*zt)"
                     " + 5/2*p*d(w*w + zt + d(w,2))"));
    // pure dispersive head with unit coefficient
    CHECK(flow_rhs_symbolic(1).coeff_of({{Gen::p, 3, 0}}) == Rational(1));
    CHECK(flow_rhs_symbolic(2).coeff_of({{Gen::p, 5, 0}}) == Rational(1));
    CHECK_THROWS_WITH_AS(flow_rhs_symbolic(3), "only flows n = 1 and n = 2 are implemented",
                         std::invalid_argument);
}

TEST_CASE("compatibility residuals vanish exactly") {
    const LaxTriple t = build_triple_n2();
    CHECK(compatibility_residual(t, Part::plus).is_zero());
    CHECK(compatibility_residual(t, Part::minus).is_zero());
}

TEST_CASE("telescoping component equations vanish exactly") {
    const LaxTriple t = build_triple_n2();
    for (const DiffPoly& r : telescoping_residuals(t)) CHECK(r.is_zero());
}

TEST_CASE("flux identities vanish exactly and the two n=2 forms agree") {
    CHECK(flux_residual(1, FluxForm::direct).is_zero());
    CHECK(flux_residual(2, FluxForm::direct).is_zero());
    CHECK(flux_residual(2, FluxForm::simpler).is_zero());
    CHECK((flux_expression(2, FluxForm::direct) - flux_expression(2, FluxForm::simpler))
              .is_zero());
    CHECK_THROWS_AS(flux_residual(3, FluxForm::direct), std::invalid_argument);
}

TEST_CASE("perturbed matrices are rejected (negative controls)") {
    LaxTriple t = build_triple_n2();
    t.A_plus.set_entry(3, 0, 0, 1, parse_poly("-4*d(p)"));
    CHECK_FALSE(compatibility_residual(t, Part::plus).is_zero());
    const auto tele = telescoping_residuals(t);
    CHECK(tele[0] == parse_poly("d(p)"));  // 5 dp - 4 dp

    LaxTriple t2 = build_triple_n2();
    t2.A_plus.set_entry(0, 0, 0, 1, DiffPoly::zero());  // drop Z12
    const auto tele2 = telescoping_residuals(t2);
    CHECK_FALSE(tele2[3].is_zero());
    CHECK(tele2[3] == parse_poly("5*d(p,4) + d(5/2*(p*d(w) - 2*w*d(p) - 2*d(p,3)))"
                                 " - p*5/2*(2*w*w + 3*d(w,2) + 2*zt)"));
}

TEST_CASE("minus parts come from the conjugation rule") {
    const LaxTriple t = build_triple_n2();
    const MatrixOperator A_minus = conj_transform(t.A_plus);
    const Mat2* head = A_minus.coeff(0, 5);
    REQUIRE(head != nullptr);
    CHECK(*head == Mat2::identity());
    CHECK(A_minus.coeff(5, 0) == nullptr);
    CHECK(conj_transform(A_minus) == t.A_plus);
}

TEST_CASE("run_all_checks reports all zeros") {
    const auto results = run_all_checks(build_triple_n2());
    CHECK(results.size() == 11);
    double total = 0;
    for (const auto& r : results) {
        CHECK(r.residual_terms == 0);
        total += r.seconds;
    }
    CHECK(total < 60.0);
}
