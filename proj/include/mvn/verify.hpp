#pragma once

// Concrete operators of the first and second flows and their exact
// identity checks: Manakov-triple compatibility, the five telescoping
// component equations, and the flux (first-integral) identities. Every
// residual must normalize to the literal zero polynomial/operator.

#include <array>
#include <string>
#include <vector>

#include "mvn/diffop.hpp"

namespace mvn {

struct LaxTriple {
    MatrixOperator L;       // [[D, -p], [p, Db]]
    MatrixOperator A_plus;  // D^5 + V D^3 + W D^2 + X D + Z
    MatrixOperator B_plus;  // Q D^3 + R D^2 + S D + T
    DiffPoly flow_rhs_plus;
};

MatrixOperator dirac_operator();
LaxTriple build_triple_n2();

// (+)-part of delta p / delta t_n, n in {1, 2}.
DiffPoly flow_rhs_symbolic(int n);

enum class Part { plus, minus };
enum class FluxForm { direct, simpler };

// dL/dt - [A2, L] - B2 L for the requested part (must be zero).
MatrixOperator compatibility_residual(const LaxTriple& t, Part part);

// The five component equations collapsing the flow to a total derivative.
std::array<DiffPoly, 5> telescoping_residuals(const LaxTriple& t);

// Flux bracket F with 2 p (dp/dt_n^+) = d F, and the residual of that identity.
DiffPoly flux_expression(int n, FluxForm form);
DiffPoly flux_residual(int n, FluxForm form);

// One named check with its residual term count (0 = identity holds).
struct CheckResult {
    std::string name;
    std::size_t residual_terms;
    double seconds;
};

std::vector<CheckResult> run_all_checks(const LaxTriple& t);

}  // namespace mvn
