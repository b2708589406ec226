#pragma once

// Expression grammar for differential polynomials and matrix operators:
//   generators   p w zt wb ztb
//   derivatives  d(expr[,k])  db(expr[,k])      (scalar arguments only)
//   operators    D  Db  with optional ^k
//   rationals    m/n, integers
//   arithmetic   + - * and parentheses; unary minus
//   matrices     [[e11,e12],[e21,e22]]          (entries may be operators)
//
// A pure scalar expression parses to a DiffPoly; anything containing D,
// Db or a matrix literal parses to a MatrixOperator (scalars are promoted
// to multiples of the identity).

#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>

#include "mvn/diffop.hpp"
#include "mvn/diffpoly.hpp"

namespace mvn {

struct ParseError : std::runtime_error {
    std::size_t pos;
    ParseError(const std::string& what, std::size_t pos_)
        : std::runtime_error(what + " at offset " + std::to_string(pos_)), pos(pos_) {}
};

using Parsed = std::variant<DiffPoly, MatrixOperator>;

Parsed parse(const std::string& text);

// Convenience wrappers; throw ParseError if the expression has the wrong kind.
DiffPoly parse_poly(const std::string& text);
MatrixOperator parse_operator(const std::string& text);  // promotes scalars

}  // namespace mvn
