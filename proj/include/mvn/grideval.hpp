#pragma once

// Numeric evaluation of differential polynomials on a periodic grid.
// Derivatives are spectral, products are exact pointwise (no dealiasing),
// wb/ztb evaluate as complex conjugates of the bound omega/zeta fields.

#include <map>

#include "mvn/diffpoly.hpp"
#include "mvn/field.hpp"

namespace mvn {

struct GridBinding {
    const RealField* p = nullptr;
    const ComplexField* omega = nullptr;
    const ComplexField* zeta = nullptr;
};

ComplexField eval_on_grid(const DiffPoly& poly, const GridBinding& binding);

}  // namespace mvn
