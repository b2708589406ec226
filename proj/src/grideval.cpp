#include "mvn/grideval.hpp"

#include <stdexcept>

namespace mvn {

namespace {

struct EvalCache {
    const GridBinding& bind;
    Grid grid;
    std::map<DerivSymbol, ComplexField> fields;

    const ComplexField& base(Gen g) {
        const DerivSymbol key{g, 0, 0};
        auto it = fields.find(key);
        if (it != fields.end()) return it->second;
        ComplexField f;
        switch (g) {
            case Gen::p:
                if (!bind.p) throw std::invalid_argument("unbound generator p");
                f = to_complex(*bind.p);
                break;
            case Gen::w:
                if (!bind.omega) throw std::invalid_argument("unbound generator w");
                f = *bind.omega;
                break;
            case Gen::zt:
                if (!bind.zeta) throw std::invalid_argument("unbound generator zt");
                f = *bind.zeta;
                break;
            case Gen::wb:
                if (!bind.omega) throw std::invalid_argument("unbound generator wb");
                f = conj(*bind.omega);
                break;
            case Gen::ztb:
                if (!bind.zeta) throw std::invalid_argument("unbound generator ztb");
                f = conj(*bind.zeta);
                break;
        }
        return fields.emplace(key, std::move(f)).first->second;
    }

    const ComplexField& get(const DerivSymbol& s) {
        auto it = fields.find(s);
        if (it != fields.end()) return it->second;
        ComplexField f = base(s.gen);
        if (s.a > 0) f = wirtinger(f, Dir::dz, s.a);
        if (s.b > 0) f = wirtinger(f, Dir::dzbar, s.b);
        return fields.emplace(s, std::move(f)).first->second;
    }
};

}  // namespace

ComplexField eval_on_grid(const DiffPoly& poly, const GridBinding& binding) {
    if (!binding.p) throw std::invalid_argument("binding must supply p (defines the grid)");
    EvalCache cache{binding, binding.p->grid, {}};
    ComplexField out(cache.grid);
    for (const Monomial& m : poly.monomials()) {
        const double c = m.coeff.convert_to<double>();
        std::vector<cplx> prod(cache.grid.size(), c);
        for (const DerivSymbol& s : m.factors) {
            const ComplexField& f = cache.get(s);
            for (std::size_t i = 0; i < prod.size(); ++i) prod[i] *= f.v[i];
        }
        for (std::size_t i = 0; i < prod.size(); ++i) out.v[i] += prod[i];
    }
    return out;
}

}  // namespace mvn
