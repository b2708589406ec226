#include "mvn/parse.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <utility>

namespace mvn {

namespace {

// Scalar differential operator: sum_{a,b} f_{ab} D^a Db^b. Intermediate
// parser value; promoted to a diagonal MatrixOperator when needed.
struct ScalarOp {
    std::map<std::pair<int, int>, DiffPoly> t;

    static ScalarOp from_poly(const DiffPoly& f) {
        ScalarOp s;
        if (!f.is_zero()) s.t[{0, 0}] = f;
        return s;
    }
    void add(const DiffPoly& f, int a, int b) {
        if (f.is_zero()) return;
        auto [it, fresh] = t.emplace(std::make_pair(a, b), f);
        if (!fresh) {
            it->second = it->second + f;
            if (it->second.is_zero()) t.erase(it);
        }
    }
};

ScalarOp sop_add(const ScalarOp& x, const ScalarOp& y, int sign) {
    ScalarOp out = x;
    for (const auto& [k, f] : y.t) out.add(sign < 0 ? -f : f, k.first, k.second);
    return out;
}

Rational binom(int n, int k) {
    Rational r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

ScalarOp sop_compose(const ScalarOp& x, const ScalarOp& y) {
    ScalarOp out;
    for (const auto& [ka, fa] : x.t)
        for (const auto& [kb, fb] : y.t) {
            DiffPoly fb_j = fb;
            for (int j = 0; j <= ka.second; ++j) {
                if (j > 0) fb_j = deriv(fb_j, FDir::dzbar, 1);
                DiffPoly fb_ij = fb_j;
                for (int i = 0; i <= ka.first; ++i) {
                    if (i > 0) fb_ij = deriv(fb_ij, FDir::dz, 1);
                    out.add(binom(ka.first, i) * binom(ka.second, j) * (fa * fb_ij),
                            ka.first - i + kb.first, ka.second - j + kb.second);
                }
            }
        }
    return out;
}

MatrixOperator sop_to_matrix(const ScalarOp& s) {
    MatrixOperator out;
    for (const auto& [k, f] : s.t) out.add_term(Mat2::diag(f, f), k.first, k.second);
    return out;
}

// Parser value: scalar polynomial, scalar operator, or matrix operator.
using Value = std::variant<DiffPoly, ScalarOp, MatrixOperator>;

ScalarOp to_sop(const Value& v, std::size_t pos) {
    if (std::holds_alternative<DiffPoly>(v)) return ScalarOp::from_poly(std::get<DiffPoly>(v));
    if (std::holds_alternative<ScalarOp>(v)) return std::get<ScalarOp>(v);
    throw ParseError("matrix where scalar operator expected", pos);
}

MatrixOperator to_matrix(const Value& v) {
    if (std::holds_alternative<MatrixOperator>(v)) return std::get<MatrixOperator>(v);
    if (std::holds_alternative<ScalarOp>(v)) return sop_to_matrix(std::get<ScalarOp>(v));
    return sop_to_matrix(ScalarOp::from_poly(std::get<DiffPoly>(v)));
}

Value v_mul(const Value& a, const Value& b, std::size_t pos) {
    if (std::holds_alternative<DiffPoly>(a) && std::holds_alternative<DiffPoly>(b))
        return std::get<DiffPoly>(a) * std::get<DiffPoly>(b);
    if (std::holds_alternative<MatrixOperator>(a) || std::holds_alternative<MatrixOperator>(b))
        return compose(to_matrix(a), to_matrix(b));
    return sop_compose(to_sop(a, pos), to_sop(b, pos));
}

Value v_addsub(const Value& a, const Value& b, int sign, std::size_t pos) {
    if (std::holds_alternative<DiffPoly>(a) && std::holds_alternative<DiffPoly>(b))
        return sign < 0 ? std::get<DiffPoly>(a) - std::get<DiffPoly>(b)
                        : std::get<DiffPoly>(a) + std::get<DiffPoly>(b);
    if (std::holds_alternative<MatrixOperator>(a) || std::holds_alternative<MatrixOperator>(b)) {
        MatrixOperator mb = to_matrix(b);
        return sign < 0 ? to_matrix(a) - mb : to_matrix(a) + mb;
    }
    return sop_add(to_sop(a, pos), to_sop(b, pos), sign);
}

Value v_neg(const Value& a) {
    if (std::holds_alternative<DiffPoly>(a)) return -std::get<DiffPoly>(a);
    if (std::holds_alternative<ScalarOp>(a)) {
        ScalarOp out;
        for (const auto& [k, f] : std::get<ScalarOp>(a).t) out.add(-f, k.first, k.second);
        return out;
    }
    return -std::get<MatrixOperator>(a);
}

struct Token {
    enum Kind { End, Int, Name, Sym } kind = End;
    std::string text;
    std::size_t pos = 0;
};

class Parser {
  public:
    explicit Parser(const std::string& text) : src_(text) { advance(); }

    Value run() {
        Value v = expr();
        if (cur_.kind != Token::End) fail("unexpected trailing input");
        return v;
    }

  private:
    const std::string& src_;
    std::size_t at_ = 0;
    Token cur_;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("syntax error: " + msg, cur_.pos);
    }

    void advance() {
        while (at_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[at_]))) ++at_;
        cur_ = Token{Token::End, "", at_};
        if (at_ >= src_.size()) return;
        const char c = src_[at_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = at_;
            while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
            cur_ = Token{Token::Int, src_.substr(at_, j - at_), at_};
            at_ = j;
        } else if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = at_;
            while (j < src_.size() && std::isalnum(static_cast<unsigned char>(src_[j]))) ++j;
            cur_ = Token{Token::Name, src_.substr(at_, j - at_), at_};
            at_ = j;
        } else {
            cur_ = Token{Token::Sym, std::string(1, c), at_};
            ++at_;
        }
    }

    bool accept_sym(const char* s) {
        if (cur_.kind == Token::Sym && cur_.text == s) {
            advance();
            return true;
        }
        return false;
    }

    void expect_sym(const char* s, const char* what) {
        if (!accept_sym(s)) fail(std::string("expected '") + s + "' " + what);
    }

    long long expect_int(const char* what) {
        if (cur_.kind != Token::Int) fail(std::string("expected integer ") + what);
        long long v = std::stoll(cur_.text);
        advance();
        return v;
    }

    Value expr() {
        Value v = term();
        while (cur_.kind == Token::Sym && (cur_.text == "+" || cur_.text == "-")) {
            const int sign = cur_.text == "-" ? -1 : 1;
            const std::size_t pos = cur_.pos;
            advance();
            v = v_addsub(v, term(), sign, pos);
        }
        return v;
    }

    Value term() {
        Value v = unary();
        while (cur_.kind == Token::Sym && cur_.text == "*") {
            const std::size_t pos = cur_.pos;
            advance();
            v = v_mul(v, unary(), pos);
        }
        return v;
    }

    Value unary() {
        if (cur_.kind == Token::Sym && cur_.text == "-") {
            advance();
            return v_neg(unary());
        }
        return primary();
    }

    DiffPoly scalar_arg(const char* fn) {
        const std::size_t pos = cur_.pos;
        Value v = expr();
        if (!std::holds_alternative<DiffPoly>(v))
            throw ParseError(std::string("operator or matrix where scalar expected in ") + fn,
                             pos);
        return std::get<DiffPoly>(v);
    }

    Value primary() {
        if (cur_.kind == Token::Int) {
            Rational num(cur_.text);
            advance();
            if (cur_.kind == Token::Sym && cur_.text == "/") {
                advance();
                if (cur_.kind != Token::Int) fail("expected integer denominator");
                Rational den(cur_.text);
                if (den == 0) fail("zero denominator");
                advance();
                return DiffPoly::constant(num / den);
            }
            return DiffPoly::constant(num);
        }
        if (cur_.kind == Token::Name) {
            const std::string name = cur_.text;
            if (name == "p") return advance(), DiffPoly::generator(Gen::p);
            if (name == "w") return advance(), DiffPoly::generator(Gen::w);
            if (name == "zt") return advance(), DiffPoly::generator(Gen::zt);
            if (name == "wb") return advance(), DiffPoly::generator(Gen::wb);
            if (name == "ztb") return advance(), DiffPoly::generator(Gen::ztb);
            if (name == "d" || name == "db") {
                advance();
                expect_sym("(", name == "d" ? "after d" : "after db");
                DiffPoly arg = scalar_arg(name.c_str());
                int k = 1;
                if (accept_sym(",")) k = static_cast<int>(expect_int("derivative order"));
                if (k < 0) fail("negative derivative order");
                expect_sym(")", "to close derivative");
                return deriv(arg, name == "d" ? FDir::dz : FDir::dzbar, k);
            }
            if (name == "D" || name == "Db") {
                advance();
                int k = 1;
                if (accept_sym("^")) k = static_cast<int>(expect_int("exponent"));
                if (k < 0) fail("negative operator power");
                ScalarOp s;
                s.add(DiffPoly::constant(1), name == "D" ? k : 0, name == "D" ? 0 : k);
                return s;
            }
            fail("unknown identifier '" + name + "'");
        }
        if (accept_sym("(")) {
            Value v = expr();
            expect_sym(")", "to close group");
            return v;
        }
        if (cur_.kind == Token::Sym && cur_.text == "[") return matrix();
        fail("expected expression");
    }

    ScalarOp entry() {
        const std::size_t pos = cur_.pos;
        Value v = expr();
        if (std::holds_alternative<MatrixOperator>(v))
            throw ParseError("nested matrix in matrix entry", pos);
        return to_sop(v, pos);
    }

    Value matrix() {
        expect_sym("[", "to open matrix");
        ScalarOp e[2][2];
        for (int i = 0; i < 2; ++i) {
            expect_sym("[", "to open matrix row");
            e[i][0] = entry();
            expect_sym(",", "between matrix entries");
            e[i][1] = entry();
            expect_sym("]", "to close matrix row");
            if (i == 0) expect_sym(",", "between matrix rows");
        }
        expect_sym("]", "to close matrix");
        MatrixOperator out;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (const auto& [k, f] : e[i][j].t) {
                    Mat2 m;
                    m(i, j) = f;
                    out.add_term(m, k.first, k.second);
                }
        return out;
    }
};

}  // namespace

Parsed parse(const std::string& text) {
    Value v = Parser(text).run();
    if (std::holds_alternative<DiffPoly>(v)) return std::get<DiffPoly>(v);
    return to_matrix(v);
}

DiffPoly parse_poly(const std::string& text) {
    Parsed v = parse(text);
    if (!std::holds_alternative<DiffPoly>(v))
        throw ParseError("expected a scalar differential polynomial", 0);
    return std::get<DiffPoly>(v);
}

MatrixOperator parse_operator(const std::string& text) {
    Parsed v = parse(text);
    if (std::holds_alternative<MatrixOperator>(v)) return std::get<MatrixOperator>(v);
    return sop_to_matrix(ScalarOp::from_poly(std::get<DiffPoly>(v)));
}

}  // namespace mvn
