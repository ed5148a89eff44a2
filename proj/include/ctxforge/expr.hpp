#pragma once

// Exact-form scalar expressions for projector entries.
//
// Grammar (whitespace is ignored between tokens):
//
//   expr    = term , { ("+" | "-") , term } ;
//   term    = unary , { ("*" | "/") , unary } ;
//   unary   = ("-" | "+") , unary | primary ;
//   primary = integer | "i" | "pi" | func , "(" , expr , ")" | "(" , expr , ")" ;
//   func    = "sqrt" | "exp" ;
//   integer = digit , { digit } ;
//
// Values are evaluated in double-precision complex arithmetic. Expressions
// built only from integers and + - * / are additionally carried as an exact
// rational.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctxforge/errors.hpp"
#include "ctxforge/rational.hpp"

namespace ctxforge {

using Complex = std::complex<double>;

enum class Exactness { ExactRational, Evaluated };

struct ScalarExpr {
    std::string source;  // canonical rendering (whitespace stripped)
    Complex value;
    Exactness exactness = Exactness::Evaluated;
    std::optional<Rational> exact;
};

namespace detail {

class ExprParser {
public:
    static constexpr int kMaxDepth = 200;

    explicit ExprParser(std::string_view text) : text_(text) {}

    ScalarExpr run() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError(pos_, "empty expression");
        Value v = expr();
        skip_ws();
        if (pos_ != text_.size()) throw SyntaxError(pos_, std::string("unexpected '") + text_[pos_] + "'");
        if (!std::isfinite(v.z.real()) || !std::isfinite(v.z.imag()))
            throw NonFiniteValue("expression evaluates to a non-finite value");
        ScalarExpr out;
        for (char c : text_)
            if (!std::isspace(static_cast<unsigned char>(c))) out.source.push_back(c);
        out.value = v.z;
        if (v.q) {
            out.exactness = Exactness::ExactRational;
            out.exact = v.q;
        }
        return out;
    }

private:
    struct Value {
        Complex z;
        std::optional<Rational> q;
    };

    Value expr() {
        Depth guard(*this);
        Value lhs = term();
        for (;;) {
            skip_ws();
            if (peek('+')) {
                ++pos_;
                Value rhs = term();
                lhs = {lhs.z + rhs.z, both(lhs, rhs) ? std::optional<Rational>(*lhs.q + *rhs.q) : std::nullopt};
            } else if (peek('-')) {
                ++pos_;
                Value rhs = term();
                lhs = {lhs.z - rhs.z, both(lhs, rhs) ? std::optional<Rational>(*lhs.q - *rhs.q) : std::nullopt};
            } else {
                return lhs;
            }
        }
    }

    Value term() {
        Value lhs = unary();
        for (;;) {
            skip_ws();
            if (peek('*')) {
                ++pos_;
                Value rhs = unary();
                lhs = {lhs.z * rhs.z, both(lhs, rhs) ? std::optional<Rational>(*lhs.q * *rhs.q) : std::nullopt};
            } else if (peek('/')) {
                const std::size_t at = pos_++;
                Value rhs = unary();
                if (rhs.z == Complex(0.0, 0.0)) throw DivisionByZero("division by zero at position " + std::to_string(at));
                lhs = {lhs.z / rhs.z, both(lhs, rhs) ? std::optional<Rational>(*lhs.q / *rhs.q) : std::nullopt};
            } else {
                return lhs;
            }
        }
    }

    Value unary() {
        Depth guard(*this);
        skip_ws();
        if (peek('-')) {
            ++pos_;
            Value v = unary();
            return {-v.z, v.q ? std::optional<Rational>(-*v.q) : std::nullopt};
        }
        if (peek('+')) {
            ++pos_;
            return unary();
        }
        return primary();
    }

    Value primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError(pos_, "unexpected end of expression");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) return integer();
        if (c == '(') {
            ++pos_;
            Value v = expr();
            expect(')');
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            const std::string_view word = text_.substr(start, pos_ - start);
            if (word == "i") return {Complex(0.0, 1.0), std::nullopt};
            if (word == "pi") return {Complex(std::numbers::pi, 0.0), std::nullopt};
            if (word == "sqrt" || word == "exp") {
                skip_ws();
                expect('(');
                Value arg = expr();
                expect(')');
                if (word == "sqrt") return {std::sqrt(arg.z), std::nullopt};
                return {std::exp(arg.z), std::nullopt};
            }
            throw SyntaxError(start, "unknown identifier '" + std::string(word) + "'");
        }
        throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
    }

    Value integer() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string digits(text_.substr(start, pos_ - start));
        if (digits.size() > 30) throw SyntaxError(start, "integer literal too long");
        digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));  // no octal prefix
        BigInt n(digits);
        return {Complex(n.convert_to<double>(), 0.0), Rational{n}};
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c) throw SyntaxError(pos_, std::string("expected '") + c + "'");
        ++pos_;
    }

    bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    static bool both(const Value& a, const Value& b) { return a.q && b.q; }

    struct Depth {
        explicit Depth(ExprParser& p) : p_(p) {
            if (++p_.depth_ > kMaxDepth) throw SyntaxError(p_.pos_, "expression nested too deeply");
        }
        ~Depth() { --p_.depth_; }
        ExprParser& p_;
    };

    std::string_view text_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

}  // namespace detail

inline ScalarExpr parse_scalar(std::string_view text) { return detail::ExprParser(text).run(); }

inline std::string render(const ScalarExpr& e) { return e.source; }

// Componentwise parse; no normalization is applied.
inline std::vector<Complex> parse_vector(const std::vector<std::string>& entries, std::size_t dim) {
    if (entries.size() != dim)
        throw DimensionMismatch("vector has " + std::to_string(entries.size()) + " entries, expected " +
                                std::to_string(dim));
    std::vector<Complex> out;
    out.reserve(dim);
    for (const auto& e : entries) out.push_back(parse_scalar(e).value);
    return out;
}

}  // namespace ctxforge
