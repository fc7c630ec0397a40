#pragma once

#include <cctype>
#include <charconv>
#include <limits>
#include <string>
#include <string_view>

#include "redop/errors.hpp"
#include "redop/expr/expr.hpp"

namespace redop {

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr parse_all()
    {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) syntax("unexpected '" + std::string(1, src_[pos_]) + "'");
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    [[noreturn]] void syntax(const std::string& what) const
    {
        throw ParseError(ParseError::Kind::Syntax, pos_, "syntax error: " + what);
    }

    void skip_ws()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            if (pos_ >= src_.size()) syntax(std::string("expected '") + c + "' but input ended");
            syntax(std::string("expected '") + c + "'");
        }
    }

    Expr parse_expr()
    {
        std::vector<Expr> terms;
        terms.push_back(parse_term());
        for (;;) {
            if (accept('+')) {
                terms.push_back(parse_term());
            } else if (accept('-')) {
                terms.push_back(make_neg(parse_term()));
            } else {
                break;
            }
        }
        return terms.size() == 1 ? terms.front() : make_sum(std::move(terms));
    }

    Expr parse_term()
    {
        Expr cur = parse_unary();
        for (;;) {
            if (accept('*')) {
                cur = make_product({cur, parse_unary()});
            } else if (accept('/')) {
                cur = make_quotient(cur, parse_unary());
            } else {
                return cur;
            }
        }
    }

    Expr parse_unary()
    {
        if (accept('-')) return make_neg(parse_unary());
        return parse_power();
    }

    Expr parse_power()
    {
        Expr base = parse_primary();
        if (!accept('^')) return base;
        return make_power(base, parse_exponent());
    }

    int parse_exponent()
    {
        bool paren = accept('(');
        bool negative = accept('-');
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (start == pos_) syntax("'^' requires an integer exponent");
        if (pos_ < src_.size() && src_[pos_] == '.') syntax("'^' requires an integer exponent");
        long value = 0;
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (ec != std::errc() || value > std::numeric_limits<int>::max()) {
            pos_ = start;
            syntax("exponent out of range");
        }
        if (paren) expect(')');
        return static_cast<int>(negative ? -value : value);
    }

    Expr parse_number()
    {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            const std::size_t frac = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            if (frac == pos_) syntax("digits expected after '.'");
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
            if (ec != std::errc()) {
                pos_ = start;
                syntax("bad decimal literal");
            }
            return Expr::real(value);
        }
        return Expr(Rational(Integer(std::string(src_.substr(start, pos_ - start)))));
    }

    Expr parse_primary()
    {
        skip_ws();
        if (pos_ >= src_.size()) syntax("unexpected end of input");
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (c == '(') {
            ++pos_;
            Expr inner = parse_expr();
            expect(')');
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            const std::string_view name = src_.substr(start, pos_ - start);
            if (name == "t") return vars::t();
            if (name == "x") return vars::x();
            if (name == "u") return vars::u();
            Expr (*fn)(const Expr&) = nullptr;
            if (name == "exp") fn = &redop::exp;
            else if (name == "sin") fn = &redop::sin;
            else if (name == "cos") fn = &redop::cos;
            else if (name == "sqrt") fn = &redop::sqrt;
            if (fn == nullptr)
                throw ParseError(ParseError::Kind::UnknownIdentifier, start,
                                 "unknown identifier " + std::string(name));
            expect('(');
            Expr arg = parse_expr();
            expect(')');
            return fn(arg);
        }
        syntax("unexpected '" + std::string(1, c) + "'");
    }
};

} // namespace detail

/// Parse the expression grammar:
///   variables t x u; literals 3, 1/2, 0.25; operators + - * / ^ (integer
///   exponent, optionally negative: x^-2 or x^(-2)); exp sin cos sqrt.
/// Integer literals are exact rationals, decimal literals are floats.
[[nodiscard]] inline Expr parse(std::string_view source)
{
    return detail::Parser(source).parse_all();
}

} // namespace redop
