#pragma once

#include <ostream>
#include <string>

#include "redop/expr/expr.hpp"

namespace redop {

namespace detail {

// Syntactic position of a subexpression in the grammar
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := primary ['^' int]
enum class Slot {
    Top,          // anywhere an expr is allowed
    Lead,         // first operand of a '*'/'/' chain
    Factor,       // operand after '*'
    Divisor,      // operand after '/'
    Unary,        // operand of prefix '-'
    Base,         // base of '^'
};

inline void print_to(std::string& out, const Expr& e, Slot slot);

inline void parenthesized(std::string& out, const Expr& e)
{
    out += '(';
    print_to(out, e, Slot::Top);
    out += ')';
}

inline void print_number(std::string& out, const Number& n, Slot slot)
{
    const bool negative = n.is_negative();
    const bool fraction = n.is_exact() && !n.is_integer();
    bool bare = false;
    switch (slot) {
        case Slot::Top:
        case Slot::Lead: bare = true; break;
        case Slot::Factor:
        case Slot::Divisor:
        case Slot::Unary: bare = !negative && !fraction; break;
        case Slot::Base: bare = !negative && !fraction; break;
    }
    if (bare) {
        out += n.str();
    } else {
        out += '(';
        out += n.str();
        out += ')';
    }
}

inline void print_sum(std::string& out, const Expr& e)
{
    bool first = true;
    for (const auto& term : e.args()) {
        if (first) {
            print_to(out, term, Slot::Lead);
            first = false;
            continue;
        }
        if (looks_negative(term)) {
            out += " - ";
            print_to(out, make_neg(term), Slot::Lead);
        } else {
            out += " + ";
            print_to(out, term, Slot::Lead);
        }
    }
}

inline void print_to(std::string& out, const Expr& e, Slot slot)
{
    switch (e.kind()) {
        case Kind::Rational:
        case Kind::Real: print_number(out, e.value(), slot); return;
        case Kind::Variable: out += var_name(e.var()); return;
        case Kind::Sum:
            if (slot == Slot::Top) print_sum(out, e);
            else parenthesized(out, e);
            return;
        case Kind::Neg:
            if (slot == Slot::Top || slot == Slot::Lead) {
                out += '-';
                print_to(out, e.arg(0), Slot::Unary);
            } else {
                parenthesized(out, e);
            }
            return;
        case Kind::Product:
            if (slot == Slot::Top || slot == Slot::Lead || slot == Slot::Unary) {
                bool first = true;
                for (const auto& f : e.args()) {
                    if (!first) out += '*';
                    print_to(out, f, first ? Slot::Lead : Slot::Factor);
                    first = false;
                }
            } else {
                parenthesized(out, e);
            }
            return;
        case Kind::Quotient:
            if (slot == Slot::Top || slot == Slot::Lead || slot == Slot::Unary) {
                print_to(out, e.arg(0), Slot::Lead);
                out += '/';
                print_to(out, e.arg(1), Slot::Divisor);
            } else {
                parenthesized(out, e);
            }
            return;
        case Kind::Power:
            if (slot == Slot::Base) {
                parenthesized(out, e);
                return;
            }
            print_to(out, e.arg(0), Slot::Base);
            out += '^';
            if (e.exponent() < 0) {
                out += "(" + std::to_string(e.exponent()) + ")";
            } else {
                out += std::to_string(e.exponent());
            }
            return;
        case Kind::Exp: out += "exp("; break;
        case Kind::Sin: out += "sin("; break;
        case Kind::Cos: out += "cos("; break;
        case Kind::Sqrt: out += "sqrt("; break;
    }
    print_to(out, e.arg(0), Slot::Top);
    out += ')';
}

} // namespace detail

/// Canonical printer; the output is accepted by parse().
[[nodiscard]] inline std::string to_string(const Expr& e)
{
    std::string out;
    detail::print_to(out, e, detail::Slot::Top);
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

} // namespace redop
