#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "redop/expr/number.hpp"

namespace redop {

enum class Var : std::uint8_t { t = 0, x = 1, u = 2 };

[[nodiscard]] inline char var_name(Var v)
{
    switch (v) {
        case Var::t: return 't';
        case Var::x: return 'x';
        case Var::u: return 'u';
    }
    return '?';
}

enum class Kind : std::uint8_t {
    Rational,
    Real,
    Variable,
    Neg,
    Sum,
    Product,
    Quotient,
    Power,
    Exp,
    Sin,
    Cos,
    Sqrt,
};

class Expr;

namespace detail {

struct Node {
    Kind kind;
    Number value;               // Rational / Real
    Var var = Var::t;           // Variable
    int exponent = 0;           // Power
    std::vector<Expr> args;     // operands
    std::size_t hash = 0;
    std::uint8_t var_mask = 0;  // bit i set iff variable i occurs
};

} // namespace detail

/// Immutable handle to a shared expression tree over t, x, u.
///
/// Building an Expr through the free functions and operators below applies a
/// fixed set of local rewrites (flattening, constant folding, 0/1 absorption,
/// sign normalization). Trees built that way print and re-parse to themselves.
class Expr {
public:
    Expr() : Expr(Number(0)) {}
    Expr(int n) : Expr(Number(n)) {}
    Expr(Rational q) : Expr(Number(std::move(q))) {}
    Expr(Number n);

    static Expr real(double d) { return Expr(Number::real(d)); }
    static Expr variable(Var v);

    [[nodiscard]] Kind kind() const noexcept { return node_->kind; }
    [[nodiscard]] const Number& value() const noexcept { return node_->value; }
    [[nodiscard]] Var var() const noexcept { return node_->var; }
    [[nodiscard]] int exponent() const noexcept { return node_->exponent; }
    [[nodiscard]] std::span<const Expr> args() const noexcept { return node_->args; }
    [[nodiscard]] const Expr& arg(std::size_t i = 0) const { return node_->args.at(i); }
    [[nodiscard]] std::size_t hash() const noexcept { return node_->hash; }
    [[nodiscard]] const detail::Node* id() const noexcept { return node_.get(); }
    [[nodiscard]] std::uint8_t var_mask() const noexcept { return node_->var_mask; }

    [[nodiscard]] bool is_constant() const noexcept
    {
        return kind() == Kind::Rational || kind() == Kind::Real;
    }
    [[nodiscard]] bool is_zero() const { return is_constant() && value().is_zero(); }
    [[nodiscard]] bool is_one() const { return is_constant() && value().is_one(); }

    /// Raw node construction without any rewriting; used by the smart builders.
    static Expr make(Kind kind, std::vector<Expr> args, int exponent = 0);

private:
    explicit Expr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const detail::Node> node_;
};

/// Structural total order (deterministic, independent of allocation addresses;
/// not meant to be human-meaningful).
[[nodiscard]] int compare(const Expr& a, const Expr& b);
[[nodiscard]] inline bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
[[nodiscard]] inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }
[[nodiscard]] inline bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

[[nodiscard]] Expr make_sum(std::vector<Expr> terms);
[[nodiscard]] Expr make_product(std::vector<Expr> factors);
[[nodiscard]] Expr make_neg(const Expr& e);
[[nodiscard]] Expr make_quotient(const Expr& num, const Expr& den);
[[nodiscard]] Expr make_power(const Expr& base, int exponent);
[[nodiscard]] Expr exp(const Expr& e);
[[nodiscard]] Expr sin(const Expr& e);
[[nodiscard]] Expr cos(const Expr& e);
[[nodiscard]] Expr sqrt(const Expr& e);
[[nodiscard]] inline Expr pow(const Expr& base, int exponent) { return make_power(base, exponent); }

[[nodiscard]] inline Expr operator+(const Expr& a, const Expr& b) { return make_sum({a, b}); }
[[nodiscard]] inline Expr operator-(const Expr& a, const Expr& b) { return make_sum({a, make_neg(b)}); }
[[nodiscard]] inline Expr operator*(const Expr& a, const Expr& b) { return make_product({a, b}); }
[[nodiscard]] inline Expr operator/(const Expr& a, const Expr& b) { return make_quotient(a, b); }
[[nodiscard]] inline Expr operator-(const Expr& a) { return make_neg(a); }

namespace vars {
inline const Expr& t()
{
    static const Expr e = Expr::variable(Var::t);
    return e;
}
inline const Expr& x()
{
    static const Expr e = Expr::variable(Var::x);
    return e;
}
inline const Expr& u()
{
    static const Expr e = Expr::variable(Var::u);
    return e;
}
} // namespace vars

/// Does e mention variable v anywhere?
[[nodiscard]] bool depends_on(const Expr& e, Var v);

/// Number of distinct nodes in the DAG.
[[nodiscard]] std::size_t node_count(const Expr& e);

// ---------------------------------------------------------------------------

namespace detail {

inline std::size_t hash_combine(std::size_t seed, std::size_t v)
{
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

inline std::size_t hash_number(const Number& n)
{
    if (n.is_exact()) {
        // str() is canonical for rationals; fine for constant-sized hashing.
        return std::hash<std::string>{}(n.str());
    }
    return std::hash<double>{}(n.approx()) ^ 0x5bd1e995;
}

/// Positive/negative split used by the sign-normalizing builders.
inline bool looks_negative(const Expr& e)
{
    switch (e.kind()) {
        case Kind::Rational:
        case Kind::Real: return e.value().is_negative();
        case Kind::Neg: return true;
        case Kind::Product: return e.arg(0).is_constant() && e.arg(0).value().is_negative();
        default: return false;
    }
}

} // namespace detail

inline Expr Expr::make(Kind kind, std::vector<Expr> args, int exponent)
{
    auto n = std::make_shared<detail::Node>();
    n->kind = kind;
    n->exponent = exponent;
    n->args = std::move(args);
    std::size_t h = std::hash<int>{}(static_cast<int>(kind)) * 1315423911u;
    h = detail::hash_combine(h, static_cast<std::size_t>(exponent));
    for (const auto& a : n->args) {
        h = detail::hash_combine(h, a.hash());
        n->var_mask |= a.node_->var_mask;
    }
    n->hash = h;
    return Expr(std::shared_ptr<const detail::Node>(std::move(n)));
}

inline Expr::Expr(Number num)
{
    auto n = std::make_shared<detail::Node>();
    n->kind = num.is_exact() ? Kind::Rational : Kind::Real;
    n->hash = detail::hash_combine(static_cast<std::size_t>(n->kind), detail::hash_number(num));
    n->value = std::move(num);
    node_ = std::move(n);
}

inline Expr Expr::variable(Var v)
{
    auto n = std::make_shared<detail::Node>();
    n->kind = Kind::Variable;
    n->var = v;
    n->var_mask = static_cast<std::uint8_t>(1u << static_cast<int>(v));
    n->hash = detail::hash_combine(0xabcdefu, static_cast<std::size_t>(v) + 1);
    return Expr(std::shared_ptr<const detail::Node>(std::move(n)));
}

inline int compare(const Expr& a, const Expr& b)
{
    if (a.id() == b.id()) return 0;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    if (a.hash() != b.hash()) return a.hash() < b.hash() ? -1 : 1;
    switch (a.kind()) {
        case Kind::Rational:
        case Kind::Real: return compare(a.value(), b.value());
        case Kind::Variable:
            if (a.var() == b.var()) return 0;
            return a.var() < b.var() ? -1 : 1;
        default: break;
    }
    if (a.exponent() != b.exponent()) return a.exponent() < b.exponent() ? -1 : 1;
    const auto aa = a.args();
    const auto ba = b.args();
    if (aa.size() != ba.size()) return aa.size() < ba.size() ? -1 : 1;
    for (std::size_t i = 0; i < aa.size(); ++i) {
        if (const int c = compare(aa[i], ba[i]); c != 0) return c;
    }
    return 0;
}

inline Expr make_neg(const Expr& e)
{
    switch (e.kind()) {
        case Kind::Rational:
        case Kind::Real: return Expr(-e.value());
        case Kind::Neg: return e.arg(0);
        case Kind::Product:
            if (e.arg(0).is_constant()) {
                std::vector<Expr> f(e.args().begin(), e.args().end());
                const Number c = -f.front().value();
                if (c.is_one()) {
                    f.erase(f.begin());
                    if (f.size() == 1) return f.front();
                } else {
                    f.front() = Expr(c);
                }
                return Expr::make(Kind::Product, std::move(f));
            }
            break;
        default: break;
    }
    return Expr::make(Kind::Neg, {e});
}

inline Expr make_sum(std::vector<Expr> terms)
{
    std::vector<Expr> flat;
    flat.reserve(terms.size());
    Number constant(0);
    bool have_constant = false;
    for (auto& term : terms) {
        if (term.kind() == Kind::Sum) {
            for (const auto& inner : term.args()) {
                if (inner.is_constant()) {
                    constant = constant + inner.value();
                    have_constant = true;
                } else {
                    flat.push_back(inner);
                }
            }
        } else if (term.is_constant()) {
            constant = constant + term.value();
            have_constant = true;
        } else {
            flat.push_back(std::move(term));
        }
    }
    // A float zero is kept so the float-ness of the result survives.
    if (have_constant && (!constant.is_zero() || (!constant.is_exact() && flat.empty())))
        flat.emplace_back(constant);
    if (flat.empty()) return Expr(0);
    if (flat.size() == 1) return flat.front();
    return Expr::make(Kind::Sum, std::move(flat));
}

inline Expr make_product(std::vector<Expr> factors)
{
    std::vector<Expr> flat;
    flat.reserve(factors.size());
    Number coefficient(1);
    auto absorb = [&](const Expr& f, auto&& self) -> void {
        switch (f.kind()) {
            case Kind::Rational:
            case Kind::Real: coefficient = coefficient * f.value(); break;
            case Kind::Neg:
                coefficient = -coefficient;
                self(f.arg(0), self);
                break;
            case Kind::Product:
                for (const auto& inner : f.args()) self(inner, self);
                break;
            default: flat.push_back(f);
        }
    };
    for (const auto& f : factors) absorb(f, absorb);
    if (coefficient.is_zero()) return Expr(coefficient);
    if (flat.empty()) return Expr(coefficient);
    const bool negative = coefficient.is_negative();
    const Number magnitude = coefficient.abs();
    if (!magnitude.is_one() || !magnitude.is_exact()) flat.insert(flat.begin(), Expr(coefficient));
    Expr body = flat.size() == 1 ? flat.front() : Expr::make(Kind::Product, std::move(flat));
    if (negative && magnitude.is_one() && magnitude.is_exact()) return make_neg(body);
    return body;
}

inline Expr make_quotient(const Expr& num, const Expr& den)
{
    if (den.is_constant() && !den.value().is_zero()) {
        if (num.is_constant()) return Expr(num.value() / den.value());
        if (den.is_one()) return num;
    }
    if (num.is_zero() && !(den.is_constant() && den.value().is_zero())) return num;
    if (detail::looks_negative(num)) return make_neg(make_quotient(make_neg(num), den));
    if (detail::looks_negative(den)) return make_neg(make_quotient(num, make_neg(den)));
    return Expr::make(Kind::Quotient, {num, den});
}

inline Expr make_power(const Expr& base, int exponent)
{
    if (exponent == 0) return Expr(1);
    if (exponent == 1) return base;
    if (base.is_constant()) {
        if (!base.value().is_zero()) return Expr(base.value().pow(exponent));
        if (exponent > 0) return base;
    }
    if (base.kind() == Kind::Power) {
        const long combined = static_cast<long>(base.exponent()) * exponent;
        if (combined <= INT32_MAX && combined >= INT32_MIN)
            return make_power(base.arg(0), static_cast<int>(combined));
    }
    return Expr::make(Kind::Power, {base}, exponent);
}

inline Expr exp(const Expr& e)
{
    if (e.is_zero() && e.value().is_exact()) return Expr(1);
    return Expr::make(Kind::Exp, {e});
}

inline Expr sin(const Expr& e)
{
    if (e.is_zero() && e.value().is_exact()) return Expr(0);
    return Expr::make(Kind::Sin, {e});
}

inline Expr cos(const Expr& e)
{
    if (e.is_zero() && e.value().is_exact()) return Expr(1);
    return Expr::make(Kind::Cos, {e});
}

inline Expr sqrt(const Expr& e)
{
    if (e.kind() == Kind::Rational && (e.value().is_zero() || e.value().is_one())) return e;
    return Expr::make(Kind::Sqrt, {e});
}

inline bool depends_on(const Expr& e, Var v)
{
    return (e.var_mask() >> static_cast<int>(v)) & 1u;
}

inline std::size_t node_count(const Expr& e)
{
    std::unordered_set<const detail::Node*> seen;
    std::vector<Expr> stack{e};
    while (!stack.empty()) {
        Expr cur = stack.back();
        stack.pop_back();
        if (!seen.insert(cur.id()).second) continue;
        for (const auto& a : cur.args()) stack.push_back(a);
    }
    return seen.size();
}

} // namespace redop

template <>
struct std::hash<redop::Expr> {
    std::size_t operator()(const redop::Expr& e) const noexcept { return e.hash(); }
};
