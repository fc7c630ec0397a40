#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "redop/burgers.hpp"
#include "redop/errors.hpp"
#include "redop/expr.hpp"
#include "redop/heat.hpp"
#include "redop/reduction.hpp"
#include "redop/verify.hpp"

namespace redop {

/// Vector field tau d_t + xi d_x + eta d_u with coefficients in (t, x, u).
struct VectorField {
    Expr tau;
    Expr xi;
    Expr eta;
};

/// Element c0 P_t + c1 D + c2 K + c3 P_x + c4 G of the Lie algebra of the
/// Burgers equation.
struct GBElement {
    std::array<Rational, 5> c{};

    [[nodiscard]] static GBElement basis(int i)
    {
        GBElement e;
        e.c.at(static_cast<std::size_t>(i)) = 1;
        return e;
    }

    [[nodiscard]] bool is_zero() const
    {
        for (const auto& q : c)
            if (q != 0) return false;
        return true;
    }

    friend bool operator==(const GBElement& a, const GBElement& b) { return a.c == b.c; }
    friend GBElement operator+(const GBElement& a, const GBElement& b)
    {
        GBElement r;
        for (int i = 0; i < 5; ++i) r.c[i] = a.c[i] + b.c[i];
        return r;
    }
    friend GBElement operator*(const Rational& s, const GBElement& a)
    {
        GBElement r;
        for (int i = 0; i < 5; ++i) r.c[i] = s * a.c[i];
        return r;
    }
};

inline constexpr std::array<const char*, 5> kGBNames{"P_t", "D", "K", "P_x", "G"};

namespace detail {

inline std::string combination(const std::array<Rational, 5>& c, const std::array<const char*, 5>& names)
{
    std::string out;
    for (int i = 0; i < 5; ++i) {
        const Rational& q = c[i];
        if (q == 0) continue;
        const bool neg = q < 0;
        const Rational m = neg ? Rational(-q) : q;
        if (out.empty()) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        if (m != 1) out += to_string(m) + "*";
        out += names[i];
    }
    return out.empty() ? "0" : out;
}

} // namespace detail

/// Human-readable combination, e.g. "P_t + 2*P_x" or "0".
[[nodiscard]] inline std::string describe(const GBElement& e) { return detail::combination(e.c, kGBNames); }

/// tau = c0 + 2 c1 t + c2 t^2, xi = c1 x + c2 t x + c3 + c4 t,
/// eta = -c1 u + c2 (x - u t) + c4.
[[nodiscard]] inline VectorField as_vector_field(const GBElement& e)
{
    using vars::t;
    using vars::u;
    using vars::x;
    const auto& c = e.c;
    auto k = [](const Rational& q) { return Expr(q); };
    return {
        make_sum({k(c[0]), k(Rational(2 * c[1])) * t(), k(c[2]) * pow(t(), 2)}),
        make_sum({k(c[1]) * x(), k(c[2]) * t() * x(), k(c[3]), k(c[4]) * t()}),
        make_sum({k(Rational(-c[1])) * u(), k(c[2]) * (x() - u() * t()), k(c[4])}),
    };
}

/// Action of a vector field on a function of (t, x, u).
[[nodiscard]] inline Expr apply(const VectorField& f, const Expr& g)
{
    return f.tau * diff(g, Var::t) + f.xi * diff(g, Var::x) + f.eta * diff(g, Var::u);
}

/// [A, B] = A B - B A on coefficient functions.
[[nodiscard]] inline VectorField lie_bracket(const VectorField& a, const VectorField& b)
{
    return {simplify(apply(a, b.tau) - apply(b, a.tau)), simplify(apply(a, b.xi) - apply(b, a.xi)),
            simplify(apply(a, b.eta) - apply(b, a.eta))};
}

/// Exact coordinates of a vector field in the basis, if it lies in the span.
[[nodiscard]] inline std::optional<GBElement> match_gb_element(const VectorField& f)
{
    const auto tau = polynomial_coefficients(f.tau);
    const auto xi = polynomial_coefficients(f.xi);
    if (!tau || !xi) return std::nullopt;
    auto coef = [](const std::map<std::array<int, 3>, Rational>& p, int a, int b, int cc) {
        const auto it = p.find({a, b, cc});
        return it == p.end() ? Rational(0) : it->second;
    };
    GBElement e;
    e.c[0] = coef(*tau, 0, 0, 0);
    e.c[1] = coef(*tau, 1, 0, 0) / 2;
    e.c[2] = coef(*tau, 2, 0, 0);
    e.c[3] = coef(*xi, 0, 0, 0);
    e.c[4] = coef(*xi, 1, 0, 0);
    const VectorField g = as_vector_field(e);
    for (const auto& d : {f.tau - g.tau, f.xi - g.xi, f.eta - g.eta})
        if (zero_test(d) != ZeroTest::Zero) return std::nullopt;
    return e;
}

/// Commutator computed on the vector fields and matched back to the basis.
[[nodiscard]] inline GBElement commutator(const GBElement& a, const GBElement& b)
{
    const auto m = match_gb_element(lie_bracket(as_vector_field(a), as_vector_field(b)));
    if (!m) throw ConsistencyError("commutator left the span of the algebra");
    return *m;
}

/// 5x5 table of basis brackets [e_i, e_j].
[[nodiscard]] inline std::array<std::array<GBElement, 5>, 5> commutator_table()
{
    std::array<std::array<GBElement, 5>, 5> table;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) table[i][j] = commutator(GBElement::basis(i), GBElement::basis(j));
    return table;
}

/// Lie case operators times Dn lie in the algebra (the bijection of reduction
/// operators with tau = 1, xi_u = 0 and Lie symmetry operators).
[[nodiscard]] inline std::optional<GBElement> lie_case_algebra_element(const ReductionOperator& q)
{
    if (q.cls != OperatorClass::LieCase || !q.lie_constants) return std::nullopt;
    const auto& c = *q.lie_constants;
    using vars::t;
    const Expr dn = Expr(c[2]) * pow(t(), 2) + Expr(Rational(2 * c[1])) * t() + Expr(c[0]);
    return match_gb_element({simplify(dn), simplify(dn * q.xi()), simplify(dn * q.eta())});
}

/// Element of the finite part of the heat algebra:
/// c0 P_t + c1 D + c2 K + c3 P_x + c4 G - mu I.
struct GHElement {
    std::array<Rational, 5> c{};
    Rational mu = 0;
};

/// Coefficients of a heat-algebra field tau d_t + xi d_x + rho v d_v.
struct HeatVectorField {
    Expr tau;
    Expr xi;
    Expr rho;
};

[[nodiscard]] inline GHElement corresponding_heat_operator(const GBElement& e, const Rational& mu)
{
    return {e.c, mu};
}

/// tau = c0 + 2 c1 t + c2 t^2, xi = c1 x + c2 t x + c3 + c4 t,
/// rho = c2 (x^2/4 - t/2) + c4 x / 2 - mu.
[[nodiscard]] inline HeatVectorField as_heat_vector_field(const GHElement& h)
{
    using vars::t;
    using vars::x;
    const VectorField base = as_vector_field(GBElement{h.c});
    const Expr rho = make_sum({Expr(h.c[2]) * (Expr(rational(1, 4)) * pow(x(), 2) - Expr(rational(1, 2)) * t()),
                               Expr(Rational(h.c[4] / 2)) * x(), Expr(Rational(-h.mu))});
    return {base.tau, base.xi, simplify(rho)};
}

/// Hatted names, e.g. "D^ - I^".
[[nodiscard]] inline std::string describe(const GHElement& h)
{
    std::string out = detail::combination(h.c, {"P_t^", "D^", "K^", "P_x^", "G^"});
    if (h.mu == 0) return out;
    const bool neg = h.mu < 0;
    const Rational m = neg ? Rational(-h.mu) : h.mu;
    const std::string term = (m == 1 ? std::string() : to_string(m) + "*") + "I^";
    if (out == "0") return (neg ? "" : "-") + term;
    return out + (neg ? " + " : " - ") + term;
}

/// Characteristic rho v - tau v_t - xi v_x of the heat-algebra field.
[[nodiscard]] inline Expr heat_characteristic(const GHElement& h, const Expr& v)
{
    const HeatVectorField f = as_heat_vector_field(h);
    return f.rho * v - f.tau * diff(v, Var::t) - f.xi * diff(v, Var::x);
}

/// Characteristic eta - tau u_t - xi u_x of an algebra element on u(t, x).
[[nodiscard]] inline Expr burgers_characteristic(const GBElement& e, const Expr& u)
{
    const VectorField f = as_vector_field(e);
    return substitute(f.eta, Var::u, u) - substitute(f.tau, Var::u, u) * diff(u, Var::t) -
           substitute(f.xi, Var::u, u) * diff(u, Var::x);
}

enum class Prop2Verdict : std::uint8_t { BothInvariant, BothNonInvariant, Mismatch, Inconclusive };

[[nodiscard]] inline const char* verdict_name(Prop2Verdict v)
{
    switch (v) {
        case Prop2Verdict::BothInvariant: return "both-invariant";
        case Prop2Verdict::BothNonInvariant: return "both-non-invariant";
        case Prop2Verdict::Mismatch: return "mismatch";
        case Prop2Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct Prop2Report {
    VerificationReport heat_side;      // heat-algebra characteristic on v
    VerificationReport burgers_side;   // Q[u] for u = 2 v_x / v
    Prop2Verdict verdict = Prop2Verdict::Inconclusive;

    [[nodiscard]] bool consistent() const
    {
        return verdict == Prop2Verdict::BothInvariant || verdict == Prop2Verdict::BothNonInvariant;
    }
};

inline constexpr double kProp2Small = 1e-8;
inline constexpr double kProp2Large = 1e-2;

/// Samples both sides of the correspondence: v is invariant under the heat
/// field with constant mu iff u = 2 v_x / v is invariant under e.
[[nodiscard]] inline Prop2Report check_proposition2(const Expr& v, const GBElement& e, const Rational& mu,
                                                    const Grid& grid)
{
    if (zero_test(v) == ZeroTest::Zero) throw DegenerateInputError("v vanishes identically");
    const GHElement h = corresponding_heat_operator(e, mu);
    const Expr u = simplify(Expr(2) * diff(v, Var::x) / v);
    Prop2Report r;
    r.heat_side = run_residual(heat_characteristic(h, v), grid, kProp2Small);
    r.burgers_side = run_residual(burgers_characteristic(e, u), grid, kProp2Small);
    const auto small = [](const VerificationReport& x) { return x.max_abs_residual <= kProp2Small; };
    const auto large = [](const VerificationReport& x) { return x.max_abs_residual >= kProp2Large; };
    if (r.heat_side.status == Status::Inconclusive || r.burgers_side.status == Status::Inconclusive) {
        r.verdict = Prop2Verdict::Inconclusive;
    } else if (small(r.heat_side) && small(r.burgers_side)) {
        r.verdict = Prop2Verdict::BothInvariant;
    } else if (large(r.heat_side) && large(r.burgers_side)) {
        r.verdict = Prop2Verdict::BothNonInvariant;
    } else {
        r.verdict = Prop2Verdict::Mismatch;
    }
    return r;
}

/// Point transformation of the Burgers equation:
///   t~ = (alpha t + beta)/(gamma t + delta),  x~ = (kappa x + mu1 t + mu0)/(gamma t + delta),
///   u~ = (kappa (gamma t + delta) u - kappa gamma x + mu1 delta - mu0 gamma)/(alpha delta - beta gamma),
/// with alpha delta - beta gamma = kappa^2 > 0.
struct PointTransformation {
    Rational alpha = 1;
    Rational beta = 0;
    Rational gamma = 0;
    Rational delta = 1;
    Rational kappa = 1;
    Rational mu0 = 0;
    Rational mu1 = 0;

    void validate() const
    {
        const Rational det = alpha * delta - beta * gamma;
        if (kappa == 0 || det != kappa * kappa)
            throw UsageError("point transformation needs alpha*delta - beta*gamma = kappa^2 > 0 (got " +
                             to_string(det) + " vs kappa^2 = " + to_string(Rational(kappa * kappa)) + ")");
    }
};

/// Image of a solution, written as a function of the new variables (named t, x).
[[nodiscard]] inline BurgersSolution apply_point_transformation(const PointTransformation& g,
                                                                const BurgersSolution& s)
{
    g.validate();
    using vars::t;
    using vars::x;
    const Expr k(g.kappa);
    const Rational det = g.alpha * g.delta - g.beta * g.gamma;
    const Expr den = Expr(g.alpha) - Expr(g.gamma) * t();
    const Expr t_old = (Expr(g.delta) * t() - Expr(g.beta)) / den;
    const Expr scale = Expr(det) / den;   // gamma t_old + delta
    const Expr x_old = (x() * scale - Expr(g.mu1) * t_old - Expr(g.mu0)) / k;
    const std::array<const Expr*, 3> repl{&t_old, &x_old, nullptr};
    const Expr u_old = substitute(s.u, repl);
    const Expr image =
        (k * scale * u_old - k * Expr(g.gamma) * x_old + Expr(Rational(g.mu1 * g.delta - g.mu0 * g.gamma))) /
        Expr(det);
    BurgersSolution out = s;
    out.u = simplify(image);
    out.singular_locus_hint = s.singular_locus_hint == "none" && g.gamma == 0
                                  ? "none"
                                  : "image of: " + s.singular_locus_hint + (g.gamma == 0 ? "" : "; t = alpha/gamma");
    return out;
}

} // namespace redop
