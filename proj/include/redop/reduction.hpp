#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "redop/burgers.hpp"
#include "redop/errors.hpp"
#include "redop/expr.hpp"
#include "redop/heat.hpp"
#include "redop/verify.hpp"

namespace redop {

enum class OperatorClass : std::uint8_t { Singular, Trivial, LieCase, NoGo };

[[nodiscard]] inline const char* class_name(OperatorClass c)
{
    switch (c) {
        case OperatorClass::Singular: return "singular";
        case OperatorClass::Trivial: return "trivial";
        case OperatorClass::LieCase: return "lie";
        case OperatorClass::NoGo: return "nogo";
    }
    return "?";
}

[[nodiscard]] inline OperatorClass class_from_name(std::string_view name)
{
    if (name == "singular") return OperatorClass::Singular;
    if (name == "trivial") return OperatorClass::Trivial;
    if (name == "lie") return OperatorClass::LieCase;
    if (name == "nogo") return OperatorClass::NoGo;
    throw UsageError("unknown operator class '" + std::string(name) + "'");
}

/// Q = tau d_t + xi d_x + eta d_u with xi = xi1 u + xi0 and
/// eta = eta_0 + eta_1 u + eta_2 u^2 + eta_3 u^3, or a general eta(t,x,u)
/// for the singular class.
struct ReductionOperator {
    OperatorClass cls = OperatorClass::Trivial;
    int tau = 1;
    std::optional<Rational> xi1;             // none for the singular class (xi = 1)
    Expr xi0 = Expr(0);
    std::vector<Expr> eta_coeffs;            // powers u^0 .. u^k
    std::optional<Expr> eta_general;         // singular class
    std::optional<std::array<Rational, 5>> lie_constants;

    [[nodiscard]] Expr xi() const
    {
        if (!xi1) return xi0;
        return Expr(*xi1) * vars::u() + xi0;
    }

    [[nodiscard]] Expr eta() const
    {
        if (eta_general) return *eta_general;
        std::vector<Expr> terms;
        for (std::size_t k = 0; k < eta_coeffs.size(); ++k)
            terms.push_back(eta_coeffs[k] * pow(vars::u(), static_cast<int>(k)));
        return make_sum(std::move(terms));
    }
};

struct NogoCoefficients {
    Expr xi0;
    Expr eta1;
    Expr eta0;
};

/// Coefficients of the no-go operator from a heat triple:
/// xi0 = W_x / W, eta1 = |v, v_xx, v_xxx| / W, eta0 = -2 |v_x, v_xx, v_xxx| / W.
[[nodiscard]] inline NogoCoefficients nogo_from_heat_triple(const HeatTriple& triple)
{
    const auto v = triple.exprs();
    const auto v1 = x_derivatives(v, 1);
    const auto v2 = x_derivatives(v, 2);
    const auto v3 = x_derivatives(v, 3);
    const Expr& w = triple.wronskian;
    if (zero_test(w) == ZeroTest::Zero) throw LinearDependenceError("Wronskian vanishes identically");
    return {simplify(diff(w, Var::x) / w), simplify(det3(v, v2, v3) / w),
            simplify(Expr(-2) * det3(v1, v2, v3) / w)};
}

/// The columns e, u, y, z of the Burgers-side representation.
struct BurgersColumns {
    std::array<Expr, 3> e{Expr(1), Expr(1), Expr(1)};
    std::array<Expr, 3> u;
    std::array<Expr, 3> y;   // 2 u_x + u^2
    std::array<Expr, 3> z;   // 4 u_xx + 6 u u_x + u^3
};

[[nodiscard]] inline BurgersColumns burgers_columns(const std::array<Expr, 3>& u)
{
    BurgersColumns c;
    for (int i = 0; i < 3; ++i) {
        const Expr ux = diff(u[i], Var::x);
        c.u[i] = u[i];
        c.y[i] = Expr(2) * ux + pow(u[i], 2);
        c.z[i] = Expr(4) * diff(u[i], Var::x, 2) + Expr(6) * u[i] * ux + pow(u[i], 3);
    }
    return c;
}

/// Same coefficients from three Burgers solutions:
/// xi0 = |e,u,z| / 2D, eta1 = |e,y,z| / 4D, eta0 = -|u,y,z| / 4D with D = |e,u,y|.
[[nodiscard]] inline NogoCoefficients nogo_from_burgers_triple(const std::array<Expr, 3>& u)
{
    const BurgersColumns c = burgers_columns(u);
    const Expr d = simplify(det3(c.e, c.u, c.y));
    if (zero_test(d) == ZeroTest::Zero) throw LinearDependenceError("determinant |e, u, y| vanishes identically");
    const Expr half = Expr(rational(1, 2));
    const Expr quarter = Expr(rational(1, 4));
    return {simplify(half * det3(c.e, c.u, c.z) / d), simplify(quarter * det3(c.e, c.y, c.z) / d),
            simplify(-quarter * det3(c.u, c.y, c.z) / d)};
}

[[nodiscard]] inline NogoCoefficients nogo_from_burgers_triple(const BurgersSolution& a, const BurgersSolution& b,
                                                               const BurgersSolution& c)
{
    return nogo_from_burgers_triple({a.u, b.u, c.u});
}

/// Q = d_t + (-u/2 + xi0) d_x + (u^3/4 - xi0 u^2/2 + eta1 u + eta0) d_u.
[[nodiscard]] inline ReductionOperator assemble_nogo(const NogoCoefficients& k)
{
    ReductionOperator q;
    q.cls = OperatorClass::NoGo;
    q.tau = 1;
    q.xi1 = rational(-1, 2);
    q.xi0 = k.xi0;
    q.eta_coeffs = {k.eta0, k.eta1, simplify(-k.xi0 / Expr(2)), Expr(rational(1, 4))};
    return q;
}

/// Q = d_t + u d_x.
[[nodiscard]] inline ReductionOperator trivial_operator()
{
    ReductionOperator q;
    q.cls = OperatorClass::Trivial;
    q.tau = 1;
    q.xi1 = Rational(1);
    return q;
}

/// Q = d_t + ((c2 t + c1) x + c4 t + c3)/Dn d_x + (-(c2 t + c1) u + c2 x + c4)/Dn d_u,
/// Dn = c2 t^2 + 2 c1 t + c0.
[[nodiscard]] inline ReductionOperator lie_case_operator(const std::array<Rational, 5>& c)
{
    if (c[0] == 0 && c[1] == 0 && c[2] == 0)
        throw UsageError("lie-case constants need (c0, c1, c2) != (0, 0, 0)");
    using vars::t;
    using vars::x;
    const Expr dn = simplify(Expr(c[2]) * pow(t(), 2) + Expr(Rational(2 * c[1])) * t() + Expr(c[0]));
    const Expr s = Expr(c[2]) * t() + Expr(c[1]);
    ReductionOperator q;
    q.cls = OperatorClass::LieCase;
    q.tau = 1;
    q.xi1 = Rational(0);
    q.xi0 = simplify((s * x() + Expr(c[4]) * t() + Expr(c[3])) / dn);
    q.eta_coeffs = {simplify((Expr(c[2]) * x() + Expr(c[4])) / dn), simplify(-s / dn)};
    q.lie_constants = c;
    return q;
}

/// Singular operator Q = d_x - (Phi_x / Phi_u) d_u of the family Phi(t, x, u) = kappa.
[[nodiscard]] inline ReductionOperator singular_operator(const Expr& phi)
{
    const Expr pu = diff(phi, Var::u);
    if (zero_test(pu) == ZeroTest::Zero) throw DegenerateInputError("Phi_u vanishes identically");
    ReductionOperator q;
    q.cls = OperatorClass::Singular;
    q.tau = 0;
    q.xi0 = Expr(1);
    q.eta_general = simplify(-diff(phi, Var::x) / pu);
    return q;
}

inline constexpr double kDeterminingTolerance = 1e-9;

/// eta_t + u eta_x + eta^2 + eta_xx + 2 eta eta_xu + eta^2 eta_uu.
[[nodiscard]] inline Expr singular_determining_expr(const Expr& eta)
{
    using vars::u;
    const Expr ex = diff(eta, Var::x);
    return diff(eta, Var::t) + u() * ex + pow(eta, 2) + diff(eta, Var::x, 2) +
           Expr(2) * eta * diff(ex, Var::u) + pow(eta, 2) * diff(eta, Var::u, 2);
}

[[nodiscard]] inline VerificationReport singular_determining_residual(const Expr& eta, const Grid3D& grid,
                                                                      double tolerance = kDeterminingTolerance)
{
    return run_residual(singular_determining_expr(eta), grid, tolerance);
}

/// Residuals R1, R2, R3 of the no-go determining system.
[[nodiscard]] inline std::array<Expr, 3> nogo_determining_exprs(const NogoCoefficients& k)
{
    const Expr xx = diff(k.xi0, Var::x);
    return {
        diff(k.xi0, Var::t) + Expr(2) * k.xi0 * xx + diff(k.xi0, Var::x, 2) - Expr(2) * diff(k.eta1, Var::x),
        diff(k.eta1, Var::t) + Expr(2) * xx * k.eta1 + diff(k.eta1, Var::x, 2) + diff(k.eta0, Var::x),
        diff(k.eta0, Var::t) + Expr(2) * xx * k.eta0 + diff(k.eta0, Var::x, 2),
    };
}

[[nodiscard]] inline VerificationReport nogo_determining_residual(const NogoCoefficients& k, const Grid& grid,
                                                                  double tolerance = kBurgersTolerance)
{
    const auto r = nogo_determining_exprs(k);
    return run_residuals(r, grid, tolerance);
}

/// The four equations of the regular (tau = 1) determining system.
[[nodiscard]] inline std::array<Expr, 4> general_determining_exprs(const Expr& xi, const Expr& eta)
{
    using vars::u;
    const Expr xu = diff(xi, Var::u);
    const Expr xx = diff(xi, Var::x);
    return {
        diff(xi, Var::u, 2),
        Expr(-2) * diff(xx, Var::u) - Expr(2) * xu * xi + Expr(2) * u() * xu + diff(eta, Var::u, 2),
        Expr(2) * diff(diff(eta, Var::x), Var::u) + Expr(2) * xu * eta + eta - diff(xi, Var::t) + u() * xx -
            diff(xi, Var::x, 2) - Expr(2) * xx * xi,
        diff(eta, Var::t) + u() * diff(eta, Var::x) + diff(eta, Var::x, 2) + Expr(2) * xx * eta,
    };
}

[[nodiscard]] inline VerificationReport general_determining_residual(const ReductionOperator& q, const Grid3D& grid,
                                                                     double tolerance = kDeterminingTolerance)
{
    if (q.tau != 1) throw UsageError("the regular determining system needs tau = 1");
    const auto r = general_determining_exprs(q.xi(), q.eta());
    return run_residuals(r, grid, tolerance);
}

/// v_xxx - xi0 v_xx + eta1 v_x + eta0 v / 2.
[[nodiscard]] inline Expr third_order_constraint_expr(const Expr& v, const NogoCoefficients& k)
{
    return diff(v, Var::x, 3) - k.xi0 * diff(v, Var::x, 2) + k.eta1 * diff(v, Var::x) +
           Expr(rational(1, 2)) * k.eta0 * v;
}

[[nodiscard]] inline VerificationReport third_order_constraint_residual(const Expr& v, const NogoCoefficients& k,
                                                                        const Grid& grid,
                                                                        double tolerance = kDeterminingTolerance)
{
    return run_residual(third_order_constraint_expr(v, k), grid, tolerance);
}

/// Characteristic eta - tau u_t - xi u_x with u = u(t, x) substituted.
[[nodiscard]] inline Expr invariant_surface_expr(const ReductionOperator& q, const Expr& u)
{
    const Expr eta = substitute(q.eta(), Var::u, u);
    const Expr xi = substitute(q.xi(), Var::u, u);
    return eta - Expr(q.tau) * diff(u, Var::t) - xi * diff(u, Var::x);
}

[[nodiscard]] inline VerificationReport invariant_surface_residual(const ReductionOperator& q, const Expr& u,
                                                                   const Grid& grid,
                                                                   double tolerance = kBurgersTolerance)
{
    return run_residual(invariant_surface_expr(q, u), grid, tolerance);
}

} // namespace redop
