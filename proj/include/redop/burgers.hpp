#pragma once

#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "redop/errors.hpp"
#include "redop/expr.hpp"
#include "redop/heat.hpp"
#include "redop/verify.hpp"

namespace redop {

struct Provenance {
    enum class Kind : std::uint8_t { HopfCole, InvariantFamily, ClosedForm };
    Kind kind = Kind::ClosedForm;
    std::string source;                  // heat label (HopfCole) or family name (ClosedForm)
    std::vector<std::string> triple;     // InvariantFamily
    std::vector<Rational> constants;     // InvariantFamily c1..c3, ClosedForm parameters
};

[[nodiscard]] inline const char* provenance_name(Provenance::Kind k)
{
    switch (k) {
        case Provenance::Kind::HopfCole: return "hopf-cole";
        case Provenance::Kind::InvariantFamily: return "invariant-family";
        case Provenance::Kind::ClosedForm: return "closed-form";
    }
    return "?";
}

/// A solution of u_t + u u_x + u_xx = 0.
struct BurgersSolution {
    Expr u;
    Provenance provenance;
    std::string singular_locus_hint = "none";
    TimeDomain domain = TimeDomain::Positive;
};

inline constexpr double kBurgersTolerance = 1e-8;

/// L[u] = u_t + u u_x + u_xx.
[[nodiscard]] inline Expr burgers_operator(const Expr& u)
{
    return diff(u, Var::t) + u * diff(u, Var::x) + diff(u, Var::x, 2);
}

[[nodiscard]] inline VerificationReport burgers_residual(const Expr& u, const Grid& grid,
                                                         double tolerance = kBurgersTolerance)
{
    if (depends_on(u, Var::u)) throw UsageError("a Burgers solution depends on t and x only");
    return run_residual(burgers_operator(u), grid, tolerance);
}

[[nodiscard]] inline VerificationReport burgers_residual(const BurgersSolution& s,
                                                         double tolerance = kBurgersTolerance)
{
    return burgers_residual(s.u, Grid::standard(s.domain), tolerance);
}

namespace detail {

inline std::string zero_set_hint(const Expr& denominator)
{
    if (denominator.is_constant()) return "none";
    return "zero set of " + to_string(denominator);
}

} // namespace detail

/// u = 2 v_x / v.
[[nodiscard]] inline BurgersSolution hopf_cole(const HeatSolution& v)
{
    if (zero_test(v.v) == ZeroTest::Zero) throw DegenerateInputError("Hopf-Cole image of v = 0 is undefined");
    BurgersSolution s;
    s.u = simplify(Expr(2) * diff(v.v, Var::x) / v.v);
    s.provenance = {Provenance::Kind::HopfCole, v.label, {}, {}};
    s.domain = v.domain;
    s.singular_locus_hint = detail::zero_set_hint(simplify(v.v));
    if (v.singular_locus_hint != "none") s.singular_locus_hint += "; " + v.singular_locus_hint;
    return s;
}

/// u = 2 (c1 v1_x + c2 v2_x + c3 v3_x) / (c1 v1 + c2 v2 + c3 v3).
[[nodiscard]] inline BurgersSolution invariant_family(const HeatTriple& triple, const std::array<Rational, 3>& c)
{
    if (c[0] == 0 && c[1] == 0 && c[2] == 0) throw UsageError("family constants must not all vanish");
    std::vector<Expr> num;
    std::vector<Expr> den;
    for (int i = 0; i < 3; ++i) {
        if (c[i] == 0) continue;
        num.push_back(Expr(c[i]) * diff(triple.v[i].v, Var::x));
        den.push_back(Expr(c[i]) * triple.v[i].v);
    }
    const Expr d = simplify(make_sum(den));
    if (zero_test(d) == ZeroTest::Zero) throw DegenerateInputError("family denominator vanishes identically");
    BurgersSolution s;
    s.u = simplify(Expr(2) * make_sum(num) / d);
    s.provenance.kind = Provenance::Kind::InvariantFamily;
    for (const auto& h : triple.v) s.provenance.triple.push_back(h.label);
    s.provenance.constants.assign(c.begin(), c.end());
    s.domain = triple.domain;
    s.singular_locus_hint = detail::zero_set_hint(d);
    return s;
}

/// u = (x + c1) / (t + c0).
[[nodiscard]] inline BurgersSolution lie_rational_solution(const Rational& c0, const Rational& c1)
{
    using vars::t;
    using vars::x;
    BurgersSolution s;
    s.u = (x() + Expr(c1)) / (t() + Expr(c0));
    s.provenance = {Provenance::Kind::ClosedForm, "lie-rational", {}, {c0, c1}};
    s.singular_locus_hint = "t = " + to_string(Rational(-c0));
    return s;
}

/// Reduced system of the ansatz u = alpha(t) x + beta(t):
/// alpha_t + alpha^2 = 0, beta_t + alpha beta = 0.
[[nodiscard]] inline std::array<Expr, 2> q1_reduced_system(const Expr& alpha, const Expr& beta)
{
    return {diff(alpha, Var::t) + alpha * alpha, diff(beta, Var::t) + alpha * beta};
}

/// Closed-form solution alpha = 1/(t+c0), beta = c1/(t+c0) of the reduced
/// system, returned as u = alpha x + beta.
[[nodiscard]] inline BurgersSolution q1_linear_ansatz_solution(const Rational& c0, const Rational& c1)
{
    using vars::t;
    using vars::x;
    const Expr alpha = Expr(1) / (t() + Expr(c0));
    const Expr beta = Expr(c1) / (t() + Expr(c0));
    BurgersSolution s;
    s.u = simplify(alpha * x() + beta);
    s.provenance = {Provenance::Kind::ClosedForm, "q1-linear-ansatz", {}, {c0, c1}};
    s.singular_locus_hint = "t = " + to_string(Rational(-c0));
    return s;
}

/// Branch alpha = 0 of the reduced system: the constant solutions u = c.
[[nodiscard]] inline BurgersSolution q1_constant_solution(const Rational& c)
{
    BurgersSolution s;
    s.u = Expr(c);
    s.provenance = {Provenance::Kind::ClosedForm, "q1-constant", {}, {c}};
    return s;
}

struct AnsatzIntegrals {
    Expr zeta;
    Expr omega;
};

/// zeta = (v1 u - 2 v1_x)/(v3 u - 2 v3_x), omega = (v2 u - 2 v2_x)/(v3 u - 2 v3_x).
[[nodiscard]] inline AnsatzIntegrals ansatz_integrals(const HeatTriple& triple, const Expr& u)
{
    auto part = [&](int i) { return triple.v[i].v * u - Expr(2) * diff(triple.v[i].v, Var::x); };
    const Expr den = part(2);
    if (zero_test(den) == ZeroTest::Zero)
        throw GenericityError("u coincides with 2 v3_x / v3; renumber the triple");
    return {simplify(part(0) / den), simplify(part(1) / den)};
}

/// Affine relation dependent = A * independent + B fitted through sample
/// points. `swapped` means zeta was taken as the independent variable.
struct AffineFit {
    double A = 0.0;
    double B = 0.0;
    bool swapped = false;
    double max_residual = 0.0;
    std::size_t samples = 0;
    std::vector<Point> points;
};

/// Samples `count` points of the grid box (seeded, uniform) at which zeta and
/// omega evaluate with all denominators above `threshold`, finds the null
/// vector of [zeta omega 1] and reports max |zeta - A omega - B| (or the
/// swapped form when zeta's coefficient is the smaller one).
[[nodiscard]] inline AffineFit fit_affine(const AnsatzIntegrals& zw, const Grid& grid, std::size_t count = 24,
                                          std::uint64_t seed = 1, double threshold = 1e-3)
{
    if (count < 3) throw UsageError("an affine fit needs at least 3 samples");
    grid.validate();
    const CompiledExpr zeta(zw.zeta);
    const CompiledExpr omega(zw.omega);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dt(grid.t.min, grid.t.max);
    std::uniform_real_distribution<double> dx(grid.x.min, grid.x.max);
    std::vector<std::array<double, 2>> values;
    AffineFit fit;
    for (std::size_t attempt = 0; values.size() < count && attempt < 100 * count; ++attempt) {
        const Point p{dt(rng), dx(rng), std::nullopt};
        const EvalOutcome z = zeta.run(p, threshold);
        const EvalOutcome w = omega.run(p, threshold);
        if (z.status != EvalStatus::Ok || w.status != EvalStatus::Ok) continue;
        values.push_back({z.value, w.value});
        fit.points.push_back(p);
    }
    if (values.size() < count) throw DegenerateInputError("too few non-singular sample points for the fit");
    Eigen::MatrixXd m(values.size(), 3);
    for (std::size_t i = 0; i < values.size(); ++i) m.row(static_cast<Eigen::Index>(i)) << values[i][0], values[i][1], 1.0;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const Eigen::Vector3d n = svd.matrixV().col(2);
    fit.swapped = std::abs(n[0]) < std::abs(n[1]);
    const double lead = fit.swapped ? n[1] : n[0];
    fit.A = -(fit.swapped ? n[0] : n[1]) / lead;
    fit.B = -n[2] / lead;
    fit.samples = values.size();
    for (const auto& [z, w] : values) {
        const double r = fit.swapped ? std::abs(w - fit.A * z - fit.B) : std::abs(z - fit.A * w - fit.B);
        fit.max_residual = std::max(fit.max_residual, r);
    }
    return fit;
}

} // namespace redop
