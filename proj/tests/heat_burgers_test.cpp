#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "redop/burgers.hpp"
#include "redop/heat.hpp"

#include "oracles.hpp"

using namespace redop;
using vars::t;
using vars::x;

namespace {

// h_n = n! sum_k (-t)^k x^(n-2k) / (k! (n-2k)!), the coefficient of a^n/n! in
// exp(a x - a^2 t).
std::map<std::array<int, 3>, Rational> heat_polynomial_oracle(int n)
{
    auto fact = [](int k) {
        Integer f = 1;
        for (int i = 2; i <= k; ++i) f *= i;
        return f;
    };
    std::map<std::array<int, 3>, Rational> out;
    for (int k = 0; 2 * k <= n; ++k) {
        Rational c(fact(n), fact(k) * fact(n - 2 * k));
        if (k % 2) c = -c;
        out[{k, n - 2 * k, 0}] = c;
    }
    return out;
}

} // namespace

TEST(HeatPolynomial, MatchesSeriesOracle)
{
    for (int n = 0; n <= kMaxHeatPolynomial; ++n) {
        const auto c = polynomial_coefficients(heat_polynomial(n).v);
        ASSERT_TRUE(c) << n;
        EXPECT_EQ(*c, heat_polynomial_oracle(n)) << "h" << n;
    }
    EXPECT_EQ(heat_polynomial(2).v, simplify(parse("x^2 - 2*t")));
    EXPECT_EQ(heat_polynomial(4).v, simplify(parse("x^4 - 12*t*x^2 + 12*t^2")));
    EXPECT_THROW((void)heat_polynomial(13), UsageError);
    EXPECT_THROW((void)heat_polynomial(-1), UsageError);
}

TEST(HeatPolynomial, GeneratingFunction)
{
    for (double a : {0.1, 0.2}) {
        for (const auto& [tv, xv] : std::vector<std::pair<double, double>>{{0.3, 0.7}, {1.0, -1.5}, {0.1, 2.0}}) {
            double sum = 0;
            double term = 1;
            for (int n = 0; n <= 6; ++n) {
                if (n > 0) term *= a / n;
                sum += term * oracle::h_value(n, tv, xv);
            }
            EXPECT_NEAR(sum, std::exp(a * xv - a * a * tv), 1e-6);
        }
    }
}

TEST(HeatCatalog, FamiliesAndExamples)
{
    EXPECT_EQ(exp_solution(0).v, Expr(1));
    EXPECT_TRUE(is_symbolic_zero(exp_solution(1).v - exp(x() - t())));
    EXPECT_TRUE(is_symbolic_zero(exp_solution(-1).v - exp(-x() - t())));
    EXPECT_TRUE(is_symbolic_zero(trig_solution(0, 0).v - Expr(1)));
    EXPECT_TRUE(is_symbolic_zero(trig_solution(1, 0).v - exp(t()) * cos(x())));
    EXPECT_EQ(heat_kernel().domain, TimeDomain::Negative);
    EXPECT_EQ(heat_from_label("trig(2, 157/100)").label, "trig(2,157/100)");
    EXPECT_THROW((void)heat_from_label("h13"), UsageError);
    EXPECT_THROW((void)heat_from_label("q(1)"), UsageError);
    EXPECT_EQ(heat_from_text("x^2 - 2*t").v, parse("x^2 - 2*t"));
}

TEST(HeatCatalog, EveryMemberValidates)
{
    for (const auto& h : heat_catalog()) {
        const VerificationReport r = validate_heat(h);
        EXPECT_TRUE(r.passed) << h.label << " max " << r.max_abs_residual;
        EXPECT_LE(r.max_abs_residual, kHeatTolerance);
        if (h.label != "kernel") {
            EXPECT_TRUE(r.symbolic_zero) << h.label;
        }
    }
}

TEST(ValidateHeat, Examples)
{
    const Grid g;
    EXPECT_TRUE(validate_heat(parse("x^2 - 2*t"), g).passed);
    const VerificationReport bad = validate_heat(parse("x^2"), g);
    EXPECT_FALSE(bad.passed);
    EXPECT_DOUBLE_EQ(bad.max_abs_residual, 2.0);
    EXPECT_TRUE(validate_heat(exp(x() - t()), g).passed);
    EXPECT_THROW((void)validate_heat(vars::u(), g), UsageError);
}

TEST(Wronskian, Examples)
{
    EXPECT_EQ(make_triple("h0,h1,h2").wronskian, Expr(2));
    EXPECT_TRUE(is_symbolic_zero(make_triple("h0,h1,e(1)").wronskian - exp(x() - t())));
    const HeatSolution dep{parse("2*x + 3"), "2x+3"};
    EXPECT_THROW((void)make_triple(heat_polynomial(0), heat_polynomial(1), dep), LinearDependenceError);
    EXPECT_THROW((void)make_triple("h1,h1,h2"), LinearDependenceError);
}

TEST(Wronskian, MatchesNumericDeterminant)
{
    const std::vector<std::pair<std::string, std::array<oracle::Column, 3>>> cases{
        {"h1,h2,h3", {oracle::poly(1), oracle::poly(2), oracle::poly(3)}},
        {"h0,e(1),e(-1)", {oracle::poly(0), oracle::exponential(1), oracle::exponential(-1)}},
        {"h2,e(1),trig(2,0)", {oracle::poly(2), oracle::exponential(1), oracle::trig(2, 0)}},
        {"e(1/2),h1,trig(1,1/2)", {oracle::exponential(0.5), oracle::poly(1), oracle::trig(1, 0.5)}},
    };
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dt(0.1, 1.0);
    std::uniform_real_distribution<double> dx(-2.0, 2.0);
    for (const auto& [labels, cols] : cases) {
        const HeatTriple tr = make_triple(labels);
        const CompiledExpr w(tr.wronskian);
        for (int i = 0; i < 20; ++i) {
            const double tv = dt(rng);
            const double xv = dx(rng);
            const double want = oracle::det(cols, tv, xv, {0, 1, 2});
            EXPECT_NEAR(w.run({tv, xv, std::nullopt}).value, want, 1e-9 * (1 + std::abs(want))) << labels;
        }
    }
}

TEST(HopfCole, Examples)
{
    EXPECT_EQ(hopf_cole(heat_polynomial(0)).u, Expr(0));
    EXPECT_EQ(hopf_cole(exp_solution(1)).u, Expr(2));
    EXPECT_TRUE(is_symbolic_zero(hopf_cole(heat_polynomial(2)).u - parse("4*x/(x^2 - 2*t)")));
    EXPECT_THROW((void)hopf_cole(HeatSolution{Expr(0), "0"}), DegenerateInputError);
    const BurgersSolution s = hopf_cole(heat_polynomial(2));
    EXPECT_EQ(s.provenance.kind, Provenance::Kind::HopfCole);
    EXPECT_EQ(s.provenance.source, "h2");
}

TEST(HopfCole, CatalogImagesSolveBurgers)
{
    for (const auto& h : heat_catalog()) {
        const BurgersSolution s = hopf_cole(h);
        const VerificationReport r = burgers_residual(s);
        EXPECT_TRUE(r.passed) << h.label << " " << r.max_abs_residual;
    }
}

TEST(BurgersResidual, Examples)
{
    Grid avoid;
    avoid.exclusion_threshold = 1e-3;
    EXPECT_TRUE(burgers_residual(parse("4*x/(x^2 - 2*t)"), avoid).passed);
    const VerificationReport lin = burgers_residual(x(), Grid{});
    EXPECT_FALSE(lin.passed);
    EXPECT_DOUBLE_EQ(lin.max_abs_residual, 2.0);
    EXPECT_TRUE(burgers_residual(Expr(0), Grid{}).passed);
    EXPECT_THROW((void)burgers_residual(vars::u(), Grid{}), UsageError);
}

TEST(InvariantFamily, Examples)
{
    const HeatTriple tr = make_triple("h0,h1,h2");
    EXPECT_TRUE(is_symbolic_zero(invariant_family(tr, {0, 0, 1}).u - parse("4*x/(x^2 - 2*t)")));
    EXPECT_EQ(invariant_family(tr, {1, 0, 0}).u, Expr(0));
    EXPECT_THROW((void)invariant_family(tr, {0, 0, 0}), UsageError);

    const BurgersSolution th = invariant_family(make_triple("h0,e(1),e(-1)"), {0, 1, 1});
    EXPECT_TRUE(burgers_residual(th).passed);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> dx(-2.0, 2.0);
    for (int i = 0; i < 20; ++i) {
        const double xv = dx(rng);
        EXPECT_NEAR(eval(th.u, {0.5, xv, std::nullopt}), 2 * std::tanh(xv), 1e-12);
    }
    EXPECT_EQ(th.provenance.kind, Provenance::Kind::InvariantFamily);
    EXPECT_EQ(th.provenance.constants.size(), 3u);
}

TEST(ClosedForms, LieRationalAndLinearAnsatz)
{
    EXPECT_TRUE(is_symbolic_zero(lie_rational_solution(1, 0).u - x() / (t() + Expr(1))));
    EXPECT_TRUE(is_symbolic_zero(lie_rational_solution(0, 5).u - (x() + Expr(5)) / t()));
    EXPECT_TRUE(is_symbolic_zero(q1_linear_ansatz_solution(0, 0).u - x() / t()));
    EXPECT_TRUE(is_symbolic_zero(q1_linear_ansatz_solution(2, 3).u - (x() + Expr(3)) / (t() + Expr(2))));
    for (const auto& s : {lie_rational_solution(1, 0), lie_rational_solution(0, 5), q1_linear_ansatz_solution(2, 3),
                          q1_constant_solution(rational(-7, 3))})
        EXPECT_TRUE(burgers_residual(s).symbolic_zero) << to_string(s.u);
    const Expr alpha = Expr(1) / (t() + Expr(2));
    for (const auto& r : q1_reduced_system(alpha, Expr(3) * alpha)) EXPECT_TRUE(is_symbolic_zero(r));
    for (const auto& r : q1_reduced_system(Expr(0), Expr(4))) EXPECT_TRUE(is_symbolic_zero(r));
    EXPECT_FALSE(is_symbolic_zero(q1_reduced_system(t(), Expr(0))[0]));
}

TEST(AnsatzIntegrals, AffineRelation)
{
    const HeatTriple tr = make_triple("h0,h1,h2");
    const BurgersSolution u = invariant_family(tr, {1, 1, 0});
    const AnsatzIntegrals zw = ansatz_integrals(tr, u.u);
    const AffineFit fit = fit_affine(zw, Grid{}, 20, 42);
    EXPECT_GE(fit.samples, 20u);
    EXPECT_LE(fit.max_residual, 1e-9);
    // c1 zeta + c2 omega + c3 = 0 with c = (1, 1, 0): zeta = -omega.
    EXPECT_FALSE(fit.swapped);
    EXPECT_NEAR(fit.A, -1.0, 1e-9);
    EXPECT_NEAR(fit.B, 0.0, 1e-9);
}

TEST(AnsatzIntegrals, RecoversFamilyConstants)
{
    const HeatTriple tr = make_triple("h0,e(1),trig(1,0)");
    const BurgersSolution u = invariant_family(tr, {2, -1, 3});
    const AffineFit fit = fit_affine(ansatz_integrals(tr, u.u), Grid{}, 24, 1);
    ASSERT_FALSE(fit.swapped);
    EXPECT_NEAR(fit.A, 0.5, 1e-8);    // -c2/c1
    EXPECT_NEAR(fit.B, -1.5, 1e-8);   // -c3/c1
}

TEST(AnsatzIntegrals, GenericityViolation)
{
    const HeatTriple tr = make_triple("h0,h1,h2");
    EXPECT_THROW((void)ansatz_integrals(tr, hopf_cole(heat_polynomial(2)).u), GenericityError);
}
