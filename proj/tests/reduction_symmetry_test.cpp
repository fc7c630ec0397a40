#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <functional>
#include <random>

#include "redop/burgers.hpp"
#include "redop/heat.hpp"
#include "redop/reduction.hpp"
#include "redop/symmetry.hpp"

#include "oracles.hpp"

using namespace redop;
using vars::t;
using vars::u;
using vars::x;

namespace {

void expect_zero(const Expr& e, const std::string& what = {})
{
    EXPECT_EQ(zero_test(e), ZeroTest::Zero) << what << ": " << to_string(simplify(e));
}

const Grid3D kGrid3 = Grid3D::standard();

// The basis of the algebra written out by hand, as (tau, xi, eta) at (t, x, u).
using Field = std::function<Eigen::Vector3d(const Eigen::Vector3d&)>;

const std::array<Field, 5> kFields{
    [](const Eigen::Vector3d&) { return Eigen::Vector3d(1, 0, 0); },
    [](const Eigen::Vector3d& p) { return Eigen::Vector3d(2 * p[0], p[1], -p[2]); },
    [](const Eigen::Vector3d& p) { return Eigen::Vector3d(p[0] * p[0], p[0] * p[1], p[1] - p[2] * p[0]); },
    [](const Eigen::Vector3d&) { return Eigen::Vector3d(0, 1, 0); },
    [](const Eigen::Vector3d& p) { return Eigen::Vector3d(0, p[0], 1); },
};

Eigen::Matrix3d jacobian(const Field& f, const Eigen::Vector3d& p)
{
    Eigen::Matrix3d j;
    const double h = 1e-5;
    for (int k = 0; k < 3; ++k) {
        Eigen::Vector3d e = Eigen::Vector3d::Zero();
        e[k] = h;
        j.col(k) = (f(p + e) - f(p - e)) / (2 * h);
    }
    return j;
}

} // namespace

TEST(NogoCoefficients, Examples)
{
    const NogoCoefficients a = nogo_from_heat_triple(make_triple("h0,h1,h2"));
    EXPECT_EQ(a.xi0, Expr(0));
    EXPECT_EQ(a.eta1, Expr(0));
    EXPECT_EQ(a.eta0, Expr(0));
    const NogoCoefficients b = nogo_from_heat_triple(make_triple("h0,h1,e(1)"));
    EXPECT_EQ(b.xi0, Expr(1));
    EXPECT_EQ(b.eta1, Expr(0));
    EXPECT_EQ(b.eta0, Expr(0));
    const NogoCoefficients c = nogo_from_heat_triple(make_triple("h0,e(1),e(-1)"));
    EXPECT_EQ(c.xi0, Expr(0));
    EXPECT_EQ(c.eta1, Expr(-1));
    EXPECT_EQ(c.eta0, Expr(0));
}

// v_xxx = xi0 v_xx - eta1 v_x - eta0 v / 2 for each member of the triple: a
// 3x3 linear system for (xi0, eta1, eta0) solved numerically.
TEST(NogoCoefficients, MatchLinearSolveOracle)
{
    const std::vector<std::pair<std::string, std::array<oracle::Column, 3>>> cases{
        {"h1,h2,h3", {oracle::poly(1), oracle::poly(2), oracle::poly(3)}},
        {"h0,h2,h4", {oracle::poly(0), oracle::poly(2), oracle::poly(4)}},
        {"e(1),e(2),e(-1)", {oracle::exponential(1), oracle::exponential(2), oracle::exponential(-1)}},
        {"h1,trig(1,0),e(2)", {oracle::poly(1), oracle::trig(1, 0), oracle::exponential(2)}},
        {"h0,trig(1,0),trig(1,1/2)", {oracle::poly(0), oracle::trig(1, 0), oracle::trig(1, 0.5)}},
    };
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dt(0.1, 1.0);
    std::uniform_real_distribution<double> dx(-2.0, 2.0);
    for (const auto& [labels, cols] : cases) {
        const NogoCoefficients k = nogo_from_heat_triple(make_triple(labels));
        const CompiledExpr xi0(k.xi0), eta1(k.eta1), eta0(k.eta0);
        int checked = 0;
        for (int i = 0; i < 40 && checked < 15; ++i) {
            const double tv = dt(rng);
            const double xv = dx(rng);
            Eigen::Matrix3d m;
            Eigen::Vector3d rhs;
            for (int r = 0; r < 3; ++r) {
                m(r, 0) = cols[r].d(tv, xv, 2);
                m(r, 1) = -cols[r].d(tv, xv, 1);
                m(r, 2) = -0.5 * cols[r].d(tv, xv, 0);
                rhs[r] = cols[r].d(tv, xv, 3);
            }
            const Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
            if (std::abs(lu.determinant()) < 1e-3) continue;
            const Eigen::Vector3d sol = lu.solve(rhs);
            const Point p{tv, xv, std::nullopt};
            EXPECT_NEAR(xi0.run(p).value, sol[0], 1e-7 * (1 + std::abs(sol[0]))) << labels;
            EXPECT_NEAR(eta1.run(p).value, sol[1], 1e-7 * (1 + std::abs(sol[1]))) << labels;
            EXPECT_NEAR(eta0.run(p).value, sol[2], 1e-7 * (1 + std::abs(sol[2]))) << labels;
            ++checked;
        }
        EXPECT_GE(checked, 10) << labels;
    }
}

TEST(NogoCoefficients, BurgersRepresentationAgrees)
{
    for (const char* labels : {"h0,h1,h2", "h0,h1,e(1)", "h1,h2,h3", "h2,e(1),trig(2,0)"}) {
        const HeatTriple tr = make_triple(labels);
        const NogoCoefficients a = nogo_from_heat_triple(tr);
        const NogoCoefficients b =
            nogo_from_burgers_triple(hopf_cole(tr.v[0]), hopf_cole(tr.v[1]), hopf_cole(tr.v[2]));
        expect_zero(a.xi0 - b.xi0, labels);
        expect_zero(a.eta1 - b.eta1, labels);
        expect_zero(a.eta0 - b.eta0, labels);
    }
    const NogoCoefficients hc = nogo_from_burgers_triple({Expr(0), Expr(2) / x(), parse("4*x/(x^2 - 2*t)")});
    expect_zero(hc.xi0);
    const Expr two_over_x = Expr(2) / x();
    EXPECT_THROW((void)nogo_from_burgers_triple({Expr(0), two_over_x, two_over_x}), LinearDependenceError);
}

TEST(NogoOperator, AssembledShape)
{
    const ReductionOperator q0 = assemble_nogo({Expr(0), Expr(0), Expr(0)});
    expect_zero(q0.xi() + u() / Expr(2));
    expect_zero(q0.eta() - pow(u(), 3) / Expr(4));
    const ReductionOperator q1 = assemble_nogo({Expr(1), Expr(0), Expr(0)});
    expect_zero(q1.xi() - (Expr(1) - u() / Expr(2)));
    expect_zero(q1.eta() - (pow(u(), 3) / Expr(4) - pow(u(), 2) / Expr(2)));
    const ReductionOperator q2 = assemble_nogo({Expr(0), Expr(-1), Expr(0)});
    expect_zero(q2.eta() - (pow(u(), 3) / Expr(4) - u()));
    EXPECT_EQ(q2.tau, 1);
    ASSERT_TRUE(q2.xi1);
    EXPECT_EQ(*q2.xi1, rational(-1, 2));
}

TEST(NogoOperator, DeterminingSystemExamples)
{
    const Grid g;
    EXPECT_TRUE(nogo_determining_residual({Expr(0), Expr(0), Expr(0)}, g).passed);
    EXPECT_TRUE(nogo_determining_residual({Expr(1), Expr(0), Expr(0)}, g).passed);
    const VerificationReport bad = nogo_determining_residual({x(), Expr(0), Expr(0)}, g);
    EXPECT_FALSE(bad.passed);
    EXPECT_DOUBLE_EQ(bad.max_abs_residual, 4.0);   // R1 = 2x on x in [-2, 2]
    const auto r = nogo_determining_exprs({x(), Expr(0), Expr(0)});
    expect_zero(r[0] - Expr(2) * x());
}

TEST(NogoOperator, ThirdOrderConstraint)
{
    const Grid g;
    EXPECT_TRUE(third_order_constraint_residual(parse("x^2 - 2*t"), {Expr(0), Expr(0), Expr(0)}, g).passed);
    EXPECT_TRUE(third_order_constraint_residual(exp(x() - t()), {Expr(1), Expr(0), Expr(0)}, g).passed);
    EXPECT_TRUE(third_order_constraint_residual(x(), {Expr(1), Expr(0), Expr(0)}, g).passed);
    for (const char* labels : {"h1,h2,h3", "h0,e(1),e(-1)", "e(1/2),h1,trig(1,1/2)"}) {
        const HeatTriple tr = make_triple(labels);
        const NogoCoefficients k = nogo_from_heat_triple(tr);
        for (const auto& v : tr.v) EXPECT_TRUE(third_order_constraint_residual(v.v, k, g).symbolic_zero) << v.label;
    }
}

TEST(NogoOperator, SatisfiesGeneralDeterminingSystem)
{
    const ReductionOperator q = assemble_nogo(nogo_from_heat_triple(make_triple("h0,h1,e(1)")));
    EXPECT_TRUE(general_determining_residual(q, kGrid3).passed);
}

TEST(NogoOperator, FamilyMembersAreInvariant)
{
    const HeatTriple tr = make_triple("h0,h1,h2");
    const ReductionOperator q = assemble_nogo(nogo_from_heat_triple(tr));
    for (const std::array<Rational, 3>& c : std::vector<std::array<Rational, 3>>{{1, 2, 3}, {0, 1, 0}, {-2, 0, 1}}) {
        const BurgersSolution s = invariant_family(tr, c);
        EXPECT_TRUE(invariant_surface_residual(q, s.u, Grid{}, 1e-9).passed) << to_string(s.u);
    }
}

TEST(TrivialOperator, InvariantSurface)
{
    const ReductionOperator q = trivial_operator();
    const Grid g;
    EXPECT_TRUE(invariant_surface_residual(q, x() / t(), g).passed);
    EXPECT_TRUE(invariant_surface_residual(q, Expr(3), g).passed);
    EXPECT_FALSE(invariant_surface_residual(q, Expr(2) / x(), g).passed);
    EXPECT_TRUE(general_determining_residual(q, kGrid3).symbolic_zero);
}

TEST(LieCaseOperator, Examples)
{
    const ReductionOperator pt = lie_case_operator({1, 0, 0, 0, 0});
    expect_zero(pt.xi());
    expect_zero(pt.eta());
    const ReductionOperator ptg = lie_case_operator({1, 0, 0, 0, 1});
    expect_zero(ptg.xi() - t());
    expect_zero(ptg.eta() - Expr(1));
    const ReductionOperator d = lie_case_operator({0, rational(1, 2), 0, 0, 0});
    expect_zero(d.xi() - x() / (Expr(2) * t()));
    expect_zero(d.eta() + u() / (Expr(2) * t()));
    EXPECT_THROW((void)lie_case_operator({0, 0, 0, 1, 1}), UsageError);
    for (const auto& q : {pt, ptg, d}) EXPECT_TRUE(general_determining_residual(q, kGrid3).passed);
}

TEST(LieCaseOperator, MatchesAlgebraElement)
{
    const std::array<Rational, 5> c{2, 1, 0, 3, -1};
    const auto e = lie_case_algebra_element(lie_case_operator(c));
    ASSERT_TRUE(e);
    EXPECT_EQ(e->c, c);
    EXPECT_FALSE(lie_case_algebra_element(trivial_operator()));
}

TEST(SingularOperator, Examples)
{
    const ReductionOperator q = singular_operator(parse("t*u - x"));
    ASSERT_TRUE(q.eta_general);
    expect_zero(*q.eta_general - Expr(1) / t());
    EXPECT_EQ(q.tau, 0);
    EXPECT_TRUE(invariant_surface_residual(q, (x() + Expr(5)) / t(), Grid{}).passed);
    EXPECT_EQ(*singular_operator(u()).eta_general, Expr(0));
    EXPECT_THROW((void)singular_operator(x()), DegenerateInputError);
}

TEST(SingularOperator, DeterminingEquation)
{
    EXPECT_TRUE(singular_determining_residual(Expr(1) / t(), kGrid3).symbolic_zero);
    EXPECT_TRUE(singular_determining_residual(Expr(0), kGrid3).passed);
    const VerificationReport r = singular_determining_residual(u(), kGrid3);
    EXPECT_FALSE(r.passed);
    EXPECT_DOUBLE_EQ(r.max_abs_residual, 9.0);   // u^2 with u in [-3, 3]
}

TEST(OperatorClass, Names)
{
    for (auto c : {OperatorClass::Singular, OperatorClass::Trivial, OperatorClass::LieCase, OperatorClass::NoGo})
        EXPECT_EQ(class_from_name(class_name(c)), c);
    EXPECT_THROW((void)class_from_name("other"), UsageError);
}

TEST(Algebra, CommutatorExamples)
{
    using B = GBElement;
    EXPECT_TRUE(commutator(B::basis(3), B::basis(4)).is_zero());
    EXPECT_EQ(commutator(B::basis(0), B::basis(4)), B::basis(3));
    EXPECT_EQ(commutator(B::basis(0), B::basis(1)), Rational(2) * B::basis(0));
    EXPECT_EQ(commutator(B::basis(1), B::basis(2)), Rational(2) * B::basis(2));
    EXPECT_EQ(commutator(B::basis(2), B::basis(0)), Rational(-1) * B::basis(1));
}

// Brackets of the hand-written fields via finite-difference Jacobians,
// compared with the exact table at random points.
TEST(Algebra, TableMatchesNumericBrackets)
{
    const auto table = commutator_table();
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const VectorField exact = as_vector_field(table[i][j]);
            const CompiledExpr tau(exact.tau), xi(exact.xi), eta(exact.eta);
            for (int k = 0; k < 5; ++k) {
                const Eigen::Vector3d p(coord(rng), coord(rng), coord(rng));
                const Eigen::Vector3d bracket =
                    jacobian(kFields[j], p) * kFields[i](p) - jacobian(kFields[i], p) * kFields[j](p);
                const Point q{p[0], p[1], p[2]};
                EXPECT_NEAR(tau.run(q).value, bracket[0], 1e-7) << i << "," << j;
                EXPECT_NEAR(xi.run(q).value, bracket[1], 1e-7) << i << "," << j;
                EXPECT_NEAR(eta.run(q).value, bracket[2], 1e-7) << i << "," << j;
            }
        }
    }
}

TEST(Algebra, OutsideTheSpanIsReported)
{
    EXPECT_FALSE(match_gb_element({Expr(0), pow(x(), 2), Expr(0)}));
    EXPECT_FALSE(match_gb_element({Expr(0), Expr(0), u() * u()}));
    const auto e = match_gb_element(as_vector_field(GBElement{{1, 2, 3, 4, 5}}));
    ASSERT_TRUE(e);
    EXPECT_EQ(e->c, (std::array<Rational, 5>{1, 2, 3, 4, 5}));
}

TEST(Algebra, Describe)
{
    EXPECT_EQ(describe(GBElement{{1, 0, 0, 1, 0}}), "P_t + P_x");
    EXPECT_EQ(describe(GBElement{{0, -2, 0, 0, rational(1, 2)}}), "-2*D + 1/2*G");
    EXPECT_EQ(describe(GBElement{}), "0");
    EXPECT_EQ(describe(GHElement{{0, 1, 0, 0, 0}, -1}), "D^ + I^");
}

TEST(InvarianceCorrespondence, WorkedCases)
{
    const Grid g;
    GBElement pt_px{{1, 0, 0, 1, 0}};
    EXPECT_EQ(check_proposition2(exp(x() - t()), pt_px, 0, g).verdict, Prop2Verdict::BothInvariant);
    EXPECT_EQ(check_proposition2(x(), GBElement::basis(1), -1, g).verdict, Prop2Verdict::BothInvariant);
    EXPECT_EQ(check_proposition2(exp(x() - t()), GBElement::basis(1), 0, g).verdict,
              Prop2Verdict::BothNonInvariant);
    // v = x with the wrong constant: the heat side fails while u = 2/x stays invariant.
    EXPECT_EQ(check_proposition2(x(), GBElement::basis(1), 1, g).verdict, Prop2Verdict::Mismatch);
    // h2 is a D^ + 2 I^ eigenfunction.
    EXPECT_EQ(check_proposition2(heat_polynomial(2).v, GBElement::basis(1), -2, g).verdict,
              Prop2Verdict::BothInvariant);
    EXPECT_THROW((void)check_proposition2(Expr(0), pt_px, 0, g), DegenerateInputError);
}

TEST(InvarianceCorrespondence, HeatCharacteristic)
{
    const GHElement k{{0, 0, 1, 0, 0}, 0};
    const HeatVectorField f = as_heat_vector_field(k);
    expect_zero(f.rho - (pow(x(), 2) / Expr(4) - t() / Expr(2)));
    const GHElement g{{0, 0, 0, 0, 1}, rational(1, 3)};
    expect_zero(as_heat_vector_field(g).rho - (x() / Expr(2) - Expr(rational(1, 3))));
}

TEST(PointTransformation, Examples)
{
    const BurgersSolution xt = lie_rational_solution(0, 0);
    expect_zero(apply_point_transformation(PointTransformation{}, xt).u - x() / t());
    expect_zero(apply_point_transformation({1, 0, 0, 1, -1, 0, 0}, xt).u - x() / t());
    expect_zero(apply_point_transformation({1, 0, 0, 1, 1, 0, 1}, q1_constant_solution(0)).u - Expr(1));
    EXPECT_THROW((void)apply_point_transformation({1, 0, 0, 1, 2, 0, 0}, xt), UsageError);
    EXPECT_THROW((void)apply_point_transformation({0, 0, 0, 0, 0, 0, 0}, xt), UsageError);
}

TEST(PointTransformation, ImagesSolveBurgers)
{
    const BurgersSolution s = hopf_cole(heat_polynomial(3));
    for (const PointTransformation& g : std::vector<PointTransformation>{
             {1, 0, 0, 1, -1, 0, 0}, {1, 0, 0, 1, 1, 3, -2}, {9, 0, 0, 1, 3, 0, 0}, {1, 0, -1, 1, 1, 0, 0}}) {
        const BurgersSolution image = apply_point_transformation(g, s);
        EXPECT_TRUE(burgers_residual(image.u, Grid{}).passed) << to_string(image.u);
    }
}
