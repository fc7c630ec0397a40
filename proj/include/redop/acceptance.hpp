#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "redop/burgers.hpp"
#include "redop/errors.hpp"
#include "redop/expr.hpp"
#include "redop/heat.hpp"
#include "redop/reduction.hpp"
#include "redop/symmetry.hpp"
#include "redop/verify.hpp"

// Acceptance suite: one check per numbered criterion, each returning a single
// pass/fail outcome with a short detail string.

namespace redop::acceptance {

struct Outcome {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    std::uint64_t seed = 20080917;
    int constants_per_triple = 5;
    double fd_step = 1e-5;
    double fd_relative_tolerance = 1e-6;
    double fd_exclusion_threshold = 1e-6;
    double fd_unresolved_fraction = 0.1;
    std::ostream* log = nullptr;   // per-item diagnostics when set
};

/// Heat triples used by criteria 1 to 4.
[[nodiscard]] inline std::vector<std::string> standard_triples()
{
    return {
        "h0,h1,h2",       "h1,h2,h3",          "h0,h2,h4",
        "h0,e(1),e(-1)",  "h0,h1,e(1)",        "e(1),e(2),e(-1)",
        "h0,trig(1,0),trig(1,1/2)", "h1,trig(1,0),e(2)", "h2,e(1),trig(2,0)",
        "h0,h1,trig(1,0)", "e(1/2),h1,trig(1,1/2)", "h0,h1,kernel",
    };
}

/// Admissible (c0..c4) tuples for the Lie-case operators of criterion 6.
[[nodiscard]] inline std::vector<std::array<Rational, 5>> lie_tuples()
{
    auto r = [](long n, long d = 1) { return rational(n, d); };
    return {
        {r(1), r(0), r(0), r(0), r(0)},  {r(1), r(0), r(0), r(0), r(1)},  {r(0), r(1, 2), r(0), r(0), r(0)},
        {r(1), r(1), r(0), r(0), r(0)},  {r(0), r(0), r(1), r(0), r(0)},  {r(1), r(0), r(1), r(0), r(0)},
        {r(2), r(1), r(0), r(3), r(-1)}, {r(0), r(1), r(1), r(1), r(1)},  {r(3), r(-1), r(1), r(2), r(0)},
        {r(1), r(2), r(-1), r(0), r(5)},
    };
}

/// Point transformations of criterion 8 (the first is the discrete symmetry).
[[nodiscard]] inline std::vector<std::pair<std::string, PointTransformation>> standard_transformations()
{
    auto pt = [](long a, long b, long g, long d, long k, long m0, long m1) {
        return PointTransformation{rational(a), rational(b), rational(g), rational(d),
                                   rational(k), rational(m0), rational(m1)};
    };
    return {
        {"discrete", pt(1, 0, 0, 1, -1, 0, 0)},
        {"galilean", pt(1, 0, 0, 1, 1, 0, 1)},
        {"translation", pt(1, 1, 0, 1, 1, 2, 0)},
        {"dilation", pt(4, 0, 0, 1, 2, 0, 0)},
        {"projective+galilean", pt(1, 0, -1, 1, 1, 0, 1)},
    };
}

/// Heat/Burgers pairs of criterion 9: (v, e, mu, expected invariance).
struct Prop2Case {
    std::string heat;
    GBElement element;
    Rational mu;
    bool invariant;
};

[[nodiscard]] inline std::vector<Prop2Case> prop2_cases()
{
    GBElement pt_px;
    pt_px.c = {1, 0, 0, 1, 0};
    return {
        {"e(1)", pt_px, 0, true},
        {"h1", GBElement::basis(1), -1, true},
        {"e(1)", GBElement::basis(1), 0, false},
    };
}

class Suite {
public:
    explicit Suite(Options opt = {}) : opt_(std::move(opt)) {}

    /// Runs criteria 1..10 in order.
    std::vector<Outcome> run()
    {
        std::vector<Outcome> out;
        out.push_back(timed(1, "Wronskian forward check", [&](Outcome& o) { forward_check(o); }));
        out.push_back(timed(2, "cross-representation", [&](Outcome& o) { cross(o); }));
        out.push_back(timed(3, "invariant-family correspondence", [&](Outcome& o) { family_correspondence(o); }));
        out.push_back(timed(4, "reduced-equation law", [&](Outcome& o) { reduced_law(o); }));
        out.push_back(timed(5, "Hopf-Cole", [&](Outcome& o) { hopf_cole_check(o); }));
        out.push_back(timed(6, "determining-system regressions", [&](Outcome& o) { determining(o); }));
        out.push_back(timed(7, "Lie algebra", [&](Outcome& o) { algebra(o); }));
        out.push_back(timed(8, "group action", [&](Outcome& o) { group_action(o); }));
        out.push_back(timed(9, "heat/Burgers invariance correspondence", [&](Outcome& o) { prop2(o); }));
        out.push_back(timed(10, "numerical hygiene", [&](Outcome& o) { hygiene(o); }));
        return out;
    }

private:
    struct TripleData {
        HeatTriple triple;
        NogoCoefficients k;
        Grid grid;
    };

    struct FamilyData {
        std::size_t triple = 0;
        std::array<Rational, 3> c;
        BurgersSolution u;
    };

    struct Target {
        Expr e;
        Grid grid;
        std::string what;
    };

    Options opt_;
    std::vector<TripleData> triples_;
    std::vector<FamilyData> families_;
    std::vector<std::pair<std::string, VerificationReport>> reports_;
    std::vector<Target> targets_;

    Outcome timed(int id, const char* name, const std::function<void(Outcome&)>& body)
    {
        Outcome o;
        o.id = id;
        o.name = name;
        const auto start = std::chrono::steady_clock::now();
        try {
            body(o);
        } catch (const std::exception& e) {
            o.passed = false;
            o.detail = std::string("unexpected error: ") + e.what();
        }
        o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return o;
    }

    void note(const std::string& line)
    {
        if (opt_.log) *opt_.log << "  " << line << '\n';
    }

    /// Records a report for the hygiene criterion and returns its pass flag.
    bool keep(const std::string& what, const VerificationReport& r)
    {
        reports_.emplace_back(what, r);
        std::ostringstream s;
        s << what << ": " << status_name(r.status) << " max=" << r.max_abs_residual
          << (r.symbolic_zero ? " (symbolic 0)" : "") << " excluded=" << r.excluded_count << "/" << r.total_count;
        note(s.str());
        return r.passed;
    }

    void target(const Expr& e, const Grid& g, const std::string& what) { targets_.push_back({e, g, what}); }

    void ensure_triples()
    {
        if (!triples_.empty()) return;
        for (const auto& label : standard_triples()) {
            HeatTriple tr = make_triple(label);
            const Grid g = Grid::standard(tr.domain);
            NogoCoefficients k = nogo_from_heat_triple(tr);
            triples_.push_back({tr, k, g});
        }
    }

    void forward_check(Outcome& o)
    {
        ensure_triples();
        std::size_t ok = 0;
        bool families = false;
        for (const auto& d : triples_) {
            const std::string name = "(" + d.triple.label() + ")";
            ok += keep("nogo system " + name, nogo_determining_residual(d.k, d.grid, 1e-8)) ? 1 : 0;
            for (const auto& h : d.triple.v) {
                target(h.v, d.grid, h.label);
                families = families || h.label.rfind("trig", 0) == 0;
            }
            target(d.k.xi0, d.grid, "xi0 " + name);
            target(d.k.eta1, d.grid, "eta1 " + name);
            target(d.k.eta0, d.grid, "eta0 " + name);
        }
        o.passed = ok == triples_.size() && triples_.size() >= 10 && families;
        o.detail = std::to_string(ok) + "/" + std::to_string(triples_.size()) + " triples pass at 1e-8";
    }

    void cross(Outcome& o)
    {
        ensure_triples();
        std::size_t ok = 0;
        for (const auto& d : triples_) {
            std::array<Expr, 3> u;
            for (int i = 0; i < 3; ++i) u[i] = hopf_cole(d.triple.v[i]).u;
            const NogoCoefficients b = nogo_from_burgers_triple(u);
            const std::vector<Expr> diffs{d.k.xi0 - b.xi0, d.k.eta1 - b.eta1, d.k.eta0 - b.eta0};
            ok += keep("heat vs Burgers coefficients (" + d.triple.label() + ")", run_residuals(diffs, d.grid, 1e-9)) ? 1 : 0;
        }
        o.passed = ok == triples_.size();
        o.detail = std::to_string(ok) + "/" + std::to_string(triples_.size()) + " triples agree within 1e-9";
    }

    /// min |c.v| / max(sum |c_i v_i|) over the grid; small values mean the
    /// family denominator nearly cancels somewhere on the grid.
    static double conditioning(const HeatTriple& tr, const std::array<Rational, 3>& c, const Grid& g)
    {
        std::array<CompiledExpr, 3> v{CompiledExpr(tr.v[0].v), CompiledExpr(tr.v[1].v), CompiledExpr(tr.v[2].v)};
        std::array<double, 3> cd{};
        for (int i = 0; i < 3; ++i) cd[i] = static_cast<double>(c[i]);
        double worst = std::numeric_limits<double>::infinity();
        detail::for_each_point(g, [&](const Point& p) {
            double sum = 0.0;
            double mag = 0.0;
            for (int i = 0; i < 3; ++i) {
                const EvalOutcome r = v[i].run(p);
                if (r.status != EvalStatus::Ok) return;
                sum += cd[i] * r.value;
                mag += std::abs(cd[i] * r.value);
            }
            if (mag > 0.0) worst = std::min(worst, std::abs(sum) / mag);
        });
        return worst;
    }

    /// Draws integer constants in [-3,3] with c3 != 0 and (c1,c2) != 0, one per
    /// projective class. Well-conditioned draws (ratio >= 0.05) are preferred;
    /// triples whose family denominator always crosses zero on the grid fall
    /// back to the best-conditioned draws seen.
    void ensure_families()
    {
        ensure_triples();
        if (!families_.empty()) return;
        std::mt19937_64 rng(opt_.seed);
        std::uniform_int_distribution<int> pick(-3, 3);
        const auto wanted = static_cast<std::size_t>(opt_.constants_per_triple);
        for (std::size_t i = 0; i < triples_.size(); ++i) {
            const auto& d = triples_[i];
            std::vector<std::pair<double, std::array<Rational, 3>>> good;
            std::vector<std::pair<double, std::array<Rational, 3>>> poor;
            std::vector<std::array<Rational, 3>> seen;
            for (int attempt = 0; good.size() < wanted && attempt < 400; ++attempt) {
                std::array<Rational, 3> c{Rational(pick(rng)), Rational(pick(rng)), Rational(pick(rng))};
                if (c[2] == 0 || (c[0] == 0 && c[1] == 0)) continue;
                const std::array<Rational, 3> key{c[0] / c[2], c[1] / c[2], Rational(1)};
                if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
                seen.push_back(key);
                const double ratio = conditioning(d.triple, c, d.grid);
                (ratio >= 0.05 ? good : poor).emplace_back(ratio, c);
            }
            std::stable_sort(poor.begin(), poor.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
            for (std::size_t k = 0; good.size() < wanted && k < poor.size(); ++k) good.push_back(poor[k]);
            if (good.size() < wanted)
                throw DegenerateInputError("could not draw enough constants for (" + d.triple.label() + ")");
            for (const auto& [ratio, c] : good) {
                std::ostringstream s;
                s << "(" << d.triple.label() << ") " << constants_label(c) << " conditioning " << ratio;
                note(s.str());
                families_.push_back({i, c, invariant_family(d.triple, c)});
            }
        }
    }

    static std::string constants_label(const std::array<Rational, 3>& c)
    {
        return "c=(" + to_string(c[0]) + "," + to_string(c[1]) + "," + to_string(c[2]) + ")";
    }

    void family_correspondence(Outcome& o)
    {
        ensure_families();
        std::size_t ok = 0;
        for (const auto& f : families_) {
            const auto& d = triples_[f.triple];
            const std::string name = "(" + d.triple.label() + ") " + constants_label(f.c);
            const bool a = keep("L[u] " + name, burgers_residual(f.u.u, d.grid, 1e-8));
            const bool b = keep("Q[u] " + name, invariant_surface_residual(assemble_nogo(d.k), f.u.u, d.grid, 1e-8));
            target(f.u.u, d.grid, "u " + name);
            ok += (a && b) ? 1 : 0;
        }
        o.passed = ok == families_.size() && !families_.empty();
        o.detail = std::to_string(ok) + "/" + std::to_string(families_.size()) +
                   " family members solve L[u]=0 and Q[u]=0 at 1e-8";
    }

    void reduced_law(Outcome& o)
    {
        ensure_families();
        std::size_t ok = 0;
        std::size_t considered = 0;
        double worst = 0.0;
        std::uint64_t seed = opt_.seed;
        for (const auto& f : families_) {
            if (f.c[2] == 0) continue;
            ++considered;
            const auto& d = triples_[f.triple];
            const AnsatzIntegrals zw = ansatz_integrals(d.triple, f.u.u);
            const AffineFit fit = fit_affine(zw, d.grid, 24, ++seed);
            // c1 zeta + c2 omega + c3 = 0 along the family member.
            const double c1 = static_cast<double>(f.c[0]);
            const double c2 = static_cast<double>(f.c[1]);
            const double c3 = static_cast<double>(f.c[2]);
            const double lead = fit.swapped ? c2 : c1;
            const double other = fit.swapped ? c1 : c2;
            const bool consistent = lead != 0.0 && std::abs(fit.A + other / lead) <= 1e-6 * (1 + std::abs(other / lead)) &&
                                    std::abs(fit.B + c3 / lead) <= 1e-6 * (1 + std::abs(c3 / lead));
            const bool pass = fit.samples >= 20 && fit.max_residual <= 1e-9 && consistent;
            worst = std::max(worst, fit.max_residual);
            std::ostringstream s;
            s << "affine fit (" << d.triple.label() << ") " << constants_label(f.c) << ": "
              << (fit.swapped ? "omega" : "zeta") << " = " << fit.A << "*" << (fit.swapped ? "zeta" : "omega")
              << " + " << fit.B << ", max residual " << fit.max_residual << " over " << fit.samples << " points"
              << (consistent ? "" : " (coefficients disagree with c)");
            note(s.str());
            ok += pass ? 1 : 0;
        }
        o.passed = ok == considered && considered > 0;
        std::ostringstream s;
        s << ok << "/" << considered << " fits within 1e-9 (worst " << worst << ")";
        o.detail = s.str();
    }

    static bool polynomial_or_exponential(const std::string& label)
    {
        return (label.size() >= 2 && label[0] == 'h') || label.rfind("e(", 0) == 0;
    }

    void hopf_cole_check(Outcome& o)
    {
        std::size_t ok = 0;
        const auto catalog = heat_catalog();
        for (const auto& h : catalog) {
            const BurgersSolution s = hopf_cole(h);
            const Grid g = Grid::standard(h.domain);
            const VerificationReport r = burgers_residual(s.u, g, 1e-8);
            const bool exact_needed = polynomial_or_exponential(h.label);
            const bool pass = keep("Hopf-Cole " + h.label, r) && (!exact_needed || r.symbolic_zero);
            target(s.u, g, "Hopf-Cole " + h.label);
            ok += pass ? 1 : 0;
        }
        o.passed = ok == catalog.size();
        o.detail = std::to_string(ok) + "/" + std::to_string(catalog.size()) +
                   " catalog images pass at 1e-8 (exact zero for polynomial/exponential)";
    }

    void determining(Outcome& o)
    {
        const Grid3D g3 = Grid3D::standard();
        bool pass = keep("trivial operator", general_determining_residual(trivial_operator(), g3, 1e-9));
        std::size_t ok = 0;
        const auto tuples = lie_tuples();
        for (const auto& c : tuples) {
            const ReductionOperator q = lie_case_operator(c);
            std::string name = "lie operator (";
            for (int i = 0; i < 5; ++i) name += to_string(c[i]) + (i < 4 ? "," : ")");
            const bool a = keep(name, general_determining_residual(q, g3, 1e-9));
            const auto element = lie_case_algebra_element(q);
            const bool b = element && element->c == c;
            if (!b) note(name + ": Dn*(xi, eta) does not match the algebra element");
            target(q.xi0, g3.base, "xi0 " + name);
            for (const auto& e : q.eta_coeffs) target(e, g3.base, "eta " + name);
            ok += (a && b) ? 1 : 0;
        }
        const Expr eta = Expr(1) / vars::t();
        const VerificationReport sing = singular_determining_residual(eta, g3, 1e-9);
        const bool s = keep("singular eta = 1/t", sing) && sing.symbolic_zero;
        target(eta, g3.base, "eta = 1/t");
        pass = pass && ok == tuples.size() && s;
        o.passed = pass;
        o.detail = "trivial + " + std::to_string(ok) + "/" + std::to_string(tuples.size()) +
                   " lie operators at 1e-9; eta = 1/t " + (s ? "exact zero" : "not exact");
    }

    void algebra(Outcome& o)
    {
        const auto table = commutator_table();
        bool antisymmetric = true;
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                antisymmetric = antisymmetric && table[i][j] == Rational(-1) * table[j][i];
        bool jacobi = true;
        for (int i = 0; i < 5; ++i)
            for (int j = i + 1; j < 5; ++j)
                for (int k = j + 1; k < 5; ++k) {
                    const auto a = GBElement::basis(i);
                    const auto b = GBElement::basis(j);
                    const auto c = GBElement::basis(k);
                    const GBElement sum = commutator(a, table[j][k]) + commutator(b, table[k][i]) +
                                          commutator(c, table[i][j]);
                    jacobi = jacobi && sum.is_zero();
                }
        o.passed = antisymmetric && jacobi;
        o.detail = std::string("table closes; antisymmetry ") + (antisymmetric ? "holds" : "fails") +
                   ", Jacobi " + (jacobi ? "holds" : "fails");
    }

    void group_action(Outcome& o)
    {
        const std::vector<BurgersSolution> solutions{
            hopf_cole(heat_from_label("h1")),
            hopf_cole(heat_from_label("h2")),
            lie_rational_solution(0, 0),
            hopf_cole(heat_from_label("e(1)")),
            invariant_family(make_triple("h0,e(1),e(-1)"), {Rational(0), Rational(1), Rational(1)}),
        };
        const Grid g = Grid::standard();
        std::size_t ok = 0;
        std::size_t total = 0;
        for (const auto& [name, tr] : standard_transformations()) {
            for (const auto& s : solutions) {
                const BurgersSolution image = apply_point_transformation(tr, s);
                const std::string what = name + " image of u = " + to_string(s.u);
                ok += keep(what, burgers_residual(image.u, g, 1e-8)) ? 1 : 0;
                target(image.u, g, what);
                ++total;
            }
        }
        bool rejected = false;
        try {
            PointTransformation bad{1, 0, 0, 1, 2, 0, 0};
            (void)apply_point_transformation(bad, solutions.front());
        } catch (const UsageError&) {
            rejected = true;
        }
        o.passed = ok == total && rejected;
        o.detail = std::to_string(ok) + "/" + std::to_string(total) + " images solve the equation at 1e-8; " +
                   (rejected ? "violated invariant rejected as a usage error" : "violated invariant NOT rejected");
    }

    void prop2(Outcome& o)
    {
        const Grid g = Grid::standard();
        std::size_t ok = 0;
        const auto cases = prop2_cases();
        for (const auto& c : cases) {
            const HeatSolution v = heat_from_label(c.heat);
            const Prop2Report r = check_proposition2(v.v, c.element, c.mu, g);
            const std::string what = "v=" + c.heat + " e=" + describe(c.element) + " mu=" + to_string(c.mu);
            keep(what + " [heat side]", r.heat_side);
            keep(what + " [Burgers side]", r.burgers_side);
            note(what + ": " + verdict_name(r.verdict));
            const Prop2Verdict want = c.invariant ? Prop2Verdict::BothInvariant : Prop2Verdict::BothNonInvariant;
            ok += r.verdict == want ? 1 : 0;
            target(v.v, g, "v " + c.heat);
            target(simplify(Expr(2) * diff(v.v, Var::x) / v.v), g, "u of " + c.heat);
        }
        o.passed = ok == cases.size();
        o.detail = std::to_string(ok) + "/" + std::to_string(cases.size()) +
                   " cases biconditional (small <= 1e-8, large >= 1e-2)";
    }

    void hygiene(Outcome& o)
    {
        std::size_t fd_ok = 0;
        std::size_t fd_total = 0;
        std::map<std::string, bool> seen;
        double worst_fraction = 0.0;
        for (const auto& t : targets_) {
            const std::string key = to_string(t.e) + (t.grid.t.min < 0 ? "@neg" : "@pos");
            if (seen.count(key)) continue;
            seen[key] = true;
            Grid g = t.grid;
            g.exclusion_threshold = opt_.fd_exclusion_threshold;
            for (Var v : {Var::t, Var::x}) {
                const VerificationReport r = finite_difference_check(t.e, v, g, opt_.fd_step,
                                                                     opt_.fd_relative_tolerance, opt_.fd_unresolved_fraction);
                ++fd_total;
                worst_fraction = std::max(worst_fraction, r.excluded_fraction());
                if (r.passed) {
                    ++fd_ok;
                } else {
                    std::ostringstream s;
                    s << "finite difference d/d" << var_name(v) << " of " << t.what << ": " << status_name(r.status)
                      << " err=" << r.max_abs_residual << " excluded=" << r.excluded_count << "/" << r.total_count;
                    note(s.str());
                }
            }
        }
        std::size_t inconclusive = 0;
        for (const auto& [what, r] : reports_) {
            worst_fraction = std::max(worst_fraction, r.excluded_fraction());
            if (r.status == Status::Inconclusive || r.excluded_fraction() > r.exclusion_budget) {
                ++inconclusive;
                note("inconclusive: " + what);
            }
        }
        o.passed = fd_ok == fd_total && inconclusive == 0 && fd_total > 0;
        std::ostringstream s;
        s << fd_ok << "/" << fd_total << " finite-difference checks at 1e-6; " << reports_.size()
          << " verification runs, " << inconclusive << " inconclusive, worst exclusion fraction " << worst_fraction;
        o.detail = s.str();
    }
};

/// "PASS criterion N (name): detail [t s]"
[[nodiscard]] inline std::string format(const Outcome& o)
{
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(2);
    s << (o.passed ? "PASS" : "FAIL") << " criterion " << o.id << " (" << o.name << "): " << o.detail << " ["
      << o.seconds << " s]";
    return s.str();
}

} // namespace redop::acceptance
