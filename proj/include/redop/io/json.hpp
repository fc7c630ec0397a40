#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "redop/burgers.hpp"
#include "redop/errors.hpp"
#include "redop/expr.hpp"
#include "redop/heat.hpp"
#include "redop/reduction.hpp"
#include "redop/symmetry.hpp"
#include "redop/verify.hpp"

namespace redop::io {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json number(double d)
{
    if (std::isfinite(d)) return d;
    return std::isnan(d) ? Json("nan") : Json(d > 0 ? "inf" : "-inf");
}

inline const Json& member(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) throw UsageError(std::string("JSON input lacks field '") + key + "'");
    return j.at(key);
}

inline Expr expr_field(const Json& j, const char* key)
{
    const Json& v = member(j, key);
    if (!v.is_string()) throw UsageError(std::string("field '") + key + "' must be an expression string");
    return parse(v.get<std::string>());
}

inline Rational rational_field(const Json& v)
{
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw UsageError("expected a rational number (integer or \"p/q\" string)");
}

inline const char* domain_name(TimeDomain d) { return d == TimeDomain::Negative ? "t<0" : "t>0"; }

inline TimeDomain domain_from(const Json& j)
{
    if (j.is_object() && j.contains("domain") && j.at("domain") == "t<0") return TimeDomain::Negative;
    return TimeDomain::Positive;
}

} // namespace detail

inline Json to_json(const Point& p)
{
    Json j{{"t", p.t}, {"x", p.x}};
    if (p.u) j["u"] = *p.u;
    return j;
}

inline Json to_json(const VerificationReport& r)
{
    return Json{{"max_abs_residual", detail::number(r.max_abs_residual)},
                {"worst_point", to_json(r.worst_point)},
                {"excluded_count", r.excluded_count},
                {"total_count", r.total_count},
                {"tolerance", r.tolerance},
                {"passed", r.passed},
                {"status", status_name(r.status)},
                {"symbolic_zero", r.symbolic_zero}};
}

inline Json to_json(const HeatSolution& h)
{
    return Json{{"label", h.label},
                {"expression", to_string(h.v)},
                {"singular_locus_hint", h.singular_locus_hint},
                {"domain", detail::domain_name(h.domain)}};
}

inline Json to_json(const Provenance& p)
{
    Json j{{"kind", provenance_name(p.kind)}};
    if (!p.source.empty()) j["source"] = p.source;
    if (!p.triple.empty()) j["triple"] = p.triple;
    if (!p.constants.empty()) {
        Json c = Json::array();
        for (const auto& q : p.constants) c.push_back(to_string(q));
        j["constants"] = c;
    }
    return j;
}

inline Json to_json(const BurgersSolution& s)
{
    return Json{{"expression", to_string(s.u)},
                {"provenance", to_json(s.provenance)},
                {"singular_locus_hint", s.singular_locus_hint},
                {"domain", detail::domain_name(s.domain)}};
}

inline BurgersSolution solution_from_json(const Json& j)
{
    BurgersSolution s;
    s.u = detail::expr_field(j, "expression");
    if (depends_on(s.u, Var::u)) throw UsageError("a solution expression depends on t and x only");
    s.domain = detail::domain_from(j);
    if (j.contains("singular_locus_hint") && j.at("singular_locus_hint").is_string())
        s.singular_locus_hint = j.at("singular_locus_hint").get<std::string>();
    if (j.contains("provenance") && j.at("provenance").is_object()) {
        const Json& p = j.at("provenance");
        const std::string kind = p.value("kind", "closed-form");
        s.provenance.kind = kind == "hopf-cole"          ? Provenance::Kind::HopfCole
                            : kind == "invariant-family" ? Provenance::Kind::InvariantFamily
                                                         : Provenance::Kind::ClosedForm;
        s.provenance.source = p.value("source", "");
        if (p.contains("triple")) s.provenance.triple = p.at("triple").get<std::vector<std::string>>();
        if (p.contains("constants"))
            for (const auto& c : p.at("constants")) s.provenance.constants.push_back(detail::rational_field(c));
    }
    return s;
}

inline Json to_json(const NogoCoefficients& k)
{
    return Json{{"xi0", to_string(k.xi0)}, {"eta1", to_string(k.eta1)}, {"eta0", to_string(k.eta0)}};
}

inline Json to_json(const ReductionOperator& q)
{
    Json j{{"class", class_name(q.cls)}, {"tau", q.tau}};
    j["xi1"] = q.xi1 ? Json(to_string(*q.xi1)) : Json(nullptr);
    j["xi0"] = to_string(q.xi0);
    Json eta = Json::array();
    for (const auto& e : q.eta_coeffs) eta.push_back(to_string(e));
    j["eta_coeffs"] = eta;
    if (q.eta_general) j["eta"] = to_string(*q.eta_general);
    if (q.lie_constants) {
        Json c = Json::array();
        for (const auto& v : *q.lie_constants) c.push_back(to_string(v));
        j["constants"] = c;
    }
    j["expression_strings"] =
        Json{{"tau", std::to_string(q.tau)}, {"xi", to_string(simplify(q.xi()))}, {"eta", to_string(simplify(q.eta()))}};
    return j;
}

/// Rebuilds an operator and re-checks the shape its class requires.
inline ReductionOperator operator_from_json(const Json& j)
{
    const Json& cls = detail::member(j, "class");
    if (!cls.is_string()) throw UsageError("field 'class' must be a string");
    ReductionOperator q;
    q.cls = class_from_name(cls.get<std::string>());
    switch (q.cls) {
        case OperatorClass::Trivial: return trivial_operator();
        case OperatorClass::LieCase: {
            const Json& c = detail::member(j, "constants");
            if (!c.is_array() || c.size() != 5) throw UsageError("lie operator needs 5 constants");
            std::array<Rational, 5> k;
            for (std::size_t i = 0; i < 5; ++i) k[i] = detail::rational_field(c[i]);
            return lie_case_operator(k);
        }
        case OperatorClass::Singular: {
            q.tau = 0;
            q.xi0 = Expr(1);
            q.eta_general = detail::expr_field(j, "eta");
            return q;
        }
        case OperatorClass::NoGo: {
            const Json& eta = detail::member(j, "eta_coeffs");
            if (!eta.is_array() || eta.size() != 4) throw UsageError("nogo operator needs 4 eta coefficients");
            NogoCoefficients k{detail::expr_field(j, "xi0"), parse(eta[1].get<std::string>()),
                               parse(eta[0].get<std::string>())};
            ReductionOperator out = assemble_nogo(k);
            const Expr e2 = parse(eta[2].get<std::string>());
            const Expr e3 = parse(eta[3].get<std::string>());
            if (zero_test(e2 - out.eta_coeffs[2]) != ZeroTest::Zero ||
                zero_test(e3 - out.eta_coeffs[3]) != ZeroTest::Zero)
                throw UsageError("nogo operator needs eta_3 = 1/4 and eta_2 = -xi0/2");
            return out;
        }
    }
    return q;
}

inline Json rationals(const std::array<Rational, 5>& c)
{
    Json a = Json::array();
    for (const auto& q : c) a.push_back(to_string(q));
    return a;
}

inline Json to_json(const GBElement& e)
{
    const VectorField f = as_vector_field(e);
    return Json{{"coordinates", rationals(e.c)},
                {"name", describe(e)},
                {"tau", to_string(simplify(f.tau))},
                {"xi", to_string(simplify(f.xi))},
                {"eta", to_string(simplify(f.eta))}};
}

inline Json to_json(const GHElement& h)
{
    const HeatVectorField f = as_heat_vector_field(h);
    return Json{{"coordinates", rationals(h.c)},
                {"mu", to_string(h.mu)},
                {"name", describe(h)},
                {"tau", to_string(simplify(f.tau))},
                {"xi", to_string(simplify(f.xi))},
                {"eta_over_v", to_string(f.rho)}};
}

inline Json to_json(const Prop2Report& r)
{
    return Json{{"heat_side", to_json(r.heat_side)},
                {"burgers_side", to_json(r.burgers_side)},
                {"verdict", verdict_name(r.verdict)},
                {"consistent", r.consistent()}};
}

inline Json to_json(const PointTransformation& g)
{
    return Json{{"alpha", to_string(g.alpha)}, {"beta", to_string(g.beta)}, {"gamma", to_string(g.gamma)},
                {"delta", to_string(g.delta)}, {"kappa", to_string(g.kappa)}, {"mu0", to_string(g.mu0)},
                {"mu1", to_string(g.mu1)}};
}

} // namespace redop::io
