#pragma once

#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "redop/errors.hpp"
#include "redop/expr.hpp"
#include "redop/verify.hpp"

namespace redop {

/// A solution of the backward heat equation v_t + v_xx = 0.
struct HeatSolution {
    Expr v;
    std::string label;
    std::string singular_locus_hint = "none";
    TimeDomain domain = TimeDomain::Positive;
};

inline constexpr int kMaxHeatPolynomial = 12;
inline constexpr double kHeatTolerance = 1e-10;

/// Heat polynomial h_n: h_0 = 1, h_1 = x, h_{n+1} = x h_n - 2 n t h_{n-1}.
[[nodiscard]] inline HeatSolution heat_polynomial(int n)
{
    if (n < 0 || n > kMaxHeatPolynomial)
        throw UsageError("heat polynomial index must lie in 0.." + std::to_string(kMaxHeatPolynomial));
    using vars::t;
    using vars::x;
    Expr prev = Expr(1);
    Expr cur = x();
    if (n == 0) cur = prev;
    for (int k = 1; k < n; ++k) {
        Expr next = simplify(x() * cur - Expr(2 * k) * t() * prev);
        prev = cur;
        cur = next;
    }
    return {cur, "h" + std::to_string(n)};
}

[[nodiscard]] inline std::string rational_label(const Rational& q) { return to_string(q); }

/// exp(a x - a^2 t).
[[nodiscard]] inline HeatSolution exp_solution(const Rational& a)
{
    using vars::t;
    using vars::x;
    const Expr arg = Expr(a) * x() + Expr(Rational(-a * a)) * t();
    return {exp(arg), "e(" + rational_label(a) + ")"};
}

/// exp(a^2 t) cos(a x + phase).
[[nodiscard]] inline HeatSolution trig_solution(const Rational& a, const Rational& phase)
{
    using vars::t;
    using vars::x;
    const Expr v = exp(Expr(Rational(a * a)) * t()) * cos(Expr(a) * x() + Expr(phase));
    return {v, "trig(" + rational_label(a) + "," + rational_label(phase) + ")"};
}

/// Backward heat kernel (-t)^(-1/2) exp(x^2/(4t)), defined for t < 0.
[[nodiscard]] inline HeatSolution heat_kernel()
{
    using vars::t;
    using vars::x;
    const Expr v = exp(pow(x(), 2) / (Expr(4) * t())) / sqrt(-t());
    return {v, "kernel", "t >= 0 excluded", TimeDomain::Negative};
}

namespace detail {

inline std::vector<std::string_view> split_top_level(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        else if (s[i] == ')') --depth;
        else if (s[i] == sep && depth == 0) {
            parts.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    parts.push_back(s.substr(start));
    return parts;
}

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace detail

/// Resolve a catalog label: h0..h12, e(a), trig(a,phase), kernel.
[[nodiscard]] inline HeatSolution heat_from_label(std::string_view label)
{
    label = detail::trim(label);
    if (label == "kernel") return heat_kernel();
    if (label.size() >= 2 && label.front() == 'h') {
        const auto digits = label.substr(1);
        bool ok = digits.size() <= 2;
        for (char c : digits) ok = ok && std::isdigit(static_cast<unsigned char>(c));
        if (ok) return heat_polynomial(std::stoi(std::string(digits)));
    }
    auto call_args = [&](std::string_view name) -> std::optional<std::vector<std::string_view>> {
        if (label.size() < name.size() + 2 || label.substr(0, name.size()) != name) return std::nullopt;
        if (label[name.size()] != '(' || label.back() != ')') return std::nullopt;
        return detail::split_top_level(label.substr(name.size() + 1, label.size() - name.size() - 2), ',');
    };
    if (auto args = call_args("e")) {
        if (args->size() != 1) throw UsageError("e(a) takes one rational argument");
        return exp_solution(parse_rational((*args)[0]));
    }
    if (auto args = call_args("trig")) {
        if (args->size() != 2) throw UsageError("trig(a,phase) takes two rational arguments");
        return trig_solution(parse_rational((*args)[0]), parse_rational((*args)[1]));
    }
    throw UsageError("unknown heat catalog label '" + std::string(label) + "'");
}

/// A catalog label, or else an expression in t and x (labelled by its text).
[[nodiscard]] inline HeatSolution heat_from_text(std::string_view text)
{
    text = detail::trim(text);
    const bool label_like = text == "kernel" || text.rfind("e(", 0) == 0 || text.rfind("trig(", 0) == 0 ||
                            (text.size() >= 2 && text.front() == 'h' &&
                             std::isdigit(static_cast<unsigned char>(text[1])));
    if (label_like) return heat_from_label(text);
    const Expr v = parse(text);
    if (depends_on(v, Var::u)) throw UsageError("a heat solution depends on t and x only");
    return {v, to_string(v)};
}

/// The listed catalog (the label syntax accepts more parameter values).
[[nodiscard]] inline std::vector<HeatSolution> heat_catalog()
{
    std::vector<HeatSolution> out;
    for (int n = 0; n <= kMaxHeatPolynomial; ++n) out.push_back(heat_polynomial(n));
    for (const char* l : {"e(1)", "e(-1)", "e(2)", "e(1/2)", "trig(1,0)", "trig(1,1/2)", "trig(2,0)",
                          "trig(2,157/100)", "kernel"})
        out.push_back(heat_from_label(l));
    return out;
}

[[nodiscard]] inline Expr heat_residual(const Expr& v) { return diff(v, Var::t) + diff(v, Var::x, 2); }

/// Max |v_t + v_xx| over the grid.
[[nodiscard]] inline VerificationReport validate_heat(const Expr& v, const Grid& grid,
                                                      double tolerance = kHeatTolerance)
{
    if (depends_on(v, Var::u)) throw UsageError("a heat solution depends on t and x only");
    return run_residual(heat_residual(v), grid, tolerance);
}

[[nodiscard]] inline VerificationReport validate_heat(const HeatSolution& h, double tolerance = kHeatTolerance)
{
    return validate_heat(h.v, Grid::standard(h.domain), tolerance);
}

/// Determinant |a, b, c| of the 3x3 matrix with columns a, b, c.
[[nodiscard]] inline Expr det3(const std::array<Expr, 3>& a, const std::array<Expr, 3>& b,
                               const std::array<Expr, 3>& c)
{
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - b[0] * (a[1] * c[2] - a[2] * c[1]) +
           c[0] * (a[1] * b[2] - a[2] * b[1]);
}

/// Column (v1, v2, v3) differentiated `order` times in x.
[[nodiscard]] inline std::array<Expr, 3> x_derivatives(const std::array<Expr, 3>& v, int order)
{
    return {diff(v[0], Var::x, order), diff(v[1], Var::x, order), diff(v[2], Var::x, order)};
}

/// Wronskian |v, v_x, v_xx| with respect to x, in canonical form.
[[nodiscard]] inline Expr wronskian(const std::array<Expr, 3>& v)
{
    return simplify(det3(v, x_derivatives(v, 1), x_derivatives(v, 2)));
}

struct HeatTriple {
    std::array<HeatSolution, 3> v;
    Expr wronskian;
    Point certificate;   // |W| > 1e-6 here
    TimeDomain domain = TimeDomain::Positive;

    [[nodiscard]] std::array<Expr, 3> exprs() const { return {v[0].v, v[1].v, v[2].v}; }
    [[nodiscard]] std::string label() const { return v[0].label + "," + v[1].label + "," + v[2].label; }
};

inline constexpr double kWronskianCertificate = 1e-6;

/// Computes W and finds a probe-grid point with |W| > 1e-6.
[[nodiscard]] inline HeatTriple make_triple(const HeatSolution& v1, const HeatSolution& v2, const HeatSolution& v3)
{
    HeatTriple tr{{v1, v2, v3}, Expr(0), Point{}, TimeDomain::Positive};
    for (const auto& h : tr.v)
        if (h.domain == TimeDomain::Negative) tr.domain = TimeDomain::Negative;
    tr.wronskian = wronskian(tr.exprs());
    const std::string name = "(" + tr.label() + ")";
    if (zero_test(tr.wronskian) == ZeroTest::Zero)
        throw LinearDependenceError("Wronskian of " + name + " vanishes identically");
    const Grid grid = Grid::standard(tr.domain);
    const CompiledExpr w(tr.wronskian);
    bool found = false;
    detail::for_each_point(grid, [&](const Point& p) {
        if (found) return;
        const EvalOutcome o = w.run(p, grid.exclusion_threshold);
        if (o.status == EvalStatus::Ok && std::abs(o.value) > kWronskianCertificate) {
            tr.certificate = p;
            found = true;
        }
    });
    if (!found) throw LinearDependenceError("no point with |W| > 1e-6 found for " + name);
    return tr;
}

[[nodiscard]] inline HeatTriple make_triple(std::string_view labels)
{
    const auto parts = detail::split_top_level(labels, ',');
    if (parts.size() != 3) throw UsageError("a heat triple needs exactly three labels");
    return make_triple(heat_from_text(parts[0]), heat_from_text(parts[1]), heat_from_text(parts[2]));
}

} // namespace redop
