#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "redop/errors.hpp"
#include "redop/expr.hpp"

namespace redop {

/// Closed interval sampled at `count` equally spaced points (both ends included).
struct Range {
    double min = 0.0;
    double max = 1.0;
    int count = 2;

    [[nodiscard]] double at(int i) const
    {
        if (i == count - 1) return max;
        return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
    }

    void validate(const char* name) const
    {
        if (count < 2) throw UsageError(std::string(name) + " range needs at least 2 points");
        if (!(min < max)) throw UsageError(std::string(name) + " range needs min < max");
        if (!std::isfinite(min) || !std::isfinite(max))
            throw UsageError(std::string(name) + " range must be finite");
    }
};

enum class TimeDomain : std::uint8_t { Positive, Negative };

struct Grid {
    Range t{0.1, 1.0, 31};
    Range x{-2.0, 2.0, 41};
    double exclusion_threshold = 1e-6;
    double exclusion_budget = 0.2;

    /// Default grid; the negative-time variant serves the backward kernel.
    [[nodiscard]] static Grid standard(TimeDomain domain = TimeDomain::Positive)
    {
        Grid g;
        if (domain == TimeDomain::Negative) g.t = Range{-2.0, -0.1, 31};
        return g;
    }

    void validate() const
    {
        t.validate("t");
        x.validate("x");
        if (!(exclusion_budget > 0.0 && exclusion_budget < 1.0))
            throw UsageError("exclusion budget must lie in (0,1)");
        if (!(exclusion_threshold >= 0.0)) throw UsageError("exclusion threshold must be non-negative");
    }

    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(t.count) * x.count; }
};

struct Grid3D {
    Grid base;
    Range u{-3.0, 3.0, 21};

    [[nodiscard]] static Grid3D standard(TimeDomain domain = TimeDomain::Positive)
    {
        return Grid3D{Grid::standard(domain), Range{-3.0, 3.0, 21}};
    }

    void validate() const
    {
        base.validate();
        u.validate("u");
    }

    [[nodiscard]] std::size_t size() const { return base.size() * static_cast<std::size_t>(u.count); }
};

enum class Status : std::uint8_t { Pass, Fail, Inconclusive };

[[nodiscard]] inline const char* status_name(Status s)
{
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct VerificationReport {
    double max_abs_residual = 0.0;
    Point worst_point;
    std::size_t excluded_count = 0;
    std::size_t total_count = 0;
    double tolerance = 0.0;
    double exclusion_budget = 0.2;
    bool passed = false;
    Status status = Status::Fail;
    bool symbolic_zero = false;   // every residual simplified to exactly 0

    [[nodiscard]] double excluded_fraction() const
    {
        return total_count == 0 ? 1.0 : static_cast<double>(excluded_count) / static_cast<double>(total_count);
    }

    /// Recompute passed/status from the numeric fields.
    void finalize()
    {
        const bool budget_ok = total_count > excluded_count && excluded_fraction() <= exclusion_budget;
        passed = budget_ok && max_abs_residual <= tolerance;
        status = !budget_ok ? Status::Inconclusive : passed ? Status::Pass : Status::Fail;
    }
};

/// Point-wise combination of reports over the same grid: worst residual, most
/// exclusions, AND of the symbolic flags.
[[nodiscard]] inline VerificationReport combine(std::span<const VerificationReport> reports)
{
    if (reports.empty()) throw UsageError("no reports to combine");
    VerificationReport out = reports.front();
    for (const auto& r : reports.subspan(1)) {
        if (r.max_abs_residual > out.max_abs_residual || std::isnan(r.max_abs_residual)) {
            out.max_abs_residual = r.max_abs_residual;
            out.worst_point = r.worst_point;
        }
        out.excluded_count = std::max(out.excluded_count, r.excluded_count);
        out.total_count = std::max(out.total_count, r.total_count);
        out.tolerance = std::min(out.tolerance, r.tolerance);
        out.exclusion_budget = std::min(out.exclusion_budget, r.exclusion_budget);
        out.symbolic_zero = out.symbolic_zero && r.symbolic_zero;
    }
    out.finalize();
    return out;
}

namespace detail {

/// Budget for the symbolic zero attempt made by residual checks.
inline constexpr std::size_t kResidualSimplifyBudget = 1'500'000;

template <class Visit>
void for_each_point(const Grid& g, Visit&& visit)
{
    for (int i = 0; i < g.t.count; ++i)
        for (int j = 0; j < g.x.count; ++j) visit(Point{g.t.at(i), g.x.at(j), std::nullopt});
}

template <class Visit>
void for_each_point(const Grid3D& g, Visit&& visit)
{
    for (int i = 0; i < g.base.t.count; ++i)
        for (int j = 0; j < g.base.x.count; ++j)
            for (int k = 0; k < g.u.count; ++k) visit(Point{g.base.t.at(i), g.base.x.at(j), g.u.at(k)});
}

inline Point first_point(const Grid& g) { return {g.t.min, g.x.min, std::nullopt}; }
inline Point first_point(const Grid3D& g) { return {g.base.t.min, g.base.x.min, g.u.min}; }

inline const Grid& base_of(const Grid& g) { return g; }
inline const Grid& base_of(const Grid3D& g) { return g.base; }

inline void require_covered(const Expr& e, const Grid&)
{
    if (depends_on(e, Var::u)) throw UsageError("residual depends on u; a Grid3D is required");
}
inline void require_covered(const Expr&, const Grid3D&) {}

template <class G>
VerificationReport scan(std::span<const Expr> residuals, const G& grid, double tolerance, bool symbolic)
{
    grid.validate();
    const Grid& base = base_of(grid);
    for (const auto& r : residuals) require_covered(r, grid);
    VerificationReport rep;
    rep.tolerance = tolerance;
    rep.exclusion_budget = base.exclusion_budget;
    rep.total_count = grid.size();
    if (symbolic) {
        rep.symbolic_zero = true;
        for (const auto& r : residuals) {
            if (zero_test(r, kResidualSimplifyBudget) != ZeroTest::Zero) {
                rep.symbolic_zero = false;
                break;
            }
        }
    }
    if (rep.symbolic_zero) {
        // The residual is the zero function: nothing to evaluate or exclude.
        rep.worst_point = first_point(grid);
        rep.finalize();
        return rep;
    }
    std::vector<CompiledExpr> programs;
    programs.reserve(residuals.size());
    for (const auto& r : residuals) programs.emplace_back(r);
    rep.total_count = 0;
    bool have_worst = false;
    for_each_point(grid, [&](const Point& p) {
        ++rep.total_count;
        double value = 0.0;
        for (const auto& prog : programs) {
            const EvalOutcome out = prog.run(p, base.exclusion_threshold);
            if (out.status == EvalStatus::NearPole || out.status == EvalStatus::Domain) {
                ++rep.excluded_count;
                return;
            }
            const double r =
                out.status == EvalStatus::NonFinite ? std::numeric_limits<double>::infinity() : std::abs(out.value);
            value = std::max(value, r);
        }
        if (!have_worst || value > rep.max_abs_residual) {
            rep.max_abs_residual = value;
            rep.worst_point = p;
            have_worst = true;
        }
    });
    rep.finalize();
    return rep;
}

} // namespace detail

/// Max |residual| over the grid. With `symbolic` set the residual is first
/// zero-tested exactly; a symbolic zero reports max 0 with no exclusions.
/// Otherwise every point is evaluated: points where a monitored denominator
/// falls below the exclusion threshold (or sqrt gets a negative argument) are
/// excluded, and the run is inconclusive when exclusions exceed the budget.
[[nodiscard]] inline VerificationReport run_residual(const Expr& residual, const Grid& grid, double tolerance,
                                                     bool symbolic = true)
{
    return detail::scan(std::span<const Expr>(&residual, 1), grid, tolerance, symbolic);
}

[[nodiscard]] inline VerificationReport run_residual(const Expr& residual, const Grid3D& grid, double tolerance,
                                                     bool symbolic = true)
{
    return detail::scan(std::span<const Expr>(&residual, 1), grid, tolerance, symbolic);
}

/// Several residuals on one grid: a point counts once, with the largest
/// residual, and is excluded if any residual is singular there.
[[nodiscard]] inline VerificationReport run_residuals(std::span<const Expr> residuals, const Grid& grid,
                                                      double tolerance, bool symbolic = true)
{
    return detail::scan(residuals, grid, tolerance, symbolic);
}

[[nodiscard]] inline VerificationReport run_residuals(std::span<const Expr> residuals, const Grid3D& grid,
                                                      double tolerance, bool symbolic = true)
{
    return detail::scan(residuals, grid, tolerance, symbolic);
}

/// Compares the exact first derivative with the central difference
/// (e(p+h) - e(p-h)) / 2h. The reported residual is the scaled error
/// |exact - fd| / (1 + |exact|), checked against `relative_tolerance`.
///
/// With `unresolved_fraction` > 0, points where the stencil's own remainder
/// bound h^2 |d^3e/dv^3| / 6 exceeds that fraction of the tolerance are also
/// excluded: they sit so close to a pole that no second-order difference with
/// this h can match the exact derivative.
[[nodiscard]] inline VerificationReport finite_difference_check(const Expr& e, Var v, const Grid& grid,
                                                                double h = 1e-4,
                                                                double relative_tolerance = 1e-6,
                                                                double unresolved_fraction = 0.0)
{
    if (!(h > 0.0)) throw UsageError("finite-difference step must be positive");
    if (v == Var::u) throw UsageError("finite-difference check is over t or x");
    detail::require_covered(e, grid);
    grid.validate();
    const CompiledExpr f(e);
    const CompiledExpr df(diff(e, v));
    const std::optional<CompiledExpr> d3 =
        unresolved_fraction > 0.0 ? std::optional<CompiledExpr>(CompiledExpr(diff(e, v, 3))) : std::nullopt;
    VerificationReport rep;
    rep.tolerance = relative_tolerance;
    rep.exclusion_budget = grid.exclusion_budget;
    bool have_worst = false;
    const double thr = grid.exclusion_threshold;
    detail::for_each_point(grid, [&](const Point& p) {
        ++rep.total_count;
        Point lo = p;
        Point hi = p;
        (v == Var::t ? lo.t : lo.x) -= h;
        (v == Var::t ? hi.t : hi.x) += h;
        const EvalOutcome exact = df.run(p, thr);
        const EvalOutcome a = f.run(lo, thr);
        const EvalOutcome b = f.run(hi, thr);
        for (const auto* o : {&exact, &a, &b}) {
            if (o->status == EvalStatus::NearPole || o->status == EvalStatus::Domain) {
                ++rep.excluded_count;
                return;
            }
        }
        if (d3 && exact.status == EvalStatus::Ok) {
            const EvalOutcome third = d3->run(p, 0.0);
            const double bound = h * h * std::abs(third.value) / 6.0;
            if (third.status != EvalStatus::Ok ||
                bound > unresolved_fraction * relative_tolerance * (1.0 + std::abs(exact.value))) {
                ++rep.excluded_count;
                return;
            }
        }
        double err = std::numeric_limits<double>::infinity();
        if (exact.status == EvalStatus::Ok && a.status == EvalStatus::Ok && b.status == EvalStatus::Ok) {
            const double fd = (b.value - a.value) / (2.0 * h);
            err = std::abs(exact.value - fd) / (1.0 + std::abs(exact.value));
        }
        if (!have_worst || err > rep.max_abs_residual) {
            rep.max_abs_residual = err;
            rep.worst_point = p;
            have_worst = true;
        }
    });
    rep.finalize();
    return rep;
}

} // namespace redop
