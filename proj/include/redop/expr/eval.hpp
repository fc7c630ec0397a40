#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "redop/errors.hpp"
#include "redop/expr/expr.hpp"
#include "redop/expr/print.hpp"

namespace redop {

struct Point {
    double t = 0.0;
    double x = 0.0;
    std::optional<double> u;
};

/// Division by zero or sqrt of a negative number during evaluation.
class EvalDomainError : public Error {
public:
    EvalDomainError(const std::string& what, Expr offender)
        : Error(what + ": " + to_string(offender)), offender_(std::move(offender))
    {
    }
    [[nodiscard]] const Expr& offender() const noexcept { return offender_; }

private:
    Expr offender_;
};

enum class EvalStatus : std::uint8_t {
    Ok,
    NearPole,     // some denominator magnitude fell below the exclusion threshold
    Domain,       // exact zero denominator or negative sqrt argument
    NonFinite,    // overflow / NaN
};

struct EvalOutcome {
    double value = 0.0;
    EvalStatus status = EvalStatus::Ok;
    std::size_t offender = 0;   // node index into CompiledExpr::node()
};

/// Expression flattened into a straight-line program over its DAG. Every
/// quotient denominator and negative-power base is monitored while running.
class CompiledExpr {
public:
    explicit CompiledExpr(const Expr& e) : root_(e)
    {
        std::unordered_map<const detail::Node*, std::uint32_t> index;
        std::vector<std::pair<Expr, bool>> stack{{e, false}};
        while (!stack.empty()) {
            auto [cur, expanded] = stack.back();
            stack.pop_back();
            if (index.count(cur.id())) continue;
            if (!expanded) {
                stack.emplace_back(cur, true);
                for (const auto& a : cur.args())
                    if (!index.count(a.id())) stack.emplace_back(a, false);
                continue;
            }
            Instr in;
            in.kind = cur.kind();
            in.exponent = cur.exponent();
            if (cur.is_constant()) in.constant = cur.value().approx();
            if (cur.kind() == Kind::Variable) in.var = cur.var();
            in.first = static_cast<std::uint32_t>(operands_.size());
            for (const auto& a : cur.args()) operands_.push_back(index.at(a.id()));
            in.count = static_cast<std::uint32_t>(cur.args().size());
            index.emplace(cur.id(), static_cast<std::uint32_t>(code_.size()));
            code_.push_back(in);
            nodes_.push_back(cur);
        }
        uses_u_ = depends_on(e, Var::u);
    }

    [[nodiscard]] bool uses_u() const noexcept { return uses_u_; }
    [[nodiscard]] const Expr& expr() const noexcept { return root_; }
    [[nodiscard]] const Expr& node(std::size_t i) const { return nodes_.at(i); }
    [[nodiscard]] std::size_t size() const noexcept { return code_.size(); }

    /// Evaluate at p. threshold = 0 reports only exact zero denominators.
    [[nodiscard]] EvalOutcome run(const Point& p, double threshold = 0.0) const
    {
        if (uses_u_ && !p.u) throw UsageError("evaluation point lacks a binding for u");
        std::vector<double> r(code_.size());
        for (std::size_t i = 0; i < code_.size(); ++i) {
            const Instr& in = code_[i];
            const std::uint32_t* ops = operands_.data() + in.first;
            double v = 0.0;
            switch (in.kind) {
                case Kind::Rational:
                case Kind::Real: v = in.constant; break;
                case Kind::Variable:
                    v = in.var == Var::t ? p.t : in.var == Var::x ? p.x : *p.u;
                    break;
                case Kind::Neg: v = -r[ops[0]]; break;
                case Kind::Sum:
                    for (std::uint32_t k = 0; k < in.count; ++k) v += r[ops[k]];
                    break;
                case Kind::Product:
                    v = 1.0;
                    for (std::uint32_t k = 0; k < in.count; ++k) v *= r[ops[k]];
                    break;
                case Kind::Quotient: {
                    const double den = r[ops[1]];
                    if (den == 0.0) return {0.0, EvalStatus::Domain, i};
                    if (std::abs(den) < threshold) return {0.0, EvalStatus::NearPole, i};
                    v = r[ops[0]] / den;
                    break;
                }
                case Kind::Power: {
                    const double b = r[ops[0]];
                    if (in.exponent < 0) {
                        if (b == 0.0) return {0.0, EvalStatus::Domain, i};
                        if (std::abs(b) < threshold) return {0.0, EvalStatus::NearPole, i};
                    }
                    v = ipow(b, in.exponent);
                    break;
                }
                case Kind::Exp: v = std::exp(r[ops[0]]); break;
                case Kind::Sin: v = std::sin(r[ops[0]]); break;
                case Kind::Cos: v = std::cos(r[ops[0]]); break;
                case Kind::Sqrt: {
                    const double a = r[ops[0]];
                    if (a < 0.0) return {0.0, EvalStatus::Domain, i};
                    v = std::sqrt(a);
                    break;
                }
            }
            if (!std::isfinite(v)) return {0.0, EvalStatus::NonFinite, i};
            r[i] = v;
        }
        return {r.back(), EvalStatus::Ok, code_.size() - 1};
    }

private:
    struct Instr {
        Kind kind = Kind::Rational;
        Var var = Var::t;
        int exponent = 0;
        double constant = 0.0;
        std::uint32_t first = 0;
        std::uint32_t count = 0;
    };

    static double ipow(double b, int k)
    {
        if (k < 0) return 1.0 / ipow(b, -k);
        double result = 1.0;
        while (k > 0) {
            if (k & 1) result *= b;
            b *= b;
            k >>= 1;
        }
        return result;
    }

    Expr root_;
    std::vector<Instr> code_;
    std::vector<std::uint32_t> operands_;
    std::vector<Expr> nodes_;
    bool uses_u_ = false;
};

/// IEEE double value of e at p; throws EvalDomainError on a pole or a
/// negative sqrt argument and UsageError if u is needed but unbound.
[[nodiscard]] inline double eval(const Expr& e, const Point& p)
{
    const CompiledExpr program(e);
    const EvalOutcome out = program.run(p);
    switch (out.status) {
        case EvalStatus::Ok: return out.value;
        case EvalStatus::NonFinite:
            throw EvalDomainError("non-finite intermediate value", program.node(out.offender));
        default: {
            const Expr& bad = program.node(out.offender);
            const char* what = bad.kind() == Kind::Sqrt ? "negative sqrt argument" : "division by zero";
            throw EvalDomainError(what, bad);
        }
    }
}

} // namespace redop
