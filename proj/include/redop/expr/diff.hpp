#pragma once

#include <array>
#include <unordered_map>
#include <utility>

#include "redop/errors.hpp"
#include "redop/expr/expr.hpp"

namespace redop {

namespace detail {

/// Per-thread memo of first derivatives keyed by node identity. The source
/// expression is pinned in the entry so a node address is never reused while
/// its entry is live; the table is flushed when it grows past a fixed size.
class DiffCache {
public:
    static DiffCache& local()
    {
        thread_local DiffCache cache;
        return cache;
    }

    const Expr* find(const Expr& e, Var v) const
    {
        const auto& table = tables_[static_cast<int>(v)];
        auto it = table.find(e.id());
        return it == table.end() ? nullptr : &it->second.second;
    }

    void store(const Expr& e, Var v, const Expr& d)
    {
        auto& table = tables_[static_cast<int>(v)];
        if (table.size() > kMaxEntries) table.clear();
        table.emplace(e.id(), std::make_pair(e, d));
    }

    void clear()
    {
        for (auto& t : tables_) t.clear();
    }

private:
    static constexpr std::size_t kMaxEntries = 200000;
    std::array<std::unordered_map<const Node*, std::pair<Expr, Expr>>, 3> tables_;
};

inline Expr diff_once(const Expr& e, Var v)
{
    switch (e.kind()) {
        case Kind::Rational:
        case Kind::Real: return Expr(0);
        case Kind::Variable: return Expr(e.var() == v ? 1 : 0);
        default: break;
    }
    if (!depends_on(e, v)) return Expr(0);
    if (const Expr* hit = DiffCache::local().find(e, v)) return *hit;

    Expr d;
    switch (e.kind()) {
        case Kind::Neg: d = make_neg(diff_once(e.arg(0), v)); break;
        case Kind::Sum: {
            std::vector<Expr> terms;
            for (const auto& a : e.args()) terms.push_back(diff_once(a, v));
            d = make_sum(std::move(terms));
            break;
        }
        case Kind::Product: {
            const auto f = e.args();
            std::vector<Expr> terms;
            for (std::size_t i = 0; i < f.size(); ++i) {
                Expr di = diff_once(f[i], v);
                if (di.is_zero()) continue;
                std::vector<Expr> factors(f.begin(), f.end());
                factors[i] = di;
                terms.push_back(make_product(std::move(factors)));
            }
            d = make_sum(std::move(terms));
            break;
        }
        case Kind::Quotient: {
            const Expr& n = e.arg(0);
            const Expr& q = e.arg(1);
            const Expr dn = diff_once(n, v);
            const Expr dq = diff_once(q, v);
            if (dq.is_zero()) {
                d = make_quotient(dn, q);
            } else {
                d = make_quotient(dn * q - n * dq, make_power(q, 2));
            }
            break;
        }
        case Kind::Power: {
            const Expr& b = e.arg(0);
            const int k = e.exponent();
            d = make_product({Expr(k), make_power(b, k - 1), diff_once(b, v)});
            break;
        }
        case Kind::Exp: d = e * diff_once(e.arg(0), v); break;
        case Kind::Sin: d = cos(e.arg(0)) * diff_once(e.arg(0), v); break;
        case Kind::Cos: d = make_neg(sin(e.arg(0)) * diff_once(e.arg(0), v)); break;
        case Kind::Sqrt: d = make_quotient(diff_once(e.arg(0), v), Expr(2) * e); break;
        default: break;
    }
    DiffCache::local().store(e, v, d);
    return d;
}

} // namespace detail

/// Exact derivative of the given order. The result is built with the local
/// rewrites only; call simplify() for a canonical form.
[[nodiscard]] inline Expr diff(const Expr& e, Var v, int order = 1)
{
    if (order < 0) throw UsageError("derivative order must be non-negative");
    Expr cur = e;
    for (int i = 0; i < order; ++i) cur = detail::diff_once(cur, v);
    return cur;
}

/// Replace variables by expressions (simultaneously).
[[nodiscard]] inline Expr substitute(const Expr& e, const std::array<const Expr*, 3>& replacement)
{
    std::unordered_map<const detail::Node*, Expr> memo;
    auto rec = [&](const Expr& cur, auto&& self) -> Expr {
        if (auto it = memo.find(cur.id()); it != memo.end()) return it->second;
        Expr out;
        switch (cur.kind()) {
            case Kind::Rational:
            case Kind::Real: out = cur; break;
            case Kind::Variable: {
                const Expr* r = replacement[static_cast<int>(cur.var())];
                out = r ? *r : cur;
                break;
            }
            case Kind::Neg: out = make_neg(self(cur.arg(0), self)); break;
            case Kind::Sum:
            case Kind::Product: {
                std::vector<Expr> parts;
                for (const auto& a : cur.args()) parts.push_back(self(a, self));
                out = cur.kind() == Kind::Sum ? make_sum(std::move(parts)) : make_product(std::move(parts));
                break;
            }
            case Kind::Quotient: out = make_quotient(self(cur.arg(0), self), self(cur.arg(1), self)); break;
            case Kind::Power: out = make_power(self(cur.arg(0), self), cur.exponent()); break;
            case Kind::Exp: out = exp(self(cur.arg(0), self)); break;
            case Kind::Sin: out = sin(self(cur.arg(0), self)); break;
            case Kind::Cos: out = cos(self(cur.arg(0), self)); break;
            case Kind::Sqrt: out = sqrt(self(cur.arg(0), self)); break;
        }
        memo.emplace(cur.id(), out);
        return out;
    };
    return rec(e, rec);
}

[[nodiscard]] inline Expr substitute(const Expr& e, Var v, const Expr& by)
{
    std::array<const Expr*, 3> r{nullptr, nullptr, nullptr};
    r[static_cast<int>(v)] = &by;
    return substitute(e, r);
}

} // namespace redop
