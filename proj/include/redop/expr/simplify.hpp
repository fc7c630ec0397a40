#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "redop/expr/expr.hpp"
#include "redop/expr/print.hpp"

// Canonical form used by simplify(): a rational function N / (F1^m1 ... Fk^mk)
// whose numerator N and denominator factors Fi are expanded polynomials over
// the generators t, x, u, sin(A), cos(A), sqrt(A) and a single merged
// exponential exp(A) per monomial (exp factors are units, so they carry any
// integer power and cancel exactly). Kernel arguments A are themselves in
// canonical form. Denominator factors are normalized (no monomial content,
// leading coefficient 1) so equal factors are recognized structurally, sums
// use the least common multiple of the factor lists, and a factor is
// cancelled whenever it divides the numerator exactly. A rational function
// is zero iff its expanded numerator is the zero polynomial, which makes the
// zero test complete on the polynomial fragment (and on everything whose
// vanishing follows from the derivative rules alone).

namespace redop {

namespace detail::nf {

struct BudgetExceeded {};
struct DivisionByZero {};

struct Monomial {
    std::array<int, 3> var{};                    // exponents of t, x, u (>= 0)
    std::vector<std::pair<int, int>> kernel;     // (kernel id, exponent > 0), sorted by kernel key
    int exp = -1;                                // exp-argument id, -1 = none
};

struct MonoGreater {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

using Poly = std::map<Monomial, Number, MonoGreater>;

struct Factor {
    Poly poly;
    int mult = 0;
};

struct RF {
    Poly num;
    std::vector<Factor> den;
};

enum class KernelKind : std::uint8_t { Sin, Cos, Sqrt };

struct KernelEntry {
    KernelKind kind;
    Expr expr;          // canonical kernel, e.g. sin(x - t)
    std::string key;
};

struct ExpEntry {
    std::shared_ptr<const RF> arg;
    Expr arg_expr;
    std::string key;
};

/// Per-thread intern tables for kernel generators and exponential arguments.
struct Tables {
    std::vector<KernelEntry> kernels;
    std::map<std::string, int> kernel_ids;
    std::vector<ExpEntry> exps;
    std::map<std::string, int> exp_ids;
    std::map<std::pair<int, int>, int> exp_sum;
    std::map<int, int> exp_negated;
    std::size_t work = 0;
    std::size_t budget = 0;

    static Tables& local()
    {
        thread_local Tables tables;
        return tables;
    }

    void charge(std::size_t amount)
    {
        work += amount;
        if (budget != 0 && work > budget) throw BudgetExceeded{};
    }
};

inline int compare_kernel_ids(int a, int b)
{
    if (a == b) return 0;
    const auto& t = Tables::local();
    return t.kernels[a].key < t.kernels[b].key ? -1 : 1;
}

inline int compare_exp_ids(int a, int b)
{
    if (a == b) return 0;
    if (a < 0) return -1;
    if (b < 0) return 1;
    const auto& t = Tables::local();
    return t.exps[a].key < t.exps[b].key ? -1 : 1;
}

/// Monomial order: graded on (t, x, u), then x, t, u, then kernel exponents
/// (sparse lexicographic by kernel key), then the exponential argument.
inline int compare_ignoring_exp(const Monomial& a, const Monomial& b)
{
    const int da = a.var[0] + a.var[1] + a.var[2];
    const int db = b.var[0] + b.var[1] + b.var[2];
    if (da != db) return da < db ? -1 : 1;
    for (int i : {1, 0, 2}) {
        if (a.var[i] != b.var[i]) return a.var[i] < b.var[i] ? -1 : 1;
    }
    std::size_t i = 0, j = 0;
    while (i < a.kernel.size() && j < b.kernel.size()) {
        const int c = compare_kernel_ids(a.kernel[i].first, b.kernel[j].first);
        if (c == 0) {
            if (a.kernel[i].second != b.kernel[j].second)
                return a.kernel[i].second < b.kernel[j].second ? -1 : 1;
            ++i;
            ++j;
        } else {
            return c < 0 ? 1 : -1;
        }
    }
    if (i < a.kernel.size()) return 1;
    if (j < b.kernel.size()) return -1;
    return 0;
}

inline int compare(const Monomial& a, const Monomial& b)
{
    if (const int c = compare_ignoring_exp(a, b); c != 0) return c;
    return compare_exp_ids(a.exp, b.exp);
}

inline bool MonoGreater::operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }

inline int compare(const Poly& a, const Poly& b)
{
    auto ia = a.begin();
    auto ib = b.begin();
    for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
        if (const int c = compare(ia->first, ib->first); c != 0) return c;
        if (const int c = redop::compare(ia->second, ib->second); c != 0) return c;
    }
    if (ia != a.end()) return 1;
    if (ib != b.end()) return -1;
    return 0;
}

inline bool is_unit_monomial(const Monomial& m)
{
    return m.var == std::array<int, 3>{} && m.kernel.empty() && m.exp < 0;
}

// --- exponential arguments ----------------------------------------------------

RF add(const RF& a, const RF& b);
RF neg(const RF& a);
Expr to_expr(const RF& r);
inline bool is_zero(const RF& r) { return r.num.empty(); }

inline int intern_exp(const RF& arg)
{
    if (is_zero(arg)) return -1;
    Expr e = to_expr(arg);
    std::string key = to_string(e);
    auto& t = Tables::local();
    if (auto it = t.exp_ids.find(key); it != t.exp_ids.end()) return it->second;
    const int id = static_cast<int>(t.exps.size());
    t.exps.push_back({std::make_shared<const RF>(arg), e, key});
    t.exp_ids.emplace(std::move(key), id);
    return id;
}

inline int exp_add(int a, int b)
{
    if (a < 0) return b;
    if (b < 0) return a;
    auto& t = Tables::local();
    const auto key = std::minmax(a, b);
    if (auto it = t.exp_sum.find(key); it != t.exp_sum.end()) return it->second;
    const RF sum = add(*t.exps[a].arg, *t.exps[b].arg);
    const int id = intern_exp(sum);
    Tables::local().exp_sum.emplace(key, id);
    return id;
}

inline int exp_neg(int a)
{
    if (a < 0) return a;
    auto& t = Tables::local();
    if (auto it = t.exp_negated.find(a); it != t.exp_negated.end()) return it->second;
    const int id = intern_exp(neg(*t.exps[a].arg));
    Tables::local().exp_negated.emplace(a, id);
    return id;
}

// --- monomials ------------------------------------------------------------------

inline Monomial multiply(const Monomial& a, const Monomial& b)
{
    Monomial m;
    for (int i = 0; i < 3; ++i) m.var[i] = a.var[i] + b.var[i];
    std::size_t i = 0, j = 0;
    while (i < a.kernel.size() || j < b.kernel.size()) {
        if (j == b.kernel.size()) {
            m.kernel.push_back(a.kernel[i++]);
        } else if (i == a.kernel.size()) {
            m.kernel.push_back(b.kernel[j++]);
        } else {
            const int c = compare_kernel_ids(a.kernel[i].first, b.kernel[j].first);
            if (c == 0) {
                m.kernel.emplace_back(a.kernel[i].first, a.kernel[i].second + b.kernel[j].second);
                ++i;
                ++j;
            } else if (c < 0) {
                m.kernel.push_back(a.kernel[i++]);
            } else {
                m.kernel.push_back(b.kernel[j++]);
            }
        }
    }
    m.exp = exp_add(a.exp, b.exp);
    return m;
}

/// a / b if the result has no negative exponents (exp parts always divide).
inline std::optional<Monomial> divide(const Monomial& a, const Monomial& b)
{
    Monomial m;
    for (int i = 0; i < 3; ++i) {
        m.var[i] = a.var[i] - b.var[i];
        if (m.var[i] < 0) return std::nullopt;
    }
    std::size_t i = 0;
    for (const auto& [id, e] : b.kernel) {
        while (i < a.kernel.size() && compare_kernel_ids(a.kernel[i].first, id) < 0) m.kernel.push_back(a.kernel[i++]);
        if (i == a.kernel.size() || a.kernel[i].first != id || a.kernel[i].second < e) return std::nullopt;
        if (a.kernel[i].second > e) m.kernel.emplace_back(id, a.kernel[i].second - e);
        ++i;
    }
    while (i < a.kernel.size()) m.kernel.push_back(a.kernel[i++]);
    m.exp = exp_add(a.exp, exp_neg(b.exp));
    return m;
}

// --- polynomials ----------------------------------------------------------------

inline void add_term(Poly& p, const Monomial& m, const Number& c)
{
    if (c.is_zero()) return;
    auto [it, inserted] = p.try_emplace(m, c);
    if (!inserted) {
        it->second = it->second + c;
        if (it->second.is_zero()) p.erase(it);
    }
}

inline Poly constant_poly(const Number& c)
{
    Poly p;
    add_term(p, Monomial{}, c);
    return p;
}

inline Poly add(const Poly& a, const Poly& b)
{
    Poly r = a;
    for (const auto& [m, c] : b) add_term(r, m, c);
    return r;
}

inline Poly scale(const Poly& a, const Number& c, const Monomial& m = {})
{
    Poly r;
    const bool unit = is_unit_monomial(m);
    for (const auto& [mm, cc] : a) add_term(r, unit ? mm : multiply(mm, m), cc * c);
    return r;
}

inline Poly multiply(const Poly& a, const Poly& b)
{
    Tables::local().charge(a.size() * b.size());
    Poly r;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) add_term(r, multiply(ma, mb), ca * cb);
    return r;
}

inline Poly power(const Poly& a, int k)
{
    Poly result = constant_poly(Number(1));
    for (int i = 0; i < k; ++i) result = multiply(result, a);
    return result;
}

/// Exact quotient a / d, or nullopt if d does not divide a (or the attempt
/// exceeds its step limit).
inline std::optional<Poly> exact_divide(const Poly& a, const Poly& d)
{
    if (d.empty()) return std::nullopt;
    if (a.empty()) return Poly{};
    const auto& [lead_m, lead_c] = *d.begin();
    if (!divide(a.begin()->first, lead_m)) return std::nullopt;
    if (!divide(a.rbegin()->first, d.rbegin()->first)) return std::nullopt;
    if (d.size() == 1) {
        Poly q;
        for (const auto& [m, c] : a) {
            auto mm = divide(m, lead_m);
            if (!mm) return std::nullopt;
            add_term(q, *mm, c / lead_c);
        }
        return q;
    }
    Poly r = a;
    Poly q;
    const std::size_t limit = 64 + 8 * a.size();
    for (std::size_t step = 0; !r.empty(); ++step) {
        if (step > limit) return std::nullopt;
        const auto lead = r.begin();
        auto m = divide(lead->first, lead_m);
        if (!m) return std::nullopt;
        const Number c = lead->second / lead_c;
        const Monomial lead_copy = lead->first;
        add_term(q, *m, c);
        Tables::local().charge(d.size());
        for (const auto& [dm, dc] : d) add_term(r, multiply(dm, *m), -(dc * c));
        r.erase(lead_copy);  // exact for rationals; drops float round-off residue
    }
    return q;
}

// --- factor normalization ---------------------------------------------------------

struct Normalized {
    Number coefficient;              // overall constant
    Monomial content;                // common var/kernel factor (no exp)
    int exp_unit = -1;               // exponential pulled out of the chosen term
    Poly primitive;                  // remaining polynomial, chosen term has coefficient 1
};

/// p = coefficient * content * exp(exp_unit) * primitive
inline Normalized normalize(const Poly& p)
{
    Normalized n;
    Monomial content = p.begin()->first;
    content.exp = -1;
    for (const auto& [m, c] : p) {
        for (int i = 0; i < 3; ++i) content.var[i] = std::min(content.var[i], m.var[i]);
        std::vector<std::pair<int, int>> kept;
        for (const auto& [id, e] : content.kernel) {
            for (const auto& [mid, me] : m.kernel) {
                if (mid == id) {
                    kept.emplace_back(id, std::min(e, me));
                    break;
                }
            }
        }
        content.kernel = std::move(kept);
    }
    // Chosen term: greatest ignoring exp, smallest exp among those.
    auto chosen = p.begin();
    for (auto it = std::next(p.begin()); it != p.end(); ++it) {
        if (compare_ignoring_exp(it->first, p.begin()->first) != 0) break;
        if (compare_exp_ids(it->first.exp, chosen->first.exp) < 0) chosen = it;
    }
    n.coefficient = chosen->second;
    n.content = content;
    n.exp_unit = chosen->first.exp;
    Monomial divisor = content;
    divisor.exp = n.exp_unit;
    for (const auto& [m, c] : p) add_term(n.primitive, *divide(m, divisor), c / n.coefficient);
    return n;
}

inline Poly single(const Monomial& m)
{
    Poly p;
    add_term(p, m, Number(1));
    return p;
}

/// Denominator factors for the given content monomial (one per generator).
inline std::vector<Factor> content_factors(const Monomial& content)
{
    std::vector<Factor> out;
    for (int i = 0; i < 3; ++i) {
        if (content.var[i] == 0) continue;
        Monomial g;
        g.var[i] = 1;
        out.push_back({single(g), content.var[i]});
    }
    for (const auto& [id, e] : content.kernel) {
        Monomial g;
        g.kernel.emplace_back(id, 1);
        out.push_back({single(g), e});
    }
    return out;
}

inline void insert_factor(std::vector<Factor>& den, Factor f)
{
    if (f.mult == 0) return;
    auto it = std::lower_bound(den.begin(), den.end(), f,
                               [](const Factor& a, const Factor& b) { return compare(a.poly, b.poly) < 0; });
    if (it != den.end() && compare(it->poly, f.poly) == 0) {
        it->mult += f.mult;
    } else {
        den.insert(it, std::move(f));
    }
}

// --- rational functions -------------------------------------------------------------

inline RF constant(const Number& c)
{
    RF r;
    r.num = constant_poly(c);
    return r;
}

inline RF monomial(const Monomial& m)
{
    RF r;
    r.num = single(m);
    return r;
}

inline Poly expand_den(const std::vector<Factor>& den, const std::vector<Factor>& target)
{
    // Product of target factors raised to (target mult - den mult).
    Poly p = constant_poly(Number(1));
    for (const auto& f : target) {
        int have = 0;
        for (const auto& g : den) {
            if (compare(g.poly, f.poly) == 0) {
                have = g.mult;
                break;
            }
        }
        if (f.mult > have) p = multiply(p, power(f.poly, f.mult - have));
    }
    return p;
}

inline void cancel(RF& r)
{
    if (r.num.empty()) {
        r.den.clear();
        return;
    }
    for (auto& f : r.den) {
        while (f.mult > 0) {
            auto q = exact_divide(r.num, f.poly);
            if (!q) break;
            r.num = std::move(*q);
            --f.mult;
        }
    }
    std::erase_if(r.den, [](const Factor& f) { return f.mult == 0; });
}

inline RF add(const RF& a, const RF& b)
{
    if (is_zero(a)) return b;
    if (is_zero(b)) return a;
    RF r;
    for (const auto& f : a.den) insert_factor(r.den, f);
    for (const auto& f : b.den) {
        auto it = std::find_if(r.den.begin(), r.den.end(),
                               [&](const Factor& g) { return compare(g.poly, f.poly) == 0; });
        if (it == r.den.end()) {
            insert_factor(r.den, f);
        } else {
            it->mult = std::max(it->mult, f.mult);
        }
    }
    const Poly fa = expand_den(a.den, r.den);
    const Poly fb = expand_den(b.den, r.den);
    r.num = add(multiply(a.num, fa), multiply(b.num, fb));
    cancel(r);
    return r;
}

inline RF neg(const RF& a)
{
    RF r = a;
    for (auto& [m, c] : r.num) c = -c;
    return r;
}

inline RF multiply(const RF& a, const RF& b)
{
    if (is_zero(a) || is_zero(b)) return RF{};
    RF r;
    r.num = multiply(a.num, b.num);
    r.den = a.den;
    for (const auto& f : b.den) insert_factor(r.den, f);
    cancel(r);
    return r;
}

inline RF reciprocal(const RF& a)
{
    if (is_zero(a)) throw DivisionByZero{};
    const Normalized n = normalize(a.num);
    RF r;
    Poly num = constant_poly(Number(1));
    for (const auto& f : a.den) num = multiply(num, power(f.poly, f.mult));
    Monomial unit;
    unit.exp = exp_neg(n.exp_unit);
    r.num = scale(num, Number(1) / n.coefficient, unit);
    for (auto& f : content_factors(n.content)) insert_factor(r.den, std::move(f));
    if (!(n.primitive.size() == 1 && is_unit_monomial(n.primitive.begin()->first)))
        insert_factor(r.den, {n.primitive, 1});
    cancel(r);
    return r;
}

inline RF power(const RF& a, int k)
{
    if (k < 0) return power(reciprocal(a), -k);
    RF result = constant(Number(1));
    RF base = a;
    while (k > 0) {
        if (k & 1) result = multiply(result, base);
        k >>= 1;
        if (k > 0) base = multiply(base, base);
    }
    return result;
}

inline bool leading_negative(const RF& a) { return !a.num.empty() && a.num.begin()->second.is_negative(); }

inline int intern_kernel(KernelKind kind, const RF& arg)
{
    Expr a = to_expr(arg);
    Expr e = kind == KernelKind::Sin ? Expr::make(Kind::Sin, {a})
             : kind == KernelKind::Cos ? Expr::make(Kind::Cos, {a})
                                       : Expr::make(Kind::Sqrt, {a});
    std::string key = to_string(e);
    auto& t = Tables::local();
    if (auto it = t.kernel_ids.find(key); it != t.kernel_ids.end()) return it->second;
    const int id = static_cast<int>(t.kernels.size());
    t.kernels.push_back({kind, e, key});
    t.kernel_ids.emplace(std::move(key), id);
    return id;
}

inline RF kernel(KernelKind kind, const RF& arg, const Number& sign = Number(1))
{
    Monomial m;
    m.kernel.emplace_back(intern_kernel(kind, arg), 1);
    RF r = monomial(m);
    if (sign.is_negative()) r = neg(r);
    return r;
}

/// Conversion Expr -> RF with a memo over DAG nodes.
class Converter {
public:
    RF convert(const Expr& e)
    {
        if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
        RF r = convert_uncached(e);
        memo_.emplace(e.id(), r);
        return r;
    }

private:
    std::unordered_map<const detail::Node*, RF> memo_;

    // 1/e factor by factor, so a printed denominator product converts back
    // to the same factor list instead of one expanded factor.
    RF invert(const Expr& e)
    {
        switch (e.kind()) {
            case Kind::Product: {
                RF r = constant(Number(1));
                for (const auto& a : e.args()) r = multiply(r, invert(a));
                return r;
            }
            case Kind::Power: return power(invert(e.arg(0)), e.exponent());
            case Kind::Neg: return neg(invert(e.arg(0)));
            default: return reciprocal(convert(e));
        }
    }

    RF convert_uncached(const Expr& e)
    {
        switch (e.kind()) {
            case Kind::Rational:
            case Kind::Real: return constant(e.value());
            case Kind::Variable: {
                Monomial m;
                m.var[static_cast<int>(e.var())] = 1;
                return monomial(m);
            }
            case Kind::Neg: return neg(convert(e.arg(0)));
            case Kind::Sum: {
                RF r;
                for (const auto& a : e.args()) r = add(r, convert(a));
                return r;
            }
            case Kind::Product: {
                RF r = constant(Number(1));
                for (const auto& a : e.args()) r = multiply(r, convert(a));
                return r;
            }
            case Kind::Quotient: return multiply(convert(e.arg(0)), invert(e.arg(1)));
            case Kind::Power: return power(convert(e.arg(0)), e.exponent());
            case Kind::Exp: {
                const RF a = convert(e.arg(0));
                Monomial m;
                m.exp = intern_exp(a);
                return monomial(m);
            }
            case Kind::Sin: {
                const RF a = convert(e.arg(0));
                if (is_zero(a)) return RF{};
                if (leading_negative(a)) return kernel(KernelKind::Sin, neg(a), Number(-1));
                return kernel(KernelKind::Sin, a);
            }
            case Kind::Cos: {
                const RF a = convert(e.arg(0));
                if (is_zero(a)) return constant(Number(1));
                return kernel(KernelKind::Cos, leading_negative(a) ? neg(a) : a);
            }
            case Kind::Sqrt: return kernel(KernelKind::Sqrt, convert(e.arg(0)));
        }
        return RF{};
    }
};

inline Expr to_expr(const Monomial& m, const Number& c)
{
    std::vector<Expr> factors;
    factors.emplace_back(c);
    for (int i : {0, 1, 2}) {
        if (m.var[i] > 0) factors.push_back(make_power(Expr::variable(static_cast<Var>(i)), m.var[i]));
    }
    const auto& t = Tables::local();
    for (const auto& [id, e] : m.kernel) factors.push_back(make_power(t.kernels[id].expr, e));
    if (m.exp >= 0) factors.push_back(Expr::make(Kind::Exp, {t.exps[m.exp].arg_expr}));
    return make_product(std::move(factors));
}

inline Expr to_expr(const Poly& p)
{
    if (p.empty()) return Expr(0);
    std::vector<Expr> terms;
    for (const auto& [m, c] : p) terms.push_back(to_expr(m, c));
    return make_sum(std::move(terms));
}

inline Expr to_expr(const RF& r)
{
    Expr num = to_expr(r.num);
    if (r.den.empty()) return num;
    std::vector<Expr> factors;
    for (const auto& f : r.den) factors.push_back(make_power(to_expr(f.poly), f.mult));
    return make_quotient(num, make_product(std::move(factors)));
}

/// RAII scope installing a work budget for the current thread.
class BudgetScope {
public:
    explicit BudgetScope(std::size_t budget)
    {
        auto& t = Tables::local();
        saved_work_ = t.work;
        saved_budget_ = t.budget;
        t.work = 0;
        t.budget = budget;
    }
    ~BudgetScope()
    {
        auto& t = Tables::local();
        t.work = saved_work_;
        t.budget = saved_budget_;
    }
    BudgetScope(const BudgetScope&) = delete;
    BudgetScope& operator=(const BudgetScope&) = delete;

private:
    std::size_t saved_work_;
    std::size_t saved_budget_;
};

} // namespace detail::nf

/// Work limit (coefficient multiplications) for a single simplification.
inline constexpr std::size_t kDefaultSimplifyBudget = 4'000'000;

/// Canonical form of e, or nullopt when the work budget is exhausted.
[[nodiscard]] inline std::optional<Expr> try_simplify(const Expr& e, std::size_t budget = kDefaultSimplifyBudget)
{
    namespace nf = detail::nf;
    nf::BudgetScope scope(budget);
    try {
        nf::Converter conv;
        return nf::to_expr(conv.convert(e));
    } catch (const nf::BudgetExceeded&) {
        return std::nullopt;
    } catch (const nf::DivisionByZero&) {
        return std::nullopt;
    }
}

/// Canonical form: expanded numerator over normalized, factor-wise reduced
/// denominator. Pointwise equal to e on its domain and idempotent. Complete
/// for polynomial identities; transcendental identities such as
/// sin(x)^2 + cos(x)^2 = 1 are not applied. Returns e unchanged if the work
/// budget runs out or a denominator is identically zero.
[[nodiscard]] inline Expr simplify(const Expr& e, std::size_t budget = kDefaultSimplifyBudget)
{
    if (auto s = try_simplify(e, budget)) return *s;
    return e;
}

enum class ZeroTest { Zero, NotProvenZero, Unknown };

/// Symbolic zero test through the canonical form.
[[nodiscard]] inline ZeroTest zero_test(const Expr& e, std::size_t budget = kDefaultSimplifyBudget)
{
    namespace nf = detail::nf;
    nf::BudgetScope scope(budget);
    try {
        nf::Converter conv;
        return nf::is_zero(conv.convert(e)) ? ZeroTest::Zero : ZeroTest::NotProvenZero;
    } catch (const nf::BudgetExceeded&) {
        return ZeroTest::Unknown;
    } catch (const nf::DivisionByZero&) {
        return ZeroTest::Unknown;
    }
}

[[nodiscard]] inline bool is_symbolic_zero(const Expr& e) { return zero_test(e) == ZeroTest::Zero; }

/// Exact polynomial coefficients in (t, x, u), keyed by exponent triple, if
/// the canonical form of e is a polynomial with rational coefficients.
[[nodiscard]] inline std::optional<std::map<std::array<int, 3>, Rational>> polynomial_coefficients(const Expr& e)
{
    namespace nf = detail::nf;
    nf::BudgetScope scope(kDefaultSimplifyBudget);
    try {
        nf::Converter conv;
        const nf::RF r = conv.convert(e);
        if (!r.den.empty()) return std::nullopt;
        std::map<std::array<int, 3>, Rational> out;
        for (const auto& [m, c] : r.num) {
            if (!m.kernel.empty() || m.exp >= 0 || !c.is_exact()) return std::nullopt;
            out.emplace(m.var, c.exact());
        }
        return out;
    } catch (const nf::BudgetExceeded&) {
        return std::nullopt;
    } catch (const nf::DivisionByZero&) {
        return std::nullopt;
    }
}

} // namespace redop
