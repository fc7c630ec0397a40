#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <compare>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>

#include "redop/errors.hpp"

namespace redop {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

[[nodiscard]] inline Rational rational(long num, long den = 1)
{
    return Rational(Integer(num), Integer(den));
}

/// Parse "3", "-7", "1/2", "-3/4".
[[nodiscard]] inline Rational parse_rational(std::string_view text)
{
    auto trim = [](std::string_view s) {
        while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
        while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    auto valid_int = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
        if (s.empty()) return false;
        for (char c : s)
            if (c < '0' || c > '9') return false;
        return true;
    };
    auto to_int = [](std::string_view s) {
        if (!s.empty() && s.front() == '+') s.remove_prefix(1);
        return Integer(std::string(s));
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        if (!valid_int(text)) throw UsageError("not a rational number: '" + std::string(text) + "'");
        return Rational(to_int(text));
    }
    const auto num = trim(text.substr(0, slash));
    const auto den = trim(text.substr(slash + 1));
    if (!valid_int(num) || !valid_int(den))
        throw UsageError("not a rational number: '" + std::string(text) + "'");
    const Integer d = to_int(den);
    if (d == 0) throw UsageError("zero denominator in '" + std::string(text) + "'");
    return Rational(to_int(num), d);
}

[[nodiscard]] inline std::string to_string(const Rational& q)
{
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

/// Shortest round-trip fixed notation that always carries a decimal point.
[[nodiscard]] inline std::string format_real(double value)
{
    char buf[512];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
    std::string s(buf, res.ptr);
    if (s.find('.') == std::string::npos && s.find_first_of("ni") == std::string::npos) s += ".0";
    return s;
}

/// Coefficient of the symbolic engine: exact rational unless a float was injected.
class Number {
public:
    Number() : value_(Rational(0)) {}
    Number(Rational q) : value_(std::move(q)) {}
    Number(int n) : value_(Rational(n)) {}
    static Number real(double d) { Number n; n.value_ = d; return n; }

    [[nodiscard]] bool is_exact() const noexcept { return std::holds_alternative<Rational>(value_); }
    [[nodiscard]] const Rational& exact() const { return std::get<Rational>(value_); }
    [[nodiscard]] double approx() const
    {
        if (is_exact()) return exact().convert_to<double>();
        return std::get<double>(value_);
    }

    [[nodiscard]] bool is_zero() const { return is_exact() ? exact() == 0 : approx() == 0.0; }
    [[nodiscard]] bool is_one() const { return is_exact() ? exact() == 1 : approx() == 1.0; }
    [[nodiscard]] bool is_negative() const { return is_exact() ? exact() < 0 : approx() < 0.0; }
    [[nodiscard]] bool is_integer() const { return is_exact() && denominator(exact()) == 1; }

    [[nodiscard]] Number operator-() const
    {
        if (is_exact()) return Number(Rational(-exact()));
        return real(-approx());
    }

    friend Number operator+(const Number& a, const Number& b)
    {
        if (a.is_exact() && b.is_exact()) return Number(Rational(a.exact() + b.exact()));
        return real(a.approx() + b.approx());
    }
    friend Number operator-(const Number& a, const Number& b) { return a + (-b); }
    friend Number operator*(const Number& a, const Number& b)
    {
        if (a.is_exact() && b.is_exact()) return Number(Rational(a.exact() * b.exact()));
        return real(a.approx() * b.approx());
    }
    /// Caller guarantees b != 0.
    friend Number operator/(const Number& a, const Number& b)
    {
        if (a.is_exact() && b.is_exact()) return Number(Rational(a.exact() / b.exact()));
        return real(a.approx() / b.approx());
    }

    [[nodiscard]] Number pow(int k) const
    {
        if (k < 0) return Number(1) / pow(-k);
        Number result(1);
        Number base = *this;
        while (k > 0) {
            if (k & 1) result = result * base;
            base = base * base;
            k >>= 1;
        }
        return result;
    }

    [[nodiscard]] Number abs() const { return is_negative() ? -*this : *this; }

    /// Total order: exact values before floats, then by value.
    friend int compare(const Number& a, const Number& b)
    {
        if (a.is_exact() != b.is_exact()) return a.is_exact() ? -1 : 1;
        if (a.is_exact()) {
            if (a.exact() < b.exact()) return -1;
            return a.exact() == b.exact() ? 0 : 1;
        }
        const double x = a.approx(), y = b.approx();
        if (x < y) return -1;
        return x == y ? 0 : 1;
    }
    friend bool operator==(const Number& a, const Number& b) { return compare(a, b) == 0; }

    [[nodiscard]] std::string str() const { return is_exact() ? to_string(exact()) : format_real(approx()); }

private:
    std::variant<Rational, double> value_;
};

} // namespace redop
