#pragma once

// Independent numeric oracles: x-derivatives of catalog heat solutions coded
// by hand, without the symbolic engine.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <functional>

#include "redop/heat.hpp"

namespace oracle {

struct Column {
    std::function<double(double, double, int)> d;   // d^k/dx^k at (t, x)
};

/// h_n by the three-term recurrence in doubles.
inline double h_value(int n, double t, double x)
{
    if (n < 0) return 0.0;
    double prev = 1.0;
    double cur = x;
    if (n == 0) return prev;
    for (int k = 1; k < n; ++k) {
        const double next = x * cur - 2.0 * k * t * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// d/dx h_n = n h_{n-1}.
inline Column poly(int n)
{
    return {[n](double t, double x, int k) {
        double scale = 1;
        for (int i = 0; i < k; ++i) scale *= n - i;
        return n - k < 0 ? 0.0 : scale * h_value(n - k, t, x);
    }};
}

inline Column exponential(double a)
{
    return {[a](double t, double x, int k) { return std::pow(a, k) * std::exp(a * x - a * a * t); }};
}

inline Column trig(double a, double phase)
{
    return {[a, phase](double t, double x, int k) {
        return std::pow(a, k) * std::exp(a * a * t) * std::cos(a * x + phase + k * M_PI / 2);
    }};
}

/// |c(orders[0]), c(orders[1]), c(orders[2])| with the triple as columns.
inline double det(const std::array<Column, 3>& c, double t, double x, std::array<int, 3> orders)
{
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(j, i) = c[i].d(t, x, orders[j]);
    return m.determinant();
}

} // namespace oracle
