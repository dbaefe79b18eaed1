#pragma once

// Independent reference computations at 50 decimal digits. They share no
// code with the library.

#include <array>
#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace empeval::oracle {

using Real = boost::multiprecision::cpp_bin_float_50;

// sum_i w_i * c_i * base^(-emo), term by term.
inline double score(const std::array<int, 3>& c, double emo, const std::array<double, 3>& w, double base) {
    Real total = 0;
    const Real factor = boost::multiprecision::exp(-Real(emo) * boost::multiprecision::log(Real(base)));
    for (std::size_t i = 0; i < 3; ++i) total += Real(w[i]) * Real(c[i]) * factor;
    return total.convert_to<double>();
}

// cov(x, y) / sqrt(var(x) var(y)) from the definition.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    Real mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += Real(x[i]);
        my += Real(y[i]);
    }
    mx /= n;
    my /= n;
    Real cov = 0, vx = 0, vy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Real dx = Real(x[i]) - mx;
        const Real dy = Real(y[i]) - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    return (cov / boost::multiprecision::sqrt(vx * vy)).convert_to<double>();
}

inline double naive_mean(const std::vector<double>& xs) {
    Real s = 0;
    for (double x : xs) s += Real(x);
    return (s / xs.size()).convert_to<double>();
}

}  // namespace empeval::oracle
