#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <span>

namespace mixamp::numeric {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double log_normal_pdf(double x, double mean, double var) noexcept {
    const double d = x - mean;
    return -0.5 * (d * d / var + std::log(2.0 * std::numbers::pi * var));
}

/// log(exp(a) + exp(b)) without overflow; handles -inf operands.
inline double log_add_exp(double a, double b) noexcept {
    if (a < b) std::swap(a, b);
    if (a == kNegInf) return kNegInf;
    return a + std::log1p(std::exp(b - a));
}

inline double log_sum_exp(std::span<const double> v) noexcept {
    double hi = kNegInf;
    for (double x : v) hi = std::max(hi, x);
    if (hi == kNegInf) return kNegInf;
    double s = 0.0;
    for (double x : v) s += std::exp(x - hi);
    return hi + std::log(s);
}

/// 1 / (1 + exp(-t)); exp is only ever taken of a non-positive argument.
inline double logistic(double t) noexcept {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

/// log(theta) and log(1 - theta) with exact zeros at the endpoints.
inline double log_prob(double theta) noexcept { return theta > 0.0 ? std::log(theta) : kNegInf; }
inline double log_complement(double theta) noexcept { return theta < 1.0 ? std::log1p(-theta) : kNegInf; }

}  // namespace mixamp::numeric
