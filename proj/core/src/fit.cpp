#include "mixamp/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mixamp/error.hpp"
#include "mixamp/mixd.hpp"
#include "mixamp/numeric.hpp"

namespace mixamp {

namespace {

/// Likelihood ratio N(y;1,s2)/N(y;0,s2) in log form, (2y - 1) / (2 s2).
std::vector<double> bernoulli_log_ratios(std::span<const double> y, double sigma2) {
    std::vector<double> d(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) d[i] = (2.0 * y[i] - 1.0) / (2.0 * sigma2);
    return d;
}

/// Mean slab responsibility at theta, computed from the log ratios.
double mean_responsibility(std::span<const double> log_ratio, double theta) {
    const double logit = std::log(theta) - std::log1p(-theta);
    double s = 0.0;
    for (double d : log_ratio) s += numeric::logistic(logit + d);
    return s / static_cast<double>(log_ratio.size());
}

}  // namespace

FitResult fit_bernoulli_ml(std::span<const double> y, double sigma2, const EmOptions& opts) {
    if (y.empty()) throw ConfigError("fit_bernoulli_ml needs at least one observation");
    sigma2 = floor_noise(sigma2);
    const std::vector<double> d = bernoulli_log_ratios(y, sigma2);
    const auto n = static_cast<double>(y.size());

    auto finish = [&](double theta, std::size_t iters, bool converged, std::vector<double> trace) {
        FitResult r{BernoulliParams{theta}, 0.0, iters, converged, std::move(trace)};
        r.log_likelihood = log_marginal_likelihood(y, r.params, sigma2);
        return r;
    };

    // Slope of the log-likelihood at theta = 0 is sum(exp(d) - 1), at theta = 1 it is
    // sum(1 - exp(-d)). Compare in the log domain to stay finite.
    const double log_sum_up = numeric::log_sum_exp(d);
    if (log_sum_up < std::log(n)) return finish(0.0, 0, true, {});
    std::vector<double> neg(d.size());
    std::transform(d.begin(), d.end(), neg.begin(), [](double v) { return -v; });
    if (numeric::log_sum_exp(neg) < std::log(n)) return finish(1.0, 0, true, {});

    double theta = 0.5;
    std::vector<double> trace;
    std::size_t it = 0;
    bool converged = false;
    while (it < opts.max_iters) {
        const double next = mean_responsibility(d, theta);
        ++it;
        const double change = std::abs(next - theta);
        theta = next;
        if (opts.record_trace) trace.push_back(log_marginal_likelihood(y, BernoulliParams{theta}, sigma2));
        if (change < opts.tol) {
            converged = true;
            break;
        }
    }
    return finish(theta, it, converged, std::move(trace));
}

namespace {

struct BgState {
    double theta, mu, slab_var;
};

FitResult run_bg_em(std::span<const double> y, double sigma2, BgState s, const EmOptions& opts) {
    const std::size_t n = y.size();
    std::vector<double> gamma(n);
    std::vector<double> log_spike(n);
    for (std::size_t i = 0; i < n; ++i) log_spike[i] = numeric::log_normal_pdf(y[i], 0.0, sigma2);

    FitResult r;
    std::size_t it = 0;
    while (it < opts.max_iters) {
        // E-step
        const double logit = numeric::log_prob(s.theta) - numeric::log_complement(s.theta);
        double g_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double lo =
                logit + numeric::log_normal_pdf(y[i], s.mu, s.slab_var + sigma2) - log_spike[i];
            gamma[i] = std::isnan(lo) ? 0.0 : numeric::logistic(lo);
            g_sum += gamma[i];
        }
        // M-step
        BgState next = s;
        next.theta = g_sum / static_cast<double>(n);
        if (g_sum > 0.0) {
            double m = 0.0;
            for (std::size_t i = 0; i < n; ++i) m += gamma[i] * y[i];
            next.mu = m / g_sum;
            double v = 0.0;
            for (std::size_t i = 0; i < n; ++i) v += gamma[i] * (y[i] - next.mu) * (y[i] - next.mu);
            next.slab_var = std::max(kSlabVarFloor, v / g_sum - sigma2);
        }
        ++it;
        const double change = std::max({std::abs(next.theta - s.theta), std::abs(next.mu - s.mu),
                                        std::abs(next.slab_var - s.slab_var)});
        s = next;
        if (opts.record_trace)
            r.trace.push_back(log_marginal_likelihood(y, BgParams{s.theta, s.mu, s.slab_var}, sigma2));
        if (change < opts.tol) {
            r.converged = true;
            break;
        }
    }
    r.params = BgParams{s.theta, s.mu, s.slab_var};
    r.iterations = it;
    r.log_likelihood = log_marginal_likelihood(y, r.params, sigma2);
    return r;
}

}  // namespace

FitResult fit_bg_ml(std::span<const double> y, double sigma2, const EmOptions& opts) {
    if (y.size() < 2) throw ConfigError("fit_bg_ml needs at least two observations");
    sigma2 = floor_noise(sigma2);
    const auto n = static_cast<double>(y.size());
    double m1 = 0.0, m2 = 0.0;
    for (double v : y) {
        m1 += v;
        m2 += v * v;
    }
    m1 /= n;
    m2 /= n;

    auto start_for = [&](double theta0) {
        const double mu0 = m1 / theta0;
        const double var0 = std::max(kSlabVarFloor, (m2 - sigma2) / theta0 - mu0 * mu0);
        return BgState{theta0, mu0, var0};
    };

    if (std::all_of(y.begin(), y.end(), [](double v) { return v == 0.0; })) {
        const BgState s0 = start_for(0.1);
        FitResult r{BgParams{0.0, s0.mu, s0.slab_var}, 0.0, 0, true, {}};
        r.log_likelihood = log_marginal_likelihood(y, r.params, sigma2);
        return r;
    }

    constexpr std::array<double, 3> kStarts{0.1, 0.5, 0.9};
    FitResult best;
    bool have = false;
    for (double theta0 : kStarts) {
        FitResult r = run_bg_em(y, sigma2, start_for(theta0), opts);
        if (!have || r.log_likelihood > best.log_likelihood) {
            best = std::move(r);
            have = true;
        }
    }
    return best;
}

FitResult fit_ml(std::span<const double> y, ModelFamily family, double sigma2, const EmOptions& opts) {
    return family == ModelFamily::bernoulli ? fit_bernoulli_ml(y, sigma2, opts) : fit_bg_ml(y, sigma2, opts);
}

DenoiserOutput plugin_denoise(std::span<const double> y, ModelFamily family, double sigma2) {
    const FitResult fit = fit_ml(y, family, sigma2);
    return bayes_denoise(y, fit.params, sigma2);
}

}  // namespace mixamp
