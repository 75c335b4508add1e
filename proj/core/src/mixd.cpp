#include "mixamp/mixd.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>

#include "mixamp/error.hpp"
#include "mixamp/numeric.hpp"
#include "mixamp/rng.hpp"

namespace mixamp {

namespace {

// Log slab-to-spike ratios beyond this magnitude are handled in the log domain.
constexpr double kLinearRange = 50.0;
// Twelve factors in [e^-50, e^50] cannot leave double range between renormalizations.
constexpr int kRenormEvery = 12;
// Nodes whose normalized log weight falls below this contribute nothing measurable.
constexpr double kPruneLogWeight = -80.0;

/// Per-component slab/spike log density ratios for one slab group.
struct GroupTerms {
    std::vector<double> ratio;      // exp(d_i) for |d_i| <= kLinearRange
    std::vector<double> tail_log;   // d_i for the rest
    std::vector<std::size_t> tail_index;
    std::vector<char> is_tail;
    std::vector<double> log_ratio;  // d_i for every component
    double log_ratio_sum = 0.0;
};

GroupTerms group_terms(std::span<const double> y, double slab_mean, double slab_var, double sigma2) {
    using numeric::log_normal_pdf;
    GroupTerms t;
    t.ratio.reserve(y.size());
    t.is_tail.resize(y.size());
    t.log_ratio.resize(y.size());
    const double total_var = slab_var + sigma2;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = log_normal_pdf(y[i], slab_mean, total_var) - log_normal_pdf(y[i], 0.0, sigma2);
        t.log_ratio[i] = d;
        t.log_ratio_sum += d;
        if (std::abs(d) <= kLinearRange) {
            t.ratio.push_back(std::exp(d));
        } else {
            t.is_tail[i] = 1;
            t.tail_log.push_back(d);
            t.tail_index.push_back(i);
        }
    }
    return t;
}

/// sum_i log((1 - theta) + theta * exp(d_i)).
double sum_log_factors(const GroupTerms& t, double theta) {
    if (theta <= 0.0) return 0.0;
    if (theta >= 1.0) return t.log_ratio_sum;
    const double keep = 1.0 - theta;

    double total = 0.0;
    const std::size_t n = t.ratio.size();
    std::size_t i = 0;
    int exponent = 0;
    double acc[4] = {1.0, 1.0, 1.0, 1.0};
    constexpr std::size_t kBlock = 4 * kRenormEvery;
    for (; i + kBlock <= n; i += kBlock) {
        const double* r = t.ratio.data() + i;
        for (int j = 0; j < kRenormEvery; ++j) {
            acc[0] *= keep + theta * r[4 * j + 0];
            acc[1] *= keep + theta * r[4 * j + 1];
            acc[2] *= keep + theta * r[4 * j + 2];
            acc[3] *= keep + theta * r[4 * j + 3];
        }
        for (double& a : acc) {
            int e = 0;
            a = std::frexp(a, &e);
            exponent += e;
        }
    }
    int pending = 0;
    for (; i < n; ++i) {
        acc[0] *= keep + theta * t.ratio[i];
        if (++pending == kRenormEvery) {
            int e = 0;
            acc[0] = std::frexp(acc[0], &e);
            exponent += e;
            pending = 0;
        }
    }
    total += std::log(acc[0]) + std::log(acc[1]) + std::log(acc[2]) + std::log(acc[3]) +
             exponent * std::numbers::ln2;

    const double log_keep = std::log1p(-theta);
    const double log_theta = std::log(theta);
    for (double d : t.tail_log) total += numeric::log_add_exp(log_keep, log_theta + d);
    return total;
}

double spike_log_likelihood(std::span<const double> y, double sigma2) {
    double s = 0.0;
    for (double v : y) s += numeric::log_normal_pdf(v, 0.0, sigma2);
    return s;
}

void normalize(std::vector<double>& log_w) {
    const double z = numeric::log_sum_exp(log_w);
    if (!std::isfinite(z)) throw NumericalError("parameter posterior has no finite mass");
    for (double& w : log_w) w -= z;
}

}  // namespace

ParamGrid::ParamGrid(std::vector<SignalModel> nodes, std::vector<double> log_prior_weights)
    : nodes_(std::move(nodes)), log_prior_(std::move(log_prior_weights)) {
    if (nodes_.empty()) throw ConfigError("parameter grid must contain at least one node");
    if (nodes_.size() != log_prior_.size()) throw ConfigError("grid nodes and prior weights differ in size");
    std::map<std::pair<double, double>, std::size_t> slot;
    thetas_.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        validate(nodes_[i]);
        if (std::isnan(log_prior_[i]) || log_prior_[i] == std::numeric_limits<double>::infinity())
            throw ConfigError("grid prior weights must be finite or -inf");
        const SpikeSlab s = spike_slab(nodes_[i]);
        thetas_.push_back(s.theta);
        auto [it, fresh] = slot.try_emplace({s.slab_mean, s.slab_var}, groups_.size());
        if (fresh) groups_.push_back({s.slab_mean, s.slab_var, {}});
        groups_[it->second].nodes.push_back(i);
    }
}

ParamGrid build_bernoulli_grid(std::size_t k) {
    if (k == 0) throw ConfigError("grid size must be >= 1");
    std::vector<SignalModel> nodes;
    nodes.reserve(k);
    const double du = std::numbers::pi / 2.0 / static_cast<double>(k);
    for (std::size_t j = 0; j < k; ++j) {
        const double s = std::sin((static_cast<double>(j) + 0.5) * du);
        nodes.emplace_back(BernoulliParams{s * s});
    }
    // normalized Jeffreys mass: density 2/pi in u times cell width pi/(2k)
    return ParamGrid(std::move(nodes), std::vector<double>(k, -std::log(static_cast<double>(k))));
}

ParamGrid build_bg_grid(std::size_t k_theta, std::size_t k_mu, std::size_t k_sigma) {
    if (k_theta == 0 || k_mu == 0 || k_sigma == 0) throw ConfigError("grid sizes must be >= 1");
    constexpr double kMuLo = -2.0, kMuHi = 2.0, kSigmaHi = 2.0;
    std::vector<SignalModel> nodes;
    nodes.reserve(k_theta * k_mu * k_sigma);
    const double du = std::numbers::pi / 2.0 / static_cast<double>(k_theta);
    const double dmu = (kMuHi - kMuLo) / static_cast<double>(k_mu);
    const double dsigma = kSigmaHi / static_cast<double>(k_sigma);
    for (std::size_t a = 0; a < k_theta; ++a) {
        const double s = std::sin((static_cast<double>(a) + 0.5) * du);
        for (std::size_t b = 0; b < k_mu; ++b) {
            const double mu = kMuLo + (static_cast<double>(b) + 0.5) * dmu;
            for (std::size_t c = 0; c < k_sigma; ++c) {
                const double sigma = (static_cast<double>(c) + 0.5) * dsigma;
                nodes.emplace_back(BgParams{s * s, mu, sigma * sigma});
            }
        }
    }
    const std::size_t total = nodes.size();
    return ParamGrid(std::move(nodes), std::vector<double>(total, -std::log(static_cast<double>(total))));
}

double log_marginal_likelihood(std::span<const double> y, const SignalModel& node, double sigma2) {
    sigma2 = floor_noise(sigma2);
    const SpikeSlab s = spike_slab(node);
    if (y.empty()) return 0.0;
    const GroupTerms t = group_terms(y, s.slab_mean, s.slab_var, sigma2);
    return spike_log_likelihood(y, sigma2) + sum_log_factors(t, s.theta);
}

std::vector<double> grid_log_likelihoods(std::span<const double> y, const ParamGrid& grid, double sigma2) {
    sigma2 = floor_noise(sigma2);
    std::vector<double> ll(grid.size(), 0.0);
    if (y.empty()) return ll;
    const double spike = spike_log_likelihood(y, sigma2);
    for (const auto& g : grid.groups()) {
        const GroupTerms t = group_terms(y, g.slab_mean, g.slab_var, sigma2);
        for (std::size_t node : g.nodes) ll[node] = spike + sum_log_factors(t, grid.theta(node));
    }
    return ll;
}

ParamPosterior param_posterior(std::span<const double> y, const ParamGrid& grid, double sigma2) {
    std::vector<double> lw = grid_log_likelihoods(y, grid, sigma2);
    const auto prior = grid.log_prior_weights();
    for (std::size_t g = 0; g < lw.size(); ++g) lw[g] += prior[g];
    normalize(lw);
    return {std::move(lw)};
}

MixdResult mixd_denoise_detailed(std::span<const double> y, const ParamGrid& grid, double sigma2) {
    sigma2 = floor_noise(sigma2);
    MixdResult res;
    res.posterior = param_posterior(y, grid, sigma2);
    const auto& lw = res.posterior.log_weights;

    const std::size_t n = y.size();
    std::vector<double>& est = res.output.estimates;
    est.assign(n, 0.0);
    std::vector<double> var(n, 0.0);
    std::vector<double> slab_mean(n);

    for (const auto& g : grid.groups()) {
        const bool any = std::any_of(g.nodes.begin(), g.nodes.end(), [&](std::size_t k) {
            return lw[k] >= kPruneLogWeight && grid.theta(k) > 0.0;
        });
        if (!any) continue;

        const GroupTerms t = group_terms(y, g.slab_mean, g.slab_var, sigma2);
        const double gain = g.slab_var / (g.slab_var + sigma2);
        const double slab_var = gain * sigma2;
        for (std::size_t i = 0; i < n; ++i) slab_mean[i] = g.slab_mean + gain * (y[i] - g.slab_mean);

        for (std::size_t k : g.nodes) {
            const double theta = grid.theta(k);
            if (lw[k] < kPruneLogWeight || theta <= 0.0) continue;
            const double w = std::exp(lw[k]);
            if (theta >= 1.0) {
                for (std::size_t i = 0; i < n; ++i) {
                    est[i] += w * slab_mean[i];
                    var[i] += w * slab_var;
                }
                continue;
            }
            const double keep = 1.0 - theta;
            const double logit = std::log(theta) - std::log1p(-theta);
            std::size_t lin = 0;
            for (std::size_t i = 0; i < n; ++i) {
                double p, q;
                if (!t.is_tail[i]) {
                    const double slab = theta * t.ratio[lin++];
                    const double inv = 1.0 / (keep + slab);
                    p = slab * inv;
                    q = keep * inv;
                } else {
                    const double lo = logit + t.log_ratio[i];
                    p = numeric::logistic(lo);
                    q = numeric::logistic(-lo);
                }
                const double m = slab_mean[i];
                est[i] += w * p * m;
                var[i] += w * (p * slab_var + p * q * m * m);
            }
        }
    }

    double var_sum = 0.0;
    for (double v : var) var_sum += v;
    res.output.mean_derivative = n == 0 ? 0.0 : var_sum / (sigma2 * static_cast<double>(n));
    return res;
}

DenoiserOutput mixd_denoise(std::span<const double> y, const ParamGrid& grid, double sigma2) {
    return mixd_denoise_detailed(y, grid, sigma2).output;
}

double mixd_divergence_fd(std::span<const double> y, const ParamGrid& grid, double sigma2, double step,
                          std::size_t probes, std::uint64_t seed) {
    if (y.empty() || probes == 0) return 0.0;
    SeededStream rng(seed, 0);
    const std::size_t n = y.size();
    std::vector<double> plus(n), minus(n), dir(n);
    double acc = 0.0;
    for (std::size_t p = 0; p < probes; ++p) {
        for (std::size_t i = 0; i < n; ++i) {
            dir[i] = (rng() >> 63) ? 1.0 : -1.0;
            plus[i] = y[i] + step * dir[i];
            minus[i] = y[i] - step * dir[i];
        }
        const auto hi = mixd_denoise(plus, grid, sigma2).estimates;
        const auto lo = mixd_denoise(minus, grid, sigma2).estimates;
        double quad = 0.0;
        for (std::size_t i = 0; i < n; ++i) quad += dir[i] * (hi[i] - lo[i]);
        acc += quad / (2.0 * step);
    }
    return acc / (static_cast<double>(probes) * static_cast<double>(n));
}

}  // namespace mixamp
