#include "mixamp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mixamp/denoise.hpp"
#include "mixamp/numeric.hpp"

namespace mixamp {

double scalar_mmse(const SignalModel& model, double sigma2) {
    sigma2 = floor_noise(sigma2);
    const SpikeSlab prior = spike_slab(model);
    if (prior.theta <= 0.0) return 0.0;

    const double slab_total = prior.slab_var + sigma2;
    auto integrand = [&](double y) {
        const double density = prior.theta * std::exp(numeric::log_normal_pdf(y, prior.slab_mean, slab_total)) +
                               (1.0 - prior.theta) * std::exp(numeric::log_normal_pdf(y, 0.0, sigma2));
        if (density == 0.0) return 0.0;
        return spike_slab_posterior(y, prior, sigma2).variance * density;
    };

    // breakpoints at every standard deviation of both components
    const double sd_spike = std::sqrt(sigma2);
    const double sd_slab = std::sqrt(slab_total);
    std::vector<double> cuts;
    for (int j = -10; j <= 10; ++j) {
        cuts.push_back(j * sd_spike);
        cuts.push_back(prior.slab_mean + j * sd_slab);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        if (cuts[k + 1] <= cuts[k]) continue;
        total += Quad::integrate(integrand, cuts[k], cuts[k + 1], 15, 1e-12);
    }
    return std::max(total, 0.0);
}

double se_denoiser_mse(const SignalModel& model, double sigma2, SeDenoiser denoiser) {
    return denoiser == SeDenoiser::identity ? sigma2 : scalar_mmse(model, sigma2);
}

double se_step(const SignalModel& model, double sigma_t2, double delta, double sigma_z2, SeDenoiser denoiser) {
    return sigma_z2 + se_denoiser_mse(model, sigma_t2, denoiser) / delta;
}

double se_initial_variance(const SignalModel& model, double delta, double sigma_z2) {
    return sigma_z2 + prior_variance(model) / delta;
}

std::vector<SePoint> se_trajectory(const SignalModel& model, double delta, double sigma_z2,
                                   SeDenoiser denoiser, std::size_t iterations) {
    std::vector<SePoint> out;
    out.reserve(iterations);
    double s = se_initial_variance(model, delta, sigma_z2);
    for (std::size_t t = 0; t < iterations; ++t) {
        const double mse = se_denoiser_mse(model, s, denoiser);
        out.push_back({s, mse});
        s = sigma_z2 + mse / delta;
    }
    return out;
}

SeNonConvergence::SeNonConvergence(double last, std::size_t iters)
    : NumericalError("state evolution did not converge after " + std::to_string(iters) +
                     " iterations (last sigma^2 = " + std::to_string(last) + ")"),
      last_sigma2(last),
      iterations(iters) {}

SeFixedPoint se_fixed_point(const SignalModel& model, double delta, double sigma_z2, SeDenoiser denoiser,
                            const SeOptions& opts) {
    if (!(delta > 0.0)) throw ConfigError("delta must be positive");
    if (!(sigma_z2 > 0.0)) throw ConfigError("sigma_z2 must be positive");
    double s = opts.start.value_or(se_initial_variance(model, delta, sigma_z2));
    for (std::size_t it = 1; it <= opts.max_iters; ++it) {
        const double next = se_step(model, s, delta, sigma_z2, denoiser);
        if (!std::isfinite(next)) throw SeNonConvergence(next, it);
        const bool done = std::abs(next - s) <= opts.tol * next;
        s = next;
        if (done) {
            const double mse = se_denoiser_mse(model, s, denoiser);
            return {s, mse, sdr_db(prior_variance(model), mse), it};
        }
    }
    throw SeNonConvergence(s, opts.max_iters);
}

double sdr_db(double signal_var, double mse) noexcept {
    if (!(mse > 0.0)) return kSdrCapDb;
    if (!(signal_var > 0.0)) return -kSdrCapDb;
    return std::clamp(10.0 * std::log10(signal_var / mse), -kSdrCapDb, kSdrCapDb);
}

std::vector<double> mixd_bruteforce(std::span<const double> y, const ParamGrid& grid, double sigma2) {
    using LD = long double;
    sigma2 = floor_noise(sigma2);
    const LD s2 = sigma2;
    const LD two_pi = 2.0L * std::numbers::pi_v<long double>;
    auto pdf = [&](LD x, LD m, LD v) { return std::exp(-(x - m) * (x - m) / (2.0L * v)) / std::sqrt(two_pi * v); };

    const std::size_t g_count = grid.size();
    std::vector<LD> weight(g_count);
    LD total = 0.0L;
    for (std::size_t g = 0; g < g_count; ++g) {
        const SpikeSlab p = spike_slab(grid.node(g));
        const LD th = p.theta;
        LD lik = std::exp(static_cast<LD>(grid.log_prior_weights()[g]));
        for (double yi : y) lik *= th * pdf(yi, p.slab_mean, p.slab_var + s2) + (1.0L - th) * pdf(yi, 0.0L, s2);
        weight[g] = lik;
        total += lik;
    }

    std::vector<double> est(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        LD acc = 0.0L;
        for (std::size_t g = 0; g < g_count; ++g) {
            const SpikeSlab p = spike_slab(grid.node(g));
            const LD th = p.theta;
            const LD v = p.slab_var;
            const LD slab = th * pdf(y[i], p.slab_mean, v + s2);
            const LD spike = (1.0L - th) * pdf(y[i], 0.0L, s2);
            const LD post_mean = (v * y[i] + s2 * p.slab_mean) / (v + s2);
            acc += weight[g] / total * slab / (slab + spike) * post_mean;
        }
        est[i] = static_cast<double>(acc);
    }
    return est;
}

}  // namespace mixamp
