#include "mixamp/denoise.hpp"

#include "mixamp/numeric.hpp"

namespace mixamp {

ScalarPosterior spike_slab_posterior(double y, const SpikeSlab& prior, double sigma2) noexcept {
    using namespace numeric;
    if (prior.theta <= 0.0) return {0.0, 0.0};

    const double total_var = prior.slab_var + sigma2;
    const double gain = prior.slab_var / total_var;
    const double slab_mean = prior.slab_mean + gain * (y - prior.slab_mean);
    const double slab_var = gain * sigma2;

    if (prior.theta >= 1.0) return {slab_mean, slab_var};

    // posterior log-odds of the slab against the zero atom
    const double log_odds = std::log(prior.theta) - std::log1p(-prior.theta) +
                            log_normal_pdf(y, prior.slab_mean, total_var) - log_normal_pdf(y, 0.0, sigma2);
    const double p = logistic(log_odds);
    const double q = logistic(-log_odds);
    return {p * slab_mean, p * slab_var + p * q * slab_mean * slab_mean};
}

ScalarPosterior bernoulli_posterior(double y, double theta, double sigma2) noexcept {
    return spike_slab_posterior(y, {theta, 1.0, 0.0}, sigma2);
}

ScalarPosterior bg_posterior(double y, const BgParams& params, double sigma2) noexcept {
    return spike_slab_posterior(y, {params.theta, params.mu, params.sigma_x2}, sigma2);
}

ScalarPosterior posterior(double y, const SignalModel& model, double sigma2) noexcept {
    return spike_slab_posterior(y, spike_slab(model), sigma2);
}

DenoiserOutput bayes_denoise(std::span<const double> y, const SignalModel& model, double sigma2) {
    sigma2 = floor_noise(sigma2);
    const SpikeSlab prior = spike_slab(model);
    DenoiserOutput out;
    out.estimates.resize(y.size());
    double var_sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const ScalarPosterior post = spike_slab_posterior(y[i], prior, sigma2);
        out.estimates[i] = post.mean;
        var_sum += post.variance;
    }
    out.mean_derivative = y.empty() ? 0.0 : var_sum / (sigma2 * static_cast<double>(y.size()));
    return out;
}

}  // namespace mixamp
