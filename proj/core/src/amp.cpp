#include "mixamp/amp.hpp"

#include <cmath>
#include <string>

#include "mixamp/fit.hpp"

namespace mixamp {

namespace {

constexpr double kZeroNormFloor = 1e-14;
constexpr double kDivergenceFactor = 10.0;

std::span<const double> as_span(const Eigen::VectorXd& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

std::string_view denoiser_name(AmpDenoiser d) noexcept {
    switch (d) {
        case AmpDenoiser::bayes: return "bayes";
        case AmpDenoiser::plugin: return "plugin";
        case AmpDenoiser::mixd: return "mixd";
    }
    return "?";
}

AmpDenoiser parse_denoiser(std::string_view name) {
    if (name == "bayes") return AmpDenoiser::bayes;
    if (name == "plugin") return AmpDenoiser::plugin;
    if (name == "mixd") return AmpDenoiser::mixd;
    throw ConfigError("unknown denoiser '" + std::string(name) + "' (expected bayes|plugin|mixd)");
}

ParamGrid default_amp_grid(ModelFamily family) {
    return family == ModelFamily::bernoulli
               ? build_bernoulli_grid(kDefaultBernoulliGrid)
               : build_bg_grid(kDefaultBgGridAmp, kDefaultBgGridAmp, kDefaultBgGridAmp);
}

AmpState amp_init(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
    if (a.rows() != y.size()) throw ConfigError("A has " + std::to_string(a.rows()) + " rows but y has " +
                                                std::to_string(y.size()) + " entries");
    AmpState s;
    s.x = Eigen::VectorXd::Zero(a.cols());
    s.r = y;
    return s;
}

Eigen::VectorXd pseudo_data(const AmpState& state, const Eigen::MatrixXd& a) {
    if (a.rows() != state.r.size() || a.cols() != state.x.size())
        throw ConfigError("pseudo_data: A is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                          " but state has |r| = " + std::to_string(state.r.size()) +
                          ", |x| = " + std::to_string(state.x.size()));
    Eigen::VectorXd s = state.x;
    s.noalias() += a.transpose() * state.r;
    return s;
}

double estimate_noise(std::span<const double> r) {
    if (r.empty()) throw ConfigError("estimate_noise needs a non-empty residual");
    double s = 0.0;
    for (double v : r) s += v * v;
    return s / static_cast<double>(r.size());
}

double estimate_noise(const Eigen::VectorXd& r) { return estimate_noise(as_span(r)); }

DenoiserOutput apply_denoiser(std::span<const double> s, double sigma2, const AmpConfig& config) {
    switch (config.denoiser) {
        case AmpDenoiser::bayes: return bayes_denoise(s, config.known_params, sigma2);
        case AmpDenoiser::plugin: return plugin_denoise(s, family_of(config.known_params), sigma2);
        case AmpDenoiser::mixd:
            if (!config.grid) throw ConfigError("mixd denoiser requires a parameter grid");
            return mixd_denoise(s, *config.grid, sigma2);
    }
    throw ConfigError("unknown denoiser");
}

AmpState amp_step(const AmpState& state, const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                  const AmpConfig& config) {
    const Eigen::VectorXd s = pseudo_data(state, a);
    const double sigma2 = estimate_noise(state.r);
    DenoiserOutput d = apply_denoiser(as_span(s), sigma2, config);

    AmpState next;
    next.t = state.t + 1;
    next.sigma_hat2 = sigma2;
    next.mean_derivative = d.mean_derivative;
    next.x = Eigen::Map<const Eigen::VectorXd>(d.estimates.data(), static_cast<Eigen::Index>(d.estimates.size()));
    next.r = y;
    next.r.noalias() -= a * next.x;
    if (config.onsager) {
        const double delta = static_cast<double>(a.rows()) / static_cast<double>(a.cols());
        next.r += (d.mean_derivative / delta) * state.r;
    }
    if (!std::isfinite(sigma2) || !std::isfinite(d.mean_derivative) || !next.x.allFinite() || !next.r.allFinite())
        throw NumericalError("AMP produced non-finite values at iteration " + std::to_string(next.t));
    return next;
}

AmpDivergence::AmpDivergence(std::size_t it, std::vector<AmpIteration> hist)
    : NumericalError("AMP diverged at iteration " + std::to_string(it) +
                     ": noise estimate exceeded 10x its initial value"),
      iteration(it),
      history(std::move(hist)) {}

AmpResult amp_run(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, const MatrixChannelSpec& channel,
                  const AmpConfig& config, const Eigen::VectorXd* truth) {
    if (a.rows() != static_cast<Eigen::Index>(channel.m) || a.cols() != static_cast<Eigen::Index>(channel.n))
        throw ConfigError("A does not match the channel dimensions");
    if (truth && truth->size() != a.cols()) throw ConfigError("truth vector length does not match n");
    if (config.max_iters == 0 || !(config.tol > 0.0)) throw ConfigError("AMP needs max_iters >= 1 and tol > 0");

    AmpState state = amp_init(a, y);
    const double initial_noise = estimate_noise(state.r);
    AmpResult res;
    for (std::size_t it = 0; it < config.max_iters; ++it) {
        AmpState next = amp_step(state, a, y, config);
        AmpIteration rec{next.t, next.sigma_hat2, std::numeric_limits<double>::quiet_NaN(), next.mean_derivative};
        if (truth) rec.mse = (next.x - *truth).squaredNorm() / static_cast<double>(next.x.size());
        res.history.push_back(rec);

        if (initial_noise > 0.0 && next.sigma_hat2 > kDivergenceFactor * initial_noise)
            throw AmpDivergence(next.t, res.history);

        const double prev_norm = state.x.squaredNorm();
        const double change = (next.x - state.x).squaredNorm();
        state = std::move(next);
        const bool done = prev_norm > 0.0 ? change / prev_norm < config.tol : change < kZeroNormFloor;
        if (done) {
            res.converged = true;
            break;
        }
    }
    res.iterations = state.t;
    res.x_hat = std::move(state.x);
    return res;
}

}  // namespace mixamp
