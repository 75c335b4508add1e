#include "mixamp/model.hpp"

#include <cmath>
#include <string>

#include "mixamp/error.hpp"

namespace mixamp {

ModelFamily family_of(const SignalModel& model) noexcept {
    return std::holds_alternative<BernoulliParams>(model) ? ModelFamily::bernoulli : ModelFamily::bg;
}

std::string_view family_name(ModelFamily family) noexcept {
    return family == ModelFamily::bernoulli ? "bernoulli" : "bg";
}

ModelFamily parse_family(std::string_view name) {
    if (name == "bernoulli") return ModelFamily::bernoulli;
    if (name == "bg") return ModelFamily::bg;
    throw ConfigError("unknown model family '" + std::string(name) + "' (expected bernoulli|bg)");
}

SpikeSlab spike_slab(const SignalModel& model) noexcept {
    if (const auto* b = std::get_if<BernoulliParams>(&model)) return {b->theta, 1.0, 0.0};
    const auto& g = std::get<BgParams>(model);
    return {g.theta, g.mu, g.sigma_x2};
}

void validate(const SignalModel& model) {
    const SpikeSlab s = spike_slab(model);
    if (!std::isfinite(s.theta) || s.theta < 0.0 || s.theta > 1.0)
        throw ConfigError("theta must lie in [0, 1], got " + std::to_string(s.theta));
    if (!std::isfinite(s.slab_mean)) throw ConfigError("mu must be finite");
    if (!std::isfinite(s.slab_var) || s.slab_var < 0.0)
        throw ConfigError("sigma_x2 must be finite and >= 0, got " + std::to_string(s.slab_var));
}

double prior_mean(const SignalModel& model) noexcept {
    const SpikeSlab s = spike_slab(model);
    return s.theta * s.slab_mean;
}

double prior_variance(const SignalModel& model) noexcept {
    const SpikeSlab s = spike_slab(model);
    return s.theta * s.slab_var + s.theta * (1.0 - s.theta) * s.slab_mean * s.slab_mean;
}

double sigma_z2_from_snr(const SignalModel& model, std::size_t n, std::size_t m, double snr_linear) {
    if (!(snr_linear > 0.0)) throw ConfigError("snr must be positive");
    if (n == 0 || m == 0) throw ConfigError("n and m must be >= 1");
    const double var = prior_variance(model);
    if (!(var > 0.0)) throw ConfigError("degenerate signal: prior variance is zero, SNR undefined");
    return static_cast<double>(n) * var / (static_cast<double>(m) * snr_linear);
}

std::vector<double> sample_signal(const SignalModel& model, std::size_t n, SeededStream& rng) {
    const SpikeSlab s = spike_slab(model);
    const double slab_sd = std::sqrt(s.slab_var);
    std::vector<double> x(n, 0.0);
    for (auto& xi : x) {
        // one uniform and one normal per entry keeps the draw count independent of the outcome
        const bool active = rng.uniform() < s.theta;
        const double w = rng.normal();
        if (active) xi = s.slab_mean + slab_sd * w;
    }
    return x;
}

std::vector<double> sample_scalar_channel(std::span<const double> x, const ScalarChannelSpec& spec,
                                          SeededStream& rng) {
    const double sd = std::sqrt(std::max(spec.sigma_z2, 0.0));
    std::vector<double> y(x.begin(), x.end());
    for (auto& yi : y) yi += sd * rng.normal();
    return y;
}

MatrixChannelSample sample_matrix_channel(std::span<const double> x, const MatrixChannelSpec& spec,
                                          SeededStream& rng) {
    if (x.size() != spec.n) throw ConfigError("signal length does not match channel n");
    if (spec.m == 0) throw ConfigError("m must be >= 1");
    const auto rows = static_cast<Eigen::Index>(spec.m);
    const auto cols = static_cast<Eigen::Index>(spec.n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(spec.m));

    MatrixChannelSample out{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows)};
    double* data = out.a.data();
    const Eigen::Index total = rows * cols;
    for (Eigen::Index k = 0; k < total; ++k) data[k] = scale * rng.normal();

    const Eigen::Map<const Eigen::VectorXd> xv(x.data(), cols);
    out.y.noalias() = out.a * xv;
    const double sd = std::sqrt(std::max(spec.sigma_z2, 0.0));
    for (Eigen::Index i = 0; i < rows; ++i) out.y[i] += sd * rng.normal();
    return out;
}

}  // namespace mixamp
