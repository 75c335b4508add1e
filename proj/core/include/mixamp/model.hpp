#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "mixamp/rng.hpp"

namespace mixamp {

/// x ~ Bernoulli(theta).
struct BernoulliParams {
    double theta = 0.0;
};

/// x ~ theta * N(mu, sigma_x2) + (1 - theta) * delta_0.
struct BgParams {
    double theta = 0.0;
    double mu = 0.0;
    double sigma_x2 = 1.0;
};

using SignalModel = std::variant<BernoulliParams, BgParams>;

enum class ModelFamily { bernoulli, bg };

ModelFamily family_of(const SignalModel& model) noexcept;
std::string_view family_name(ModelFamily family) noexcept;
ModelFamily parse_family(std::string_view name);

/// Both priors are a zero atom plus a Gaussian slab; Bernoulli is the slab N(1, 0).
struct SpikeSlab {
    double theta;
    double slab_mean;
    double slab_var;
};

SpikeSlab spike_slab(const SignalModel& model) noexcept;

/// Throws ConfigError if theta is outside [0,1], sigma_x2 < 0, or anything is non-finite.
void validate(const SignalModel& model);

/// Smallest noise variance handed to the denoisers; zero-noise requests are raised to it.
inline constexpr double kNoiseFloor = 1e-30;

inline double floor_noise(double sigma2) noexcept { return sigma2 < kNoiseFloor ? kNoiseFloor : sigma2; }

struct ScalarChannelSpec {
    double sigma_z2 = 1.0;
};

struct MatrixChannelSpec {
    std::size_t n = 1;
    std::size_t m = 1;
    double sigma_z2 = 1.0;

    double delta() const noexcept { return static_cast<double>(m) / static_cast<double>(n); }
};

double prior_mean(const SignalModel& model) noexcept;
double prior_variance(const SignalModel& model) noexcept;

/// Noise variance giving SNR = N Var(x) / (M sigma_z2). Throws ConfigError for a
/// zero-variance ("degenerate signal") prior or non-positive snr.
double sigma_z2_from_snr(const SignalModel& model, std::size_t n, std::size_t m, double snr_linear);

inline double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }

std::vector<double> sample_signal(const SignalModel& model, std::size_t n, SeededStream& rng);

std::vector<double> sample_scalar_channel(std::span<const double> x, const ScalarChannelSpec& spec,
                                          SeededStream& rng);

struct MatrixChannelSample {
    Eigen::MatrixXd a;
    Eigen::VectorXd y;
};

/// Draws A with i.i.d. N(0, 1/M) entries (column-major fill order) and y = A x + z.
MatrixChannelSample sample_matrix_channel(std::span<const double> x, const MatrixChannelSpec& spec,
                                          SeededStream& rng);

}  // namespace mixamp
