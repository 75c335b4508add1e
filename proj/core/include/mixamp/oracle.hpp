#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mixamp/error.hpp"
#include "mixamp/mixd.hpp"
#include "mixamp/model.hpp"

namespace mixamp {

/// E_y[Var(x | y)] for the scalar channel y = x + N(0, sigma2), by adaptive
/// Gauss-Kronrod quadrature over +-10 standard deviations of each mixture component.
double scalar_mmse(const SignalModel& model, double sigma2);

/// Denoisers whose state evolution has a closed scalar form.
enum class SeDenoiser { identity, bayes };

/// Mean squared error of the denoiser on a scalar channel of variance sigma2.
double se_denoiser_mse(const SignalModel& model, double sigma2, SeDenoiser denoiser);

/// One state-evolution update, sigma_{t+1}^2 = sigma_z^2 + mse(sigma_t^2) / delta.
///
/// The denoiser sees X + sigma_t W, i.e. noise *variance* sigma_t^2.
double se_step(const SignalModel& model, double sigma_t2, double delta, double sigma_z2, SeDenoiser denoiser);

struct SePoint {
    double sigma_t2;
    double mse;
};

/// Starting variance sigma_z^2 + Var(x) / delta, matching AMP started from x = 0.
double se_initial_variance(const SignalModel& model, double delta, double sigma_z2);

/// The first `iterations` points of the recursion from se_initial_variance.
std::vector<SePoint> se_trajectory(const SignalModel& model, double delta, double sigma_z2,
                                   SeDenoiser denoiser, std::size_t iterations);

struct SeOptions {
    double tol = 1e-12;
    std::size_t max_iters = 10000;
    std::optional<double> start;
};

struct SeFixedPoint {
    double sigma_inf2;
    double mmse;
    double sdr_db;
    std::size_t iterations;
};

/// Thrown when the recursion does not settle; carries the last iterate.
class SeNonConvergence : public NumericalError {
public:
    SeNonConvergence(double last_sigma2, std::size_t iterations);
    double last_sigma2;
    std::size_t iterations;
};

SeFixedPoint se_fixed_point(const SignalModel& model, double delta, double sigma_z2, SeDenoiser denoiser,
                            const SeOptions& opts = {});

/// Reported SDR ceiling/floor in dB.
inline constexpr double kSdrCapDb = 300.0;

/// 10 log10(signal_var / mse), clamped to [-kSdrCapDb, kSdrCapDb].
double sdr_db(double signal_var, double mse) noexcept;

/// Reference mixture denoiser: plain double loop over nodes and components in
/// long double, likelihoods as direct products of densities, naive normalization.
/// Intended for |grid| <= 1e4 and N <= 100.
std::vector<double> mixd_bruteforce(std::span<const double> y, const ParamGrid& grid, double sigma2);

}  // namespace mixamp
