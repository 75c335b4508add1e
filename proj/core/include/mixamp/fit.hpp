#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mixamp/denoise.hpp"
#include "mixamp/model.hpp"

namespace mixamp {

/// Maximum-likelihood prior parameters for the empirical-Bayes (Plug-in) denoiser.
struct FitResult {
    SignalModel params;
    double log_likelihood = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    /// Log-likelihood after every EM iteration of the winning start (only if requested).
    std::vector<double> trace;
};

struct EmOptions {
    double tol = 1e-10;
    std::size_t max_iters = 500;
    bool record_trace = false;
};

inline constexpr double kSlabVarFloor = 1e-12;

/// EM for theta in theta*N(1, sigma2) + (1-theta)*N(0, sigma2). The log-likelihood is
/// concave in theta, so a boundary optimum is detected from the one-sided slope
/// before iterating and returned exactly. Requires y non-empty.
FitResult fit_bernoulli_ml(std::span<const double> y, double sigma2, const EmOptions& opts = {});

/// EM for (theta, mu, sigma_x2) in theta*N(mu, sigma_x2+sigma2) + (1-theta)*N(0, sigma2),
/// multi-start from theta0 in {0.1, 0.5, 0.9} with moment-matched (mu0, sigma_x0^2).
/// The highest final log-likelihood wins; ties go to the earlier start. Requires |y| >= 2.
FitResult fit_bg_ml(std::span<const double> y, double sigma2, const EmOptions& opts = {});

FitResult fit_ml(std::span<const double> y, ModelFamily family, double sigma2, const EmOptions& opts = {});

/// Bayes denoiser at the ML parameters fitted to y itself.
DenoiserOutput plugin_denoise(std::span<const double> y, ModelFamily family, double sigma2);

}  // namespace mixamp
