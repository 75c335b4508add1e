#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mixamp/denoise.hpp"
#include "mixamp/error.hpp"
#include "mixamp/mixd.hpp"
#include "mixamp/model.hpp"

namespace mixamp {

enum class AmpDenoiser { bayes, plugin, mixd };

std::string_view denoiser_name(AmpDenoiser d) noexcept;
AmpDenoiser parse_denoiser(std::string_view name);

struct AmpConfig {
    AmpDenoiser denoiser = AmpDenoiser::bayes;
    std::size_t max_iters = 200;
    double tol = 1e-8;
    /// Prior for the bayes denoiser; only the family is used by plugin and mixd.
    SignalModel known_params = BernoulliParams{0.05};
    /// Required for mixd.
    std::optional<ParamGrid> grid;
    /// Diagnostic switch: drop the Onsager term (plain iterative thresholding).
    bool onsager = true;
};

/// Grid sized for use inside AMP (201 for Bernoulli, 17^3 for BG).
ParamGrid default_amp_grid(ModelFamily family);

struct AmpState {
    Eigen::VectorXd x;      // estimate x^t, length N
    Eigen::VectorXd r;      // residual r^t, length M
    double sigma_hat2 = 0;  // noise estimate used by the step that produced this state
    double mean_derivative = 0;
    std::size_t t = 0;
};

/// x^0 = 0, r^0 = y.
AmpState amp_init(const Eigen::MatrixXd& a, const Eigen::VectorXd& y);

/// A^T r^t + x^t. Throws ConfigError on dimension mismatch.
Eigen::VectorXd pseudo_data(const AmpState& state, const Eigen::MatrixXd& a);

/// (1/M) sum r_i^2.
double estimate_noise(std::span<const double> r);
double estimate_noise(const Eigen::VectorXd& r);

/// Applies the configured denoiser to pseudo-data s at effective noise sigma2.
DenoiserOutput apply_denoiser(std::span<const double> s, double sigma2, const AmpConfig& config);

/// One AMP iteration:
///   s = A^T r^t + x^t,  sigma^2 = |r^t|^2 / M,  (x^{t+1}, <eta'>) = eta(s, sigma^2),
///   r^{t+1} = y - A x^{t+1} + (1/delta) r^t <eta'>.
/// Throws NumericalError naming the iteration if anything becomes non-finite.
AmpState amp_step(const AmpState& state, const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                  const AmpConfig& config);

struct AmpIteration {
    std::size_t t;
    double sigma_hat2;
    double mse;  // against the supplied truth, NaN without one
    double mean_derivative;
};

struct AmpResult {
    Eigen::VectorXd x_hat;
    std::vector<AmpIteration> history;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Raised when the noise estimate grows tenfold above its initial value.
class AmpDivergence : public NumericalError {
public:
    AmpDivergence(std::size_t iteration, std::vector<AmpIteration> history);
    std::size_t iteration;
    std::vector<AmpIteration> history;
};

/// Iterates amp_step from amp_init until |x^{t+1} - x^t|^2 / |x^t|^2 < tol
/// (absolute floor 1e-14 when x^t = 0) or max_iters.
AmpResult amp_run(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, const MatrixChannelSpec& channel,
                  const AmpConfig& config, const Eigen::VectorXd* truth = nullptr);

}  // namespace mixamp
