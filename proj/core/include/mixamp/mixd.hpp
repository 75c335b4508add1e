#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mixamp/denoise.hpp"
#include "mixamp/model.hpp"

namespace mixamp {

/// Quadrature nodes over the prior-parameter space with log prior masses.
///
/// Nodes sharing the same slab (mean, variance) are grouped at construction so
/// the per-component slab densities are evaluated once per group rather than
/// once per node; only theta varies inside a group.
class ParamGrid {
public:
    struct SlabGroup {
        double slab_mean;
        double slab_var;
        std::vector<std::size_t> nodes;
    };

    /// Throws ConfigError on an empty grid, size mismatch, invalid node or non-finite weight.
    ParamGrid(std::vector<SignalModel> nodes, std::vector<double> log_prior_weights);

    std::size_t size() const noexcept { return nodes_.size(); }
    const SignalModel& node(std::size_t i) const { return nodes_.at(i); }
    double theta(std::size_t i) const noexcept { return thetas_[i]; }
    std::span<const SignalModel> nodes() const noexcept { return nodes_; }
    std::span<const double> log_prior_weights() const noexcept { return log_prior_; }
    const std::vector<SlabGroup>& groups() const noexcept { return groups_; }

private:
    std::vector<SignalModel> nodes_;
    std::vector<double> log_prior_;
    std::vector<double> thetas_;
    std::vector<SlabGroup> groups_;
};

/// Normalized posterior over grid nodes, log domain.
struct ParamPosterior {
    std::vector<double> log_weights;
};

/// Jeffreys prior on theta through theta = sin^2(u), u at k midpoints of (0, pi/2).
/// Jeffreys' density is flat in u, so every node carries the same mass.
ParamGrid build_bernoulli_grid(std::size_t k);

/// Product grid: theta as above, mu uniform on [-2, 2], sigma_x uniform on (0, 2]
/// (midpoints, equal spacing in the standard deviation). Node order is
/// theta-major, then mu, then sigma_x.
ParamGrid build_bg_grid(std::size_t k_theta, std::size_t k_mu, std::size_t k_sigma);

inline constexpr std::size_t kDefaultBernoulliGrid = 201;
inline constexpr std::size_t kDefaultBgGridScalar = 33;
inline constexpr std::size_t kDefaultBgGridAmp = 17;

/// sum_i log f(y_i | node) for the spike-and-slab marginal.
double log_marginal_likelihood(std::span<const double> y, const SignalModel& node, double sigma2);

/// Log marginal likelihood at every grid node.
std::vector<double> grid_log_likelihoods(std::span<const double> y, const ParamGrid& grid, double sigma2);

ParamPosterior param_posterior(std::span<const double> y, const ParamGrid& grid, double sigma2);

struct MixdResult {
    DenoiserOutput output;
    ParamPosterior posterior;
};

/// Posterior-weighted mixture of the Bayes estimators over the grid.
///
/// mean_derivative treats the parameter weights as constant in y; each
/// component moves the weights by O(1/N), so the dropped term vanishes with N.
DenoiserOutput mixd_denoise(std::span<const double> y, const ParamGrid& grid, double sigma2);
MixdResult mixd_denoise_detailed(std::span<const double> y, const ParamGrid& grid, double sigma2);

/// Diagnostic estimate of the full divergence (1/N) tr(d eta / d y), weights included,
/// by central differences along Rademacher probes of the whole vector.
double mixd_divergence_fd(std::span<const double> y, const ParamGrid& grid, double sigma2, double step,
                          std::size_t probes, std::uint64_t seed);

}  // namespace mixamp
