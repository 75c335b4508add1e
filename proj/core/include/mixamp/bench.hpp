#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixamp/amp.hpp"
#include "mixamp/model.hpp"

namespace mixamp::bench {

enum class Experiment { scalar_sweep, amp_sweep, se_curve, denoise_once };

/// One experiment. Zero / empty fields mean "use the default for this experiment".
struct SweepConfig {
    Experiment experiment = Experiment::scalar_sweep;
    SignalModel model = BernoulliParams{0.05};
    std::vector<std::size_t> n_list;  // scalar-sweep, denoise-once
    std::size_t n = 0;                // amp-sweep, se-curve
    std::vector<std::size_t> m_list;  // amp-sweep, se-curve
    std::optional<double> sigma_z2;
    std::optional<double> snr_db;
    std::size_t trials = 0;
    std::uint64_t seed = 1;
    std::size_t grid_theta = 0;
    std::size_t grid_mu = 0;
    std::size_t grid_sigma = 0;
    std::vector<AmpDenoiser> methods;
    std::size_t threads = 0;  // 0: hardware concurrency
    std::size_t amp_max_iters = 200;
    double amp_tol = 1e-8;
};

inline constexpr std::size_t kDefaultScalarTrials = 200000;
inline constexpr std::size_t kDefaultAmpTrials = 10;
inline constexpr double kDefaultScalarNoise = 0.1;
inline constexpr double kDefaultSnrDb = 10.0;

/// 20 log-spaced integers covering [10, 1000].
std::vector<std::size_t> default_n_list();

/// Fills defaults and checks invariants; throws ConfigError.
SweepConfig resolve(SweepConfig config);

/// Grid used by the mixd method for this config.
ParamGrid make_grid(const SweepConfig& config);

/// Stream index for trial `trial` of sweep point `point`.
constexpr std::uint64_t stream_index(std::size_t point, std::size_t trial) noexcept {
    return (static_cast<std::uint64_t>(point) << 32) | static_cast<std::uint64_t>(trial);
}

struct TrialRecord {
    std::size_t point = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::vector<double> mse;  // per method, config order; NaN when the run failed
    std::vector<std::size_t> iterations;
    double wall_seconds = 0.0;
};

struct ScalarRow {
    std::string model;
    std::size_t n = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::string method;
    double mse = 0.0;
    double mmse = 0.0;
    double excess_mse = 0.0;
    double stderr_mse = 0.0;

    bool operator==(const ScalarRow&) const = default;
};

struct AmpRow {
    std::string model;
    std::size_t n = 0;
    std::size_t m = 0;
    double snr_db = 0.0;
    double theta = 0.0;
    double mu = 0.0;
    double sigma_x2 = 0.0;
    std::string denoiser;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    double mse = 0.0;
    double sdr_db = 0.0;
    double se_mmse = 0.0;
    double se_sdr_db = 0.0;
    double mean_iters = 0.0;
    std::size_t diverged_count = 0;

    bool operator==(const AmpRow&) const = default;
};

struct SeRow {
    std::string model;
    std::size_t n = 0;
    std::size_t m = 0;
    double delta = 0.0;
    double snr_db = 0.0;
    double sigma_z2 = 0.0;
    double sigma_inf2 = 0.0;
    double mmse = 0.0;
    double sdr_db = 0.0;
    std::size_t iterations = 0;

    bool operator==(const SeRow&) const = default;
};

struct ScalarSweepResult {
    std::vector<TrialRecord> trials;  // point-major, then trial index
    std::vector<ScalarRow> rows;      // point-major, then method
};

struct AmpSweepResult {
    std::vector<TrialRecord> trials;
    std::vector<AmpRow> rows;
};

ScalarSweepResult run_scalar_sweep(const SweepConfig& config);
AmpSweepResult run_amp_sweep(const SweepConfig& config);
std::vector<SeRow> run_se_curve(const SweepConfig& config);
/// A single trial (index 0) per N; rows carry trials = 1 and zero standard error.
ScalarSweepResult run_denoise_once(const SweepConfig& config);

/// Per-trial MSE difference between two methods of a scalar sweep at one point:
/// mean and standard error of the paired difference (first minus second).
struct PairedDifference {
    double mean;
    double stderr_mean;
};
PairedDifference paired_difference(const ScalarSweepResult& result, std::size_t point, std::size_t first,
                                   std::size_t second);

}  // namespace mixamp::bench
