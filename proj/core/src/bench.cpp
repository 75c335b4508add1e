#include "mixamp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "mixamp/denoise.hpp"
#include "mixamp/fit.hpp"
#include "mixamp/mixd.hpp"
#include "mixamp/oracle.hpp"

namespace mixamp::bench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Runs body(i) for i in [0, count) on `threads` workers. Results must be written
/// by index; the exception from the lowest failing index is rethrown.
template <class Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < std::min(threads, count); ++k) pool.emplace_back(worker);
    pool.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::size_t worker_count(const SweepConfig& c) {
    if (c.threads > 0) return c.threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

double mse_of(std::span<const double> estimate, std::span<const double> truth) {
    double s = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double d = estimate[i] - truth[i];
        s += d * d;
    }
    return s / static_cast<double>(truth.size());
}

struct MeanStd {
    double mean;
    double stderr_mean;
    std::size_t count;
};

/// Mean and standard error over finite values, accumulated in index order.
MeanStd summarize(const std::vector<double>& v) {
    double sum = 0.0;
    std::size_t count = 0;
    for (double x : v)
        if (std::isfinite(x)) {
            sum += x;
            ++count;
        }
    if (count == 0) return {kNaN, kNaN, 0};
    const double mean = sum / static_cast<double>(count);
    double ss = 0.0;
    for (double x : v)
        if (std::isfinite(x)) ss += (x - mean) * (x - mean);
    const double se = count > 1 ? std::sqrt(ss / static_cast<double>(count - 1) / static_cast<double>(count)) : 0.0;
    return {mean, se, count};
}

double effective_noise(const SweepConfig& c, std::size_t n, std::size_t m) {
    if (c.sigma_z2) return *c.sigma_z2;
    return sigma_z2_from_snr(c.model, n, m, db_to_linear(*c.snr_db));
}

double reported_snr_db(const SweepConfig& c, std::size_t n, std::size_t m, double sigma_z2) {
    if (c.snr_db) return *c.snr_db;
    const double snr = static_cast<double>(n) * prior_variance(c.model) / (static_cast<double>(m) * sigma_z2);
    return 10.0 * std::log10(snr);
}

std::string model_label(const SignalModel& model) { return std::string(family_name(family_of(model))); }

}  // namespace

std::vector<std::size_t> default_n_list() {
    std::vector<std::size_t> out;
    constexpr int kPoints = 20;
    for (int k = 0; k < kPoints; ++k) {
        const double v = std::pow(10.0, 1.0 + 2.0 * k / (kPoints - 1));
        const auto n = static_cast<std::size_t>(std::llround(v));
        if (out.empty() || out.back() != n) out.push_back(n);
    }
    return out;
}

SweepConfig resolve(SweepConfig c) {
    validate(c.model);
    const bool scalar = c.experiment == Experiment::scalar_sweep || c.experiment == Experiment::denoise_once;
    if (c.sigma_z2 && c.snr_db) throw ConfigError("give either sigma_z2 or snr_db, not both");
    if (c.sigma_z2 && !(*c.sigma_z2 >= 0.0)) throw ConfigError("sigma_z2 must be >= 0");
    if (c.sigma_z2) c.sigma_z2 = floor_noise(*c.sigma_z2);

    if (scalar) {
        if (c.snr_db) {
            // scalar channel: SNR = Var(x) / sigma_z2
            const double var = prior_variance(c.model);
            if (!(var > 0.0)) throw ConfigError("degenerate signal: prior variance is zero, SNR undefined");
            c.sigma_z2 = var / db_to_linear(*c.snr_db);
            c.snr_db.reset();
        }
        if (!c.sigma_z2) c.sigma_z2 = kDefaultScalarNoise;
        if (c.n_list.empty()) c.n_list = c.n > 0 ? std::vector<std::size_t>{c.n} : default_n_list();
        if (c.trials == 0) c.trials = c.experiment == Experiment::denoise_once ? 1 : kDefaultScalarTrials;
        if (c.methods.empty()) c.methods = {AmpDenoiser::mixd, AmpDenoiser::plugin};
        for (std::size_t n : c.n_list)
            if (n == 0) throw ConfigError("every N must be >= 1");
    } else {
        if (!c.sigma_z2 && !c.snr_db) c.snr_db = kDefaultSnrDb;
        if (c.n == 0) c.n = 5000;
        if (c.m_list.empty()) throw ConfigError("amp-sweep and se-curve need at least one M (--m-list)");
        for (std::size_t m : c.m_list)
            if (m == 0) throw ConfigError("every M must be >= 1");
        if (c.trials == 0) c.trials = kDefaultAmpTrials;
        if (c.methods.empty()) c.methods = {AmpDenoiser::mixd};
        if (c.amp_max_iters == 0 || !(c.amp_tol > 0.0)) throw ConfigError("AMP needs max_iters >= 1 and tol > 0");
    }
    if (c.trials == 0) throw ConfigError("trials must be >= 1");

    const bool in_amp = !scalar;
    if (family_of(c.model) == ModelFamily::bernoulli) {
        if (c.grid_theta == 0) c.grid_theta = kDefaultBernoulliGrid;
    } else {
        const std::size_t k = in_amp ? kDefaultBgGridAmp : kDefaultBgGridScalar;
        if (c.grid_theta == 0) c.grid_theta = k;
        if (c.grid_mu == 0) c.grid_mu = k;
        if (c.grid_sigma == 0) c.grid_sigma = k;
    }
    return c;
}

ParamGrid make_grid(const SweepConfig& c) {
    if (family_of(c.model) == ModelFamily::bernoulli) return build_bernoulli_grid(c.grid_theta);
    return build_bg_grid(c.grid_theta, c.grid_mu, c.grid_sigma);
}

namespace {

ScalarSweepResult scalar_trials(const SweepConfig& c) {
    const ParamGrid grid = make_grid(c);
    const double sigma2 = *c.sigma_z2;
    const ModelFamily family = family_of(c.model);
    const std::size_t per_point = c.trials;
    const std::size_t total = c.n_list.size() * per_point;

    ScalarSweepResult res;
    res.trials.resize(total);
    parallel_for(total, worker_count(c), [&](std::size_t idx) {
        const auto start = std::chrono::steady_clock::now();
        const std::size_t point = idx / per_point;
        const std::size_t trial = idx % per_point;
        const std::size_t n = c.n_list[point];
        TrialRecord& rec = res.trials[idx];
        rec.point = point;
        rec.trial = trial;
        rec.seed = c.seed;
        rec.stream = stream_index(point, trial);

        SeededStream rng(c.seed, rec.stream);
        const std::vector<double> x = sample_signal(c.model, n, rng);
        const std::vector<double> y = sample_scalar_channel(x, {sigma2}, rng);
        for (AmpDenoiser method : c.methods) {
            DenoiserOutput out;
            switch (method) {
                case AmpDenoiser::bayes: out = bayes_denoise(y, c.model, sigma2); break;
                case AmpDenoiser::plugin: out = plugin_denoise(y, family, sigma2); break;
                case AmpDenoiser::mixd: out = mixd_denoise(y, grid, sigma2); break;
            }
            rec.mse.push_back(mse_of(out.estimates, x));
            rec.iterations.push_back(0);
        }
        rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });

    const double mmse = scalar_mmse(c.model, sigma2);
    const std::string label = model_label(c.model);
    std::vector<double> column(per_point);
    for (std::size_t point = 0; point < c.n_list.size(); ++point) {
        for (std::size_t k = 0; k < c.methods.size(); ++k) {
            for (std::size_t t = 0; t < per_point; ++t) column[t] = res.trials[point * per_point + t].mse[k];
            const MeanStd s = summarize(column);
            res.rows.push_back({label, c.n_list[point], per_point, c.seed, std::string(denoiser_name(c.methods[k])),
                                s.mean, mmse, s.mean - mmse, s.stderr_mean});
        }
    }
    return res;
}

}  // namespace

ScalarSweepResult run_scalar_sweep(const SweepConfig& config) {
    SweepConfig c = config;
    c.experiment = Experiment::scalar_sweep;
    return scalar_trials(resolve(std::move(c)));
}

ScalarSweepResult run_denoise_once(const SweepConfig& config) {
    SweepConfig c = config;
    c.experiment = Experiment::denoise_once;
    c.trials = 1;
    return scalar_trials(resolve(std::move(c)));
}

AmpSweepResult run_amp_sweep(const SweepConfig& config) {
    SweepConfig base = config;
    base.experiment = Experiment::amp_sweep;
    const SweepConfig c = resolve(std::move(base));
    const std::size_t n = c.n;
    const std::size_t per_point = c.trials;
    const std::size_t total = c.m_list.size() * per_point;

    std::vector<AmpConfig> amp_configs;
    for (AmpDenoiser d : c.methods) {
        AmpConfig ac;
        ac.denoiser = d;
        ac.max_iters = c.amp_max_iters;
        ac.tol = c.amp_tol;
        ac.known_params = c.model;
        if (d == AmpDenoiser::mixd) ac.grid = make_grid(c);
        amp_configs.push_back(std::move(ac));
    }

    AmpSweepResult res;
    res.trials.resize(total);
    parallel_for(total, worker_count(c), [&](std::size_t idx) {
        const auto start = std::chrono::steady_clock::now();
        const std::size_t point = idx / per_point;
        const std::size_t trial = idx % per_point;
        const std::size_t m = c.m_list[point];
        const MatrixChannelSpec channel{n, m, effective_noise(c, n, m)};
        TrialRecord& rec = res.trials[idx];
        rec.point = point;
        rec.trial = trial;
        rec.seed = c.seed;
        rec.stream = stream_index(point, trial);

        SeededStream rng(c.seed, rec.stream);
        const std::vector<double> x = sample_signal(c.model, n, rng);
        const MatrixChannelSample sample = sample_matrix_channel(x, channel, rng);
        const Eigen::VectorXd truth = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(n));
        for (const AmpConfig& ac : amp_configs) {
            try {
                const AmpResult r = amp_run(sample.a, sample.y, channel, ac);
                rec.mse.push_back((r.x_hat - truth).squaredNorm() / static_cast<double>(n));
                rec.iterations.push_back(r.iterations);
            } catch (const NumericalError&) {
                rec.mse.push_back(kNaN);
                rec.iterations.push_back(0);
            }
        }
        rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });

    const SpikeSlab prior = spike_slab(c.model);
    const double var = prior_variance(c.model);
    const std::string label = model_label(c.model);
    std::vector<double> column(per_point), iters(per_point);
    for (std::size_t point = 0; point < c.m_list.size(); ++point) {
        const std::size_t m = c.m_list[point];
        const double sigma_z2 = effective_noise(c, n, m);
        const MatrixChannelSpec channel{n, m, sigma_z2};
        const SeFixedPoint se = se_fixed_point(c.model, channel.delta(), sigma_z2, SeDenoiser::bayes);
        for (std::size_t k = 0; k < c.methods.size(); ++k) {
            std::size_t diverged = 0;
            for (std::size_t t = 0; t < per_point; ++t) {
                const TrialRecord& rec = res.trials[point * per_point + t];
                column[t] = rec.mse[k];
                iters[t] = std::isfinite(rec.mse[k]) ? static_cast<double>(rec.iterations[k]) : kNaN;
                if (!std::isfinite(rec.mse[k])) ++diverged;
            }
            const MeanStd s = summarize(column);
            const MeanStd it = summarize(iters);
            AmpRow row;
            row.model = label;
            row.n = n;
            row.m = m;
            row.snr_db = reported_snr_db(c, n, m, sigma_z2);
            row.theta = prior.theta;
            row.mu = prior.slab_mean;
            row.sigma_x2 = prior.slab_var;
            row.denoiser = std::string(denoiser_name(c.methods[k]));
            row.trials = per_point;
            row.seed = c.seed;
            row.mse = s.mean;
            row.sdr_db = s.count > 0 ? sdr_db(var, s.mean) : kNaN;
            row.se_mmse = se.mmse;
            row.se_sdr_db = se.sdr_db;
            row.mean_iters = it.mean;
            row.diverged_count = diverged;
            res.rows.push_back(std::move(row));
        }
    }
    return res;
}

std::vector<SeRow> run_se_curve(const SweepConfig& config) {
    SweepConfig base = config;
    base.experiment = Experiment::se_curve;
    const SweepConfig c = resolve(std::move(base));
    std::vector<SeRow> rows;
    for (std::size_t m : c.m_list) {
        const double sigma_z2 = effective_noise(c, c.n, m);
        const MatrixChannelSpec channel{c.n, m, sigma_z2};
        const SeFixedPoint se = se_fixed_point(c.model, channel.delta(), sigma_z2, SeDenoiser::bayes);
        rows.push_back({model_label(c.model), c.n, m, channel.delta(), reported_snr_db(c, c.n, m, sigma_z2), sigma_z2,
                        se.sigma_inf2, se.mmse, se.sdr_db, se.iterations});
    }
    return rows;
}

PairedDifference paired_difference(const ScalarSweepResult& result, std::size_t point, std::size_t first,
                                   std::size_t second) {
    std::vector<double> diff;
    for (const TrialRecord& rec : result.trials)
        if (rec.point == point) diff.push_back(rec.mse.at(first) - rec.mse.at(second));
    const MeanStd s = summarize(diff);
    return {s.mean, s.stderr_mean};
}

}  // namespace mixamp::bench
