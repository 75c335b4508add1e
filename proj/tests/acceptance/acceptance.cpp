// Acceptance suite: one PASS/FAIL line per criterion.
//
//   mixamp_acceptance                 run all criteria
//   mixamp_acceptance --criterion N   run criterion N only
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mixamp/amp.hpp"
#include "mixamp/bench.hpp"
#include "mixamp/fit.hpp"
#include "mixamp/mixd.hpp"
#include "mixamp/oracle.hpp"
#include "mixamp/report.hpp"

namespace {

using namespace mixamp;
using namespace mixamp::bench;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const std::vector<std::size_t> kCrossoverNs{10, 15, 20, 25, 30, 35, 40, 45, 50, 60, 70, 85, 100};
const SignalModel kBernoulli = BernoulliParams{0.05};
const SignalModel kBg = BgParams{0.1, 0.0, 1.0};
constexpr double kScalarNoise = 0.1;

const ScalarRow& row_for(const ScalarSweepResult& r, std::size_t n, const std::string& method) {
    for (const ScalarRow& row : r.rows)
        if (row.n == n && row.method == method) return row;
    throw std::logic_error("missing row");
}

void print_scalar_table(const ScalarSweepResult& r) {
    std::printf("  %6s %-7s %12s %12s %12s\n", "N", "method", "mse", "excess", "stderr");
    for (const ScalarRow& row : r.rows)
        std::printf("  %6zu %-7s %12.6e %12.6e %12.3e\n", row.n, row.method.c_str(), row.mse, row.excess_mse,
                    row.stderr_mse);
}

// 1. Scalar Bernoulli crossover.
Outcome criterion1() {
    SweepConfig c;
    c.model = kBernoulli;
    c.sigma_z2 = kScalarNoise;
    c.n_list = kCrossoverNs;
    c.trials = 200000;
    c.seed = 1;
    c.methods = {AmpDenoiser::mixd, AmpDenoiser::plugin};
    const auto res = run_scalar_sweep(c);
    print_scalar_table(res);

    Outcome o;
    const ScalarRow& m15 = row_for(res, 15, "mixd");
    o.require(m15.excess_mse >= 0.75e-3 && m15.excess_mse <= 3.0e-3,
              fmt("MixD excess at N=15 is %.4e, outside [7.5e-4, 3e-3]", m15.excess_mse));
    std::size_t first = 0;
    for (std::size_t n : kCrossoverNs)
        if (row_for(res, n, "plugin").excess_mse <= 1.5e-3) {
            first = n;
            break;
        }
    o.require(first >= 25 && first <= 60, fmt("first N with Plug-in excess <= 1.5e-3 is %zu", first));
    o.detail = fmt("MixD excess(N=15) = %.3e (+-%.1e), Plug-in reaches 1.5e-3 at N = %zu", m15.excess_mse,
                   m15.stderr_mse, first) +
               (o.detail.empty() ? "" : " | " + o.detail);
    return o;
}

// 2. Asymptotic optimality at N = 1000.
Outcome criterion2() {
    Outcome o;
    std::string summary;
    struct Setting {
        SignalModel model;
        std::size_t trials;
        double limit;
    };
    for (const Setting& s : {Setting{kBernoulli, 20000, 2e-4}, Setting{kBg, 1000, 1e-3}}) {
        SweepConfig c;
        c.model = s.model;
        c.sigma_z2 = kScalarNoise;
        c.n_list = {1000};
        c.trials = s.trials;
        c.seed = 2;
        c.methods = {AmpDenoiser::mixd, AmpDenoiser::plugin};
        const auto res = run_scalar_sweep(c);
        print_scalar_table(res);
        for (const ScalarRow& row : res.rows) {
            summary += fmt("%s/%s %.2e(+-%.1e) ", row.model.c_str(), row.method.c_str(), row.excess_mse,
                           row.stderr_mse);
            o.require(row.excess_mse - 3.0 * row.stderr_mse < s.limit,
                      fmt("%s %s excess %.3e not below %.0e", row.model.c_str(), row.method.c_str(),
                          row.excess_mse, s.limit));
        }
    }
    o.detail = summary + (o.detail.empty() ? "" : "| " + o.detail);
    return o;
}

// 3. MixD is no worse than Plug-in for N <= 100.
Outcome criterion3() {
    Outcome o;
    std::size_t checked = 0;
    double worst = -INFINITY;
    struct Setting {
        SignalModel model;
        std::vector<std::size_t> ns;
        std::size_t trials;
    };
    std::vector<std::size_t> bg_ns;
    for (std::size_t n : default_n_list())
        if (n <= 100) bg_ns.push_back(n);
    for (const Setting& s : {Setting{kBernoulli, kCrossoverNs, 50000}, Setting{kBg, bg_ns, 4000}}) {
        SweepConfig c;
        c.model = s.model;
        c.sigma_z2 = kScalarNoise;
        c.n_list = s.ns;
        c.trials = s.trials;
        c.seed = 3;
        c.methods = {AmpDenoiser::mixd, AmpDenoiser::plugin};
        const auto res = run_scalar_sweep(c);
        print_scalar_table(res);
        for (std::size_t p = 0; p < s.ns.size(); ++p) {
            const auto d = paired_difference(res, p, 0, 1);
            const double z = d.stderr_mean > 0 ? d.mean / d.stderr_mean : (d.mean > 0 ? INFINITY : -INFINITY);
            worst = std::max(worst, z);
            ++checked;
            std::printf("  %s N=%zu: mixd - plugin = %.4e +- %.1e\n", family_name(family_of(s.model)).data(),
                        s.ns[p], d.mean, d.stderr_mean);
            o.require(d.mean <= 2.0 * d.stderr_mean,
                      fmt("%s N=%zu: MixD exceeds Plug-in by %.3e (%.1f joint SE)",
                          family_name(family_of(s.model)).data(), s.ns[p], d.mean, z));
        }
    }
    o.detail = fmt("%zu points, largest (MixD - Plug-in)/SE = %.2f", checked, worst) +
               (o.detail.empty() ? "" : " | " + o.detail);
    return o;
}

// 4. AMP with the mixture denoiser reaches the state-evolution SDR.
Outcome criterion4() {
    Outcome o;
    struct Setting {
        SignalModel model;
        std::vector<double> snrs;
        std::vector<std::size_t> ms;
    };
    const std::vector<Setting> settings{
        {kBg, {10.0, 25.0}, {1000, 1500, 2000, 2500}},
        {BernoulliParams{0.03}, {5.0, 10.0}, {1000, 1500, 2000, 2500, 3000, 3500}},
        {BernoulliParams{0.1}, {5.0, 10.0}, {1000, 1500, 2000, 2500, 3000, 3500}},
    };
    double worst = 0.0;
    std::size_t points = 0;
    std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // model -> (within, total)
    std::printf("  %-9s %6s %5s %5s %9s %9s %9s %5s\n", "model", "theta", "snr", "M", "sdr", "se_sdr", "iters",
                "div");
    for (const Setting& s : settings) {
        for (double snr : s.snrs) {
            SweepConfig c;
            c.experiment = Experiment::amp_sweep;
            c.model = s.model;
            c.n = 5000;
            c.m_list = s.ms;
            c.snr_db = snr;
            c.trials = 10;
            c.seed = 4;
            c.methods = {AmpDenoiser::mixd};
            const auto res = run_amp_sweep(c);
            for (const AmpRow& r : res.rows) {
                const double gap = std::abs(r.sdr_db - r.se_sdr_db);
                worst = std::max(worst, std::isfinite(gap) ? gap : INFINITY);
                ++points;
                std::printf("  %-9s %6.3f %5.1f %5zu %9.4f %9.4f %9.1f %5zu\n", r.model.c_str(), r.theta, snr, r.m,
                            r.sdr_db, r.se_sdr_db, r.mean_iters, r.diverged_count);
                auto& [within, total] = tally[r.model];
                ++total;
                if (gap <= 0.5 && r.diverged_count == 0) ++within;
                o.require(gap <= 0.5 && r.diverged_count == 0,
                          fmt("%s theta=%.2f snr=%.0f M=%zu: SDR %.3f vs SE %.3f, %zu diverged", r.model.c_str(),
                              r.theta, snr, r.m, r.sdr_db, r.se_sdr_db, r.diverged_count));
            }
        }
    }
    std::string counts;
    for (const auto& [model, wt] : tally) counts += fmt("%s %zu/%zu within 0.5 dB, ", model.c_str(), wt.first, wt.second);
    o.detail = counts + fmt("%zu sweep points, N=5000, 10 trials, largest |SDR - SE| = %.3f dB", points, worst) +
               (o.detail.empty() ? "" : " | " + o.detail);
    return o;
}

std::vector<double> scalar_data(const SignalModel& m, std::size_t n, double s2, SeededStream& rng) {
    const auto x = sample_signal(m, n, rng);
    return sample_scalar_channel(x, {s2}, rng);
}

// 5. Fast paths agree with their reference implementations.
Outcome criterion5() {
    Outcome o;
    SeededStream pick(5, 0);

    // mixture denoiser against the long-double reference
    {
        const ParamGrid grids[] = {build_bernoulli_grid(201), build_bg_grid(21, 21, 21), build_bg_grid(9, 9, 9)};
        double worst = 0.0;
        for (int rep = 0; rep < 30; ++rep) {
            const ParamGrid& grid = grids[rep % 3];
            const SignalModel truth =
                rep % 3 == 0 ? SignalModel{BernoulliParams{0.01 + 0.5 * pick.uniform()}}
                             : SignalModel{BgParams{0.05 + 0.6 * pick.uniform(), -1.5 + 3 * pick.uniform(),
                                                    0.1 + 2 * pick.uniform()}};
            const double s2 = 0.02 + 0.5 * pick.uniform();
            const std::size_t n = 1 + static_cast<std::size_t>(pick.uniform() * 100);
            const auto y = scalar_data(truth, n, s2, pick);
            const auto fast = mixd_denoise_detailed(y, grid, s2);
            const auto slow = mixd_bruteforce(y, grid, s2);
            for (std::size_t i = 0; i < n; ++i) {
                double scale = 0.0;
                for (std::size_t g = 0; g < grid.size(); ++g)
                    scale += std::exp(fast.posterior.log_weights[g]) * std::abs(posterior(y[i], grid.node(g), s2).mean);
                const double rel = std::abs(fast.output.estimates[i] - slow[i]) / std::max(scale, 1e-300);
                worst = std::max(worst, rel);
            }
        }
        o.require(worst <= 1e-12, fmt("mixd vs brute force relative error %.2e", worst));
        o.detail += fmt("mixd/brute-force rel %.1e; ", worst);
    }

    // derivative identity against central differences
    {
        double worst = 0.0;
        for (int draw = 0; draw < 1000; ++draw) {
            const double theta = pick.uniform();
            const double s2 = 0.05 + 1.95 * pick.uniform();
            const SignalModel m = draw % 2 == 0 ? SignalModel{BernoulliParams{theta}}
                                                : SignalModel{BgParams{theta, -2 + 4 * pick.uniform(),
                                                                       0.1 + 2.9 * pick.uniform()}};
            const double y = sample_signal(m, 1, pick)[0] + std::sqrt(s2) * pick.normal();
            const double exact = posterior(y, m, s2).variance / s2;
            const double h = 1e-5 * (1.0 + std::abs(y));
            const double fd = (posterior(y + h, m, s2).mean - posterior(y - h, m, s2).mean) / (2 * h);
            const double err = std::abs(fd - exact);
            if (err > 1e-6 * std::abs(exact) + 1e-9) o.require(false, fmt("derivative draw %d: %.3e vs %.3e", draw, exact, fd));
            worst = std::max(worst, err / std::max(std::abs(exact), 1e-3));
        }
        o.detail += fmt("derivative rel %.1e; ", worst);
    }

    // EM against a 1e-4 likelihood grid
    {
        std::size_t mismatches = 0;
        for (int rep = 0; rep < 100; ++rep) {
            const double theta = 0.01 + 0.6 * pick.uniform();
            const double s2 = 0.02 + 0.5 * pick.uniform();
            const std::size_t n = 10 + static_cast<std::size_t>(pick.uniform() * 990);
            const auto y = scalar_data(BernoulliParams{theta}, n, s2, pick);
            const auto fit = fit_bernoulli_ml(y, s2);
            const double th = std::get<BernoulliParams>(fit.params).theta;
            constexpr int kCells = 10000;
            std::vector<double> ll(kCells + 1);
            int best = 0;
            for (int k = 0; k <= kCells; ++k) {
                ll[k] = log_marginal_likelihood(y, BernoulliParams{k / double(kCells)}, s2);
                if (ll[k] > ll[best]) best = k;
            }
            double cell = 0.0;
            if (best > 0) cell = std::max(cell, ll[best] - ll[best - 1]);
            if (best < kCells) cell = std::max(cell, ll[best] - ll[best + 1]);
            const bool near = std::abs(th - best / double(kCells)) <= 1.0 / kCells;
            const bool ok = (near && fit.log_likelihood >= ll[best] - cell - 1e-9) ||
                            fit.log_likelihood >= ll[best] - 1e-9;
            if (!ok) ++mismatches;
        }
        o.require(mismatches == 0, fmt("EM disagrees with the grid search on %zu of 100 instances", mismatches));
        o.detail += fmt("EM/grid mismatches %zu/100; ", mismatches);
    }

    // parameter posterior normalization at N = 1e4
    {
        double worst = 0.0;
        const std::pair<SignalModel, ParamGrid> cases[] = {
            {kBernoulli, build_bernoulli_grid(kDefaultBernoulliGrid)},
            {kBg, build_bg_grid(kDefaultBgGridAmp, kDefaultBgGridAmp, kDefaultBgGridAmp)},
        };
        for (const auto& [model, grid] : cases) {
            const auto y = scalar_data(model, 10000, kScalarNoise, pick);
            const auto post = param_posterior(y, grid, kScalarNoise);
            long double sum = 0.0L;
            for (double lw : post.log_weights) sum += std::exp(static_cast<long double>(lw));
            worst = std::max(worst, static_cast<double>(std::abs(sum - 1.0L)));
        }
        o.require(worst <= 1e-12, fmt("posterior weights sum off by %.2e", worst));
        o.detail += fmt("|sum w - 1| %.1e", worst);
    }
    return o;
}

// 6. State evolution: closed form and agreement with AMP.
Outcome criterion6() {
    Outcome o;
    double worst_closed = 0.0;
    for (double delta : {2.0, 2.5, 4.0, 10.0}) {
        const double sz2 = 0.1;
        const auto fp = se_fixed_point(kBg, delta, sz2, SeDenoiser::identity);
        const double exact = sz2 * delta / (delta - 1.0);
        worst_closed = std::max(worst_closed, std::abs(fp.sigma_inf2 - exact) / exact);
    }
    o.require(worst_closed <= 1e-12, fmt("identity fixed point off by %.2e relative", worst_closed));

    constexpr std::size_t kIters = 15;
    constexpr int kSeeds = 10;
    const MatrixChannelSpec ch{5000, 2000, sigma_z2_from_snr(kBg, 5000, 2000, db_to_linear(10.0))};
    std::vector<double> mse(kIters, 0.0);
    for (int seed = 0; seed < kSeeds; ++seed) {
        SeededStream rng(6, static_cast<std::uint64_t>(seed));
        const auto x = sample_signal(kBg, ch.n, rng);
        const auto sample = sample_matrix_channel(x, ch, rng);
        const Eigen::VectorXd truth = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(ch.n));
        AmpConfig cfg;
        cfg.known_params = kBg;
        cfg.max_iters = kIters;
        cfg.tol = std::numeric_limits<double>::min();
        const auto res = amp_run(sample.a, sample.y, ch, cfg, &truth);
        if (res.history.size() != kIters) {
            o.require(false, fmt("seed %d stopped after %zu iterations", seed, res.history.size()));
            return o;
        }
        for (std::size_t t = 0; t < kIters; ++t) mse[t] += res.history[t].mse / kSeeds;
    }
    const auto se = se_trajectory(kBg, ch.delta(), ch.sigma_z2, SeDenoiser::bayes, kIters);
    double worst = 0.0;
    for (std::size_t t = 0; t < kIters; ++t) {
        const double rel = std::abs(mse[t] / se[t].mse - 1.0);
        std::printf("  t=%2zu  amp mse %.5e  se mse %.5e  rel %.3f\n", t + 1, mse[t], se[t].mse, rel);
        worst = std::max(worst, rel);
    }
    o.require(worst <= 0.10, fmt("AMP MSE departs from SE by %.1f%%", 100 * worst));
    o.detail = fmt("identity fixed point rel err %.1e; AMP vs SE worst %.2f%% over %zu iterations", worst_closed,
                   100 * worst, kIters) +
               (o.detail.empty() ? "" : " | " + o.detail);
    return o;
}

template <class Rows>
std::string to_csv(const Rows& rows) {
    std::ostringstream os;
    write_csv(os, std::span(rows));
    return os.str();
}

// 7. Repeated runs produce identical CSV bytes.
Outcome criterion7() {
    Outcome o;
    SweepConfig s;
    s.model = kBg;
    s.sigma_z2 = kScalarNoise;
    s.n_list = {10, 50};
    s.trials = 200;
    s.seed = 7;
    s.grid_theta = s.grid_mu = s.grid_sigma = 9;
    SweepConfig b = s;
    b.model = kBernoulli;
    b.trials = 2000;

    SweepConfig a;
    a.experiment = Experiment::amp_sweep;
    a.model = kBg;
    a.n = 500;
    a.m_list = {200, 300};
    a.trials = 3;
    a.seed = 7;
    a.grid_theta = a.grid_mu = a.grid_sigma = 7;
    a.methods = {AmpDenoiser::mixd, AmpDenoiser::plugin, AmpDenoiser::bayes};

    SweepConfig e = a;
    e.experiment = Experiment::se_curve;
    e.m_list = {1000, 2000, 3000};
    e.n = 5000;

    std::size_t bytes = 0;
    auto same = [&](const std::string& what, const std::function<std::string()>& run) {
        const std::string first = run();
        const std::string second = run();
        bytes += first.size();
        o.require(first == second, what + " CSV differs between runs");
    };
    same("scalar bg", [&] { return to_csv(run_scalar_sweep(s).rows); });
    same("scalar bernoulli", [&] { return to_csv(run_scalar_sweep(b).rows); });
    same("amp", [&] { return to_csv(run_amp_sweep(a).rows); });
    same("se-curve", [&] { return to_csv(run_se_curve(e)); });
    same("denoise-once", [&] { return to_csv(run_denoise_once(b).rows); });

    SweepConfig threaded = s;
    threaded.threads = 3;
    o.require(to_csv(run_scalar_sweep(threaded).rows) == to_csv(run_scalar_sweep(s).rows),
              "thread count changes the scalar CSV");
    o.detail = fmt("5 sweeps repeated, %zu bytes compared, thread count checked", bytes) +
               (o.detail.empty() ? "" : " | " + o.detail);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "run a single criterion (1-7)")->check(CLI::Range(1, 7));
    CLI11_PARSE(app, argc, argv);

    const std::function<Outcome()> criteria[] = {criterion1, criterion2, criterion3, criterion4,
                                                 criterion5, criterion6, criterion7};
    bool all = true;
    for (int k = 1; k <= 7; ++k) {
        if (only != 0 && k != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k - 1]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %d: %s  (%.0f s)  %s\n", k, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
