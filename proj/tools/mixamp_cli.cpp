// mixamp: sweep driver for the scalar denoising and AMP experiments.
#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mixamp/bench.hpp"
#include "mixamp/error.hpp"
#include "mixamp/report.hpp"

namespace {

using namespace mixamp;
using namespace mixamp::bench;

struct Options {
    std::string model = "bernoulli";
    std::optional<double> theta;
    std::optional<double> mu;
    std::optional<double> sigma_x2;
    std::optional<double> sigma_z2;
    std::optional<double> snr_db;
    std::size_t n = 0;
    std::vector<std::size_t> n_list;
    std::vector<std::size_t> m_list;
    std::size_t trials = 0;
    std::uint64_t seed = 1;
    std::vector<std::string> denoisers;
    std::size_t grid_theta = 0;
    std::size_t grid_mu = 0;
    std::size_t grid_sigma = 0;
    std::size_t threads = 0;
    std::size_t max_iters = 200;
    double tol = 1e-8;
    std::string out;
    std::string svg;
};

void add_options(CLI::App& sub, Options& o) {
    sub.add_option("--model", o.model, "signal prior")->check(CLI::IsMember({"bernoulli", "bg"}));
    sub.add_option("--theta", o.theta, "probability of a non-zero entry");
    sub.add_option("--mu", o.mu, "slab mean (bg)");
    sub.add_option("--sigma-x2", o.sigma_x2, "slab variance (bg)");
    auto* z = sub.add_option("--sigma-z2", o.sigma_z2, "noise variance");
    auto* s = sub.add_option("--snr-db", o.snr_db, "signal-to-noise ratio in dB");
    z->excludes(s);
    sub.add_option("--n", o.n, "signal length");
    sub.add_option("--n-list", o.n_list, "signal lengths, comma separated")->delimiter(',');
    sub.add_option("--m-list", o.m_list, "measurement counts, comma separated")->delimiter(',');
    sub.add_option("--trials", o.trials, "trials per sweep point");
    sub.add_option("--seed", o.seed, "master seed");
    sub.add_option("--denoiser", o.denoisers, "bayes, plugin or mixd; repeatable")
        ->check(CLI::IsMember({"bayes", "plugin", "mixd"}));
    sub.add_option("--grid-theta", o.grid_theta, "mixture grid points in theta");
    sub.add_option("--grid-mu", o.grid_mu, "mixture grid points in mu (bg)");
    sub.add_option("--grid-sigma", o.grid_sigma, "mixture grid points in sigma_x (bg)");
    sub.add_option("--threads", o.threads, "worker threads (0: all cores)");
    sub.add_option("--max-iters", o.max_iters, "AMP iteration cap");
    sub.add_option("--tol", o.tol, "AMP stopping tolerance");
    sub.add_option("--out", o.out, "CSV output path (default: stdout)");
    sub.add_option("--svg", o.svg, "SVG chart output path");
}

SignalModel make_model(const Options& o) {
    if (o.model == "bernoulli") {
        if (o.mu || o.sigma_x2) throw ConfigError("--mu and --sigma-x2 only apply to --model bg");
        return BernoulliParams{o.theta.value_or(0.05)};
    }
    return BgParams{o.theta.value_or(0.1), o.mu.value_or(0.0), o.sigma_x2.value_or(1.0)};
}

SweepConfig make_config(const Options& o, Experiment experiment) {
    SweepConfig c;
    c.experiment = experiment;
    c.model = make_model(o);
    c.n = o.n;
    c.n_list = o.n_list;
    c.m_list = o.m_list;
    c.sigma_z2 = o.sigma_z2;
    c.snr_db = o.snr_db;
    c.trials = o.trials;
    c.seed = o.seed;
    c.grid_theta = o.grid_theta;
    c.grid_mu = o.grid_mu;
    c.grid_sigma = o.grid_sigma;
    c.threads = o.threads;
    c.amp_max_iters = o.max_iters;
    c.amp_tol = o.tol;
    for (const std::string& d : o.denoisers) c.methods.push_back(parse_denoiser(d));
    return c;
}

template <class Rows>
void write_output(const Rows& rows, const Options& o) {
    if (o.out.empty())
        write_csv(std::cout, std::span(rows));
    else
        emit_csv(std::span(rows), o.out);
}

void write_se_svg(const std::vector<SeRow>& rows, const std::string& path) {
    Series s{"SE (MMSE)", {}};
    for (const SeRow& r : rows) s.points.emplace_back(double(r.m), r.sdr_db);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    const std::string model = rows.empty() ? std::string() : rows.front().model;
    write_svg(out, {"State-evolution SDR (" + model + ")", "M", "SDR (dB)", false}, std::span(&s, 1));
    if (!out) throw IoError("failed writing '" + path + "'");
}

int run(Experiment experiment, const Options& o) {
    const SweepConfig c = make_config(o, experiment);
    switch (experiment) {
        case Experiment::scalar_sweep:
        case Experiment::denoise_once: {
            const auto res = experiment == Experiment::scalar_sweep ? run_scalar_sweep(c) : run_denoise_once(c);
            write_output(res.rows, o);
            if (!o.svg.empty()) emit_svg(std::span(res.rows), o.svg);
            break;
        }
        case Experiment::amp_sweep: {
            const auto res = run_amp_sweep(c);
            write_output(res.rows, o);
            if (!o.svg.empty()) emit_svg(std::span(res.rows), o.svg);
            break;
        }
        case Experiment::se_curve: {
            const auto rows = run_se_curve(c);
            write_output(rows, o);
            if (!o.svg.empty()) write_se_svg(rows, o.svg);
            break;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixture denoising and AMP experiments"};
    app.set_config("--config", "", "key=value config file; [subcommand] sections, flags take precedence");
    app.require_subcommand(1);

    Options opts;
    std::optional<Experiment> chosen;
    const std::pair<const char*, Experiment> commands[] = {
        {"scalar-sweep", Experiment::scalar_sweep},
        {"amp-sweep", Experiment::amp_sweep},
        {"se-curve", Experiment::se_curve},
        {"denoise-once", Experiment::denoise_once},
    };
    const char* help[] = {
        "excess MSE of scalar denoisers against N",
        "AMP reconstruction SDR against M",
        "state-evolution fixed points against M",
        "one denoising trial per N",
    };
    for (std::size_t k = 0; k < std::size(commands); ++k) {
        auto* sub = app.add_subcommand(commands[k].first, help[k]);
        add_options(*sub, opts);
        sub->callback([&chosen, e = commands[k].second] { chosen = e; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return run(*chosen, opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}
