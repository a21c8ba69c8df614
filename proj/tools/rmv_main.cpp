#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rmv/config.hpp"
#include "rmv/errors.hpp"
#include "rmv/experiment.hpp"

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> paths;
    std::optional<int> steps;
    std::optional<std::string> out;
    bool quick = false;
};

void add_override_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--seed", o.seed, "RNG seed override");
    cmd->add_option("--paths", o.paths, "number of Monte Carlo paths")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--steps", o.steps, "Euler steps per horizon")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "output directory override");
    cmd->add_flag("--quick", o.quick, "50000-path run for CI pipelines");
}

void apply(const Overrides& o, rmv::ExperimentConfig& c) {
    if (o.quick) c.simulation.n_paths = 50000;
    if (o.paths) c.simulation.n_paths = *o.paths;  // explicit --paths wins over --quick
    if (o.seed) {
        c.simulation.seed = *o.seed;
        // a fresh seed re-draws the whole experiment, including columns that
        // carry their own pinned ensemble seed
        for (auto& m : c.misspecified) m.seed.reset();
    }
    if (o.steps) c.simulation.n_steps = *o.steps;
    if (o.out) c.output.dir = *o.out;
}

void print_results(const rmv::ExperimentResult& r) {
    std::printf("%-34s %12s %12s %10s %10s %10s\n", "strategy", "analytic_ex", "mc_excess",
                "sharpe", "ci_lo", "ci_hi");
    for (const auto& s : r.strategies)
        std::printf("%-34s %12.6g %12.6g %10.4f %10.4f %10.4f\n", s.label.c_str(),
                    s.analytic_excess, s.estimate.mean_excess, s.estimate.sharpe,
                    s.estimate.ci_lo, s.estimate.ci_hi);
    std::printf("S_lower = %.6g   R* = %.6g   E[X*_T]-x0 = %.6g   Var[X*_T] = %.6g\n",
                r.sharpe_lower, r.R_star, r.expected_terminal, r.variance_terminal);
}

int run_simulation(const rmv::ExperimentConfig& config) {
    const rmv::ExperimentResult result = rmv::run_experiment(config);
    rmv::write_experiment_outputs(result, config, config.output.dir);
    print_results(result);
    std::printf("wrote %s/results.csv\n", config.output.dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust mean-variance portfolio toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;

    auto* wc = app.add_subcommand("worst-case", "print the worst-case covariance report");
    wc->add_option("--config", config_path, "experiment config (JSON)")->required();

    auto* fr = app.add_subcommand("frontier", "analytic efficient-frontier sweep to CSV");
    fr->add_option("--config", config_path, "experiment config (JSON)")->required();
    fr->add_option("--out", ov.out, "output directory override");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo strategy comparison from a config");
    sim->add_option("--config", config_path, "experiment config (JSON)")->required();
    add_override_flags(sim, ov);

    int table = 0;
    auto* rep = app.add_subcommand("reproduce-table", "run a built-in reference experiment");
    rep->add_option("table", table, "which table: 2, 3 or 5")
        ->required()
        ->check(CLI::IsMember({2, 3, 5}));
    add_override_flags(rep, ov);

    auto* diag = app.add_subcommand("diagnostics", "worst case, saddle check, ODE residuals");
    diag->add_option("--config", config_path, "experiment config (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (wc->parsed()) {
            std::cout << rmv::worst_case_report(rmv::load_config(config_path));
            return 0;
        }
        if (fr->parsed()) {
            rmv::ExperimentConfig c = rmv::load_config(config_path);
            if (ov.out) c.output.dir = *ov.out;
            const auto rows = rmv::run_frontier(c, c.output.dir);
            std::printf("%12s %12s %12s %12s\n", "vartheta", "return", "lambda", "sharpe_bound");
            for (const auto& r : rows)
                std::printf("%12.6g %12.6g %12.6g %12.6g\n", r.vartheta, r.ret, r.lambda,
                            r.sharpe_bound);
            std::printf("wrote %s/frontier.csv (%zu rows)\n", c.output.dir.c_str(), rows.size());
            return 0;
        }
        if (sim->parsed()) {
            rmv::ExperimentConfig c = rmv::load_config(config_path);
            apply(ov, c);
            return run_simulation(c);
        }
        if (rep->parsed()) {
            rmv::ExperimentConfig c = rmv::table_preset(table);
            apply(ov, c);
            std::filesystem::create_directories(c.output.dir);
            std::ofstream cfg_out(std::filesystem::path(c.output.dir) / "config.json",
                                  std::ios::binary);
            cfg_out << rmv::serialize_config(c);
            cfg_out.close();
            return run_simulation(c);
        }
        if (diag->parsed()) {
            std::cout << rmv::diagnostics_report(rmv::load_config(config_path));
            return 0;
        }
    } catch (const rmv::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
