#pragma once

#include <string>
#include <vector>

#include "rmv/ambiguity.hpp"
#include "rmv/config.hpp"
#include "rmv/frontier.hpp"
#include "rmv/simulation.hpp"

namespace rmv {

struct StrategyResult {
    std::string label;
    double misspec_param = 0.0;    // NaN for the robust row
    double analytic_excess = 0.0;  // (1/2 lambda)(e^{R T} - 1) under the strategy's own model
    double analytic_premium = 0.0;
    SharpeEstimate estimate;
    std::vector<double> terminal;  // one wealth sample per path
};

struct ExperimentResult {
    double R_star = 0.0;
    double sharpe_lower = 0.0;
    double expected_terminal = 0.0;   // robust closed form E[X*_T]
    double variance_terminal = 0.0;   // robust closed form Var(X*_T)
    bool has_correlation_report = false;
    CorrelationCaseReport correlation;
    std::vector<StrategyResult> strategies;
};

// Simulates one ensemble (in fixed-size blocks, identical samples regardless
// of blocking) and replays every configured strategy on it.
ExperimentResult run_experiment(const ExperimentConfig& config);

// results.csv / plot.csv at 6 significant digits plus *-raw.csv at 17, and
// the optional sample / driver-path exports. Bodies are deterministic
// functions of the config.
void write_experiment_outputs(const ExperimentResult& result, const ExperimentConfig& config,
                              const std::string& dir);

struct FrontierRow {
    double vartheta;
    double ret;
    double lambda;
    double sharpe_bound;
};

// Analytic frontier sweep over config.vartheta_grid; writes frontier.csv and
// frontier-raw.csv when dir is non-empty.
std::vector<FrontierRow> run_frontier(const ExperimentConfig& config, const std::string& dir);

// Worst-case summary alone: theta*, Sigma*, R*, case label.
std::string worst_case_report(const ExperimentConfig& config);

// worst_case_report plus saddle spot-check residuals and ODE residual maxima.
std::string diagnostics_report(const ExperimentConfig& config);

// Built-in experiment definitions reproducing the three reference tables
// (2: baseline volatility band, 3: fast mean reversion, 5: correlation
// ambiguity). Seeds are pinned per table.
ExperimentConfig table_preset(int which);

}  // namespace rmv
