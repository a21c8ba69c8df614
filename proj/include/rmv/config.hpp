#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rmv/ambiguity.hpp"
#include "rmv/simulation.hpp"

namespace rmv {

struct MarketSpec {
    enum class Kind { HestonBounded, StochCorr, ConstantSigma };
    Kind kind = Kind::HestonBounded;
    HestonBoundedModel heston;
    StochCorrModel stochcorr;
    ConstantModel constant;

    Eigen::VectorXd drift() const;  // b as a vector, any kind
    int n_assets() const;
};

struct AmbiguitySpec {
    AmbiguityKind kind = AmbiguityKind::UncertainVolatility;
    Eigen::VectorXd sigma_lo, sigma_hi;            // uncertain_volatility
    double sigma1 = 0.0, sigma2 = 0.0;             // ambiguous_correlation
    double rho_lo = 0.0, rho_hi = 0.0;

    AmbiguitySet build() const;
};

struct InvestorSpec {
    double lambda = 0.0;
    double x0 = 0.0;
    double horizon = 0.0;
};

struct SimulationSpec {
    std::int64_t n_paths = 500000;
    int n_steps = 252;
    std::uint64_t seed = 1;
};

struct OutputSpec {
    std::string dir = "out";
    std::string samples = "none";  // none | csv | bin
    int paths_csv = 0;             // driver-state paths to export for plotting
};

// One misspecified-investor column: a sigma0 (1 asset) or rho0 (2 assets)
// value, optionally with its own ensemble seed. Without a seed the column
// replays the shared experiment ensemble (paired comparison); with one it
// runs on an independent ensemble, as in published tables whose columns
// come from separate simulation runs.
struct MisspecifiedSpec {
    MisspecifiedSpec() = default;
    MisspecifiedSpec(double v) : value(v) {}
    MisspecifiedSpec(double v, std::uint64_t s) : value(v), seed(s) {}
    double value = 0.0;
    std::optional<std::uint64_t> seed;
};

// Full experiment description; round-trips losslessly through JSON.
struct ExperimentConfig {
    MarketSpec market;
    AmbiguitySpec ambiguity;
    InvestorSpec investor;
    bool robust_enabled = true;
    std::vector<MisspecifiedSpec> misspecified;
    SimulationSpec simulation;
    std::vector<double> vartheta_grid;
    OutputSpec output;
};

// Parse + full validation (module invariants included); every failure is a
// ConfigError naming the offending key.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);  // shortest round-trip doubles

}  // namespace rmv
