#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rmv/strategy.hpp"

namespace rmv {

// One risky asset; variance mean-reverts inside [sigma_lo^2, sigma_hi^2]
// with diffusion eta sqrt((s2 - lo)(hi - s2)), shocks correlated with the
// asset Brownian motion by rho.
struct HestonBoundedModel {
    double b = 0.0;
    double kappa = 0.0;
    double eta = 0.0;
    double sigma0 = 0.0;
    double sigma_lo = 0.0;
    double sigma_hi = 0.0;
    double sigma_inf = 0.0;
    double rho = 0.0;
};

// Two risky assets with fixed marginal vols; the correlation mean-reverts
// inside [0, rho_hi] with diffusion eta sqrt(rho (rho_hi - rho)) driven by a
// Brownian motion independent of the asset shocks.
struct StochCorrModel {
    Eigen::Vector2d b = Eigen::Vector2d::Zero();
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double kappa = 0.0;
    double eta = 0.0;
    double rho0 = 0.0;
    double rho_inf = 0.0;
    double rho_hi = 0.0;
};

// Constant-covariance reference model; used as the brute-force oracle for
// the closed-form wealth moments.
struct ConstantModel {
    Eigen::VectorXd b;
    Eigen::MatrixXd sigma;  // covariance, symmetric positive definite
};

void validate(const HestonBoundedModel& m);
void validate(const StochCorrModel& m);
void validate(const ConstantModel& m);

// Simulated increments and driver state on a uniform grid. Path-major:
//   increments[(p * n_steps + k) * n_assets + a]  = arithmetic return of
//     asset a over step k of path p,
//   state[p * (n_steps + 1) + k]                  = driver value (variance or
//     correlation) at grid time t_k; empty for constant models.
struct PathEnsemble {
    int n_assets = 0;
    int n_steps = 0;
    std::int64_t n_paths = 0;
    double T = 0.0;
    double dt = 0.0;
    std::vector<double> increments;
    std::vector<double> state;
};

// Single Euler steps, exposed so convergence tests exercise exactly the
// production kernel. Draw order is part of the contract: heston consumes
// (z1 asset, z2 orthogonal) per step, stochcorr consumes (z1, z2, zt) with
// zt driving the correlation.
struct HestonStep {
    double increment;
    double var_next;
};
HestonStep heston_euler_step(const HestonBoundedModel& m, double var, double dt, double z1,
                             double z2);

struct StochCorrStep {
    double dr1;
    double dr2;
    double rho_next;
};
StochCorrStep stochcorr_euler_step(const StochCorrModel& m, double rho, double dt, double z1,
                                   double z2, double zt);

// Path p uses RNG substream (seed, first_path + p), so an ensemble can be
// produced in independent blocks that concatenate bit-identically.
PathEnsemble simulate_heston_paths(const HestonBoundedModel& m, double T, int n_steps,
                                   std::int64_t n_paths, std::uint64_t seed,
                                   std::int64_t first_path = 0);
PathEnsemble simulate_stochcorr_paths(const StochCorrModel& m, double T, int n_steps,
                                      std::int64_t n_paths, std::uint64_t seed,
                                      std::int64_t first_path = 0);
PathEnsemble simulate_constant_paths(const ConstantModel& m, double T, int n_steps,
                                     std::int64_t n_paths, std::uint64_t seed,
                                     std::int64_t first_path = 0);

// Feedback allocation map with display metadata. For the affine family
// a(t, x) = (level - x) ratio the coefficients are kept alongside the map so
// strategies can be compared and printed exactly.
struct FeedbackStrategy {
    std::function<void(double t, double x, double* out)> map;
    int d = 0;
    std::string label;
    double analytic_excess = 0.0;  // closed-form E[X_T] - x0 under the strategy's own model
    Eigen::VectorXd ratio;         // affine coefficients; empty if the map is not affine
    double level = 0.0;
};

FeedbackStrategy robust_feedback(const RobustStrategy& s);

// Mean-variance investor who believes in a constant volatility sigma_tilde
// (one asset) or a constant correlation rho_tilde (two assets). Built as the
// robust strategy of the corresponding singleton ambiguity set, so a
// misspecification equal to the worst case reproduces the robust map bit for
// bit.
FeedbackStrategy misspecified_volatility_strategy(double b, double sigma_tilde, double lambda,
                                                  double x0, double T);
FeedbackStrategy misspecified_correlation_strategy(const Eigen::Vector2d& b, double sigma1,
                                                   double sigma2, double rho_tilde, double lambda,
                                                   double x0, double T);

// Wealth along each path: X_{k+1} = X_k + a(t_k, X_k) . dR_k, allocation at
// the left endpoint. Returns terminal wealth per path.
std::vector<double> replay_wealth(const PathEnsemble& paths, const FeedbackStrategy& strategy,
                                  double x0);

struct SharpeEstimate {
    std::int64_t n_paths = 0;
    double mean_excess = 0.0;
    double std = 0.0;
    double sharpe = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

// sharpe = (sample mean - x0) / sample std (divisor N-1); 95% CI by the
// delta method with sample third and fourth central moments.
SharpeEstimate estimate_sharpe(const std::vector<double>& samples, double x0);

// Percentile bootstrap CI around the same point estimate; cross-validation
// for the delta-method interval.
SharpeEstimate bootstrap_sharpe(const std::vector<double>& samples, double x0,
                                int n_resamples = 1000, std::uint64_t seed = 12345);

}  // namespace rmv
