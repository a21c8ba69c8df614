#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rmv/ambiguity.hpp"

namespace rmv {

// Closed-form robust mean-variance solution: risk aversion lambda, initial
// capital x0, horizon T, return vector b, and the worst-case covariance data.
struct RobustStrategy {
    double lambda = 0.0;
    double x0 = 0.0;
    double T = 0.0;
    Eigen::VectorXd b;
    WorstCase worst;
};

RobustStrategy make_robust_strategy(double lambda, double x0, double T, const Eigen::VectorXd& b,
                                    const WorstCase& worst);

// Finite measure on wealth values; only mean and variance are consumed.
class EmpiricalMeasure {
  public:
    explicit EmpiricalMeasure(std::vector<double> samples);                // uniform weights
    EmpiricalMeasure(std::vector<double> samples, std::vector<double> weights);

    double mean() const { return mean_; }
    double variance() const { return variance_; }  // weighted population variance
    const std::vector<double>& samples() const { return samples_; }
    const std::vector<double>& weights() const { return weights_; }

  private:
    std::vector<double> samples_, weights_;
    double mean_ = 0.0, variance_ = 0.0;
};

// K(t) = lambda e^{-R*(T-t)}; solves Kdot = R* K with K(T) = lambda.
double K_of_t(const RobustStrategy& s, double t);

// chi(t) = -(1/4 lambda) [e^{R*(T-t)} - 1]; solves chidot = R*/(4K), chi(T) = 0.
double chi_of_t(const RobustStrategy& s, double t);

// v(t, mu) = K(t) Var(mu) - mean(mu) + chi(t).
double value_function(const RobustStrategy& s, double t, const EmpiricalMeasure& mu);

// Feedback allocation [x0 + (1/2 lambda) e^{R*T} - x] (Sigma*)^-1 b. The map is
// time-independent; t is validated for interface uniformity.
Eigen::VectorXd optimal_control(const RobustStrategy& s, double t, double x);

// V0 = -(1/4 lambda)[e^{R*T} - 1] - x0.
double optimal_cost(const RobustStrategy& s);

// x0 + (1/2 lambda)[e^{R*T} - 1]; the same under every covariance in the set.
double expected_terminal_wealth(const RobustStrategy& s);

// Var(X*_t) = e^{2R*(T-t)} / (4 lambda^2) (e^{R*t} - 1). True-measure variance
// whenever the realized risk premium of the strategy stays at R* (in
// particular under the constant worst-case covariance).
double robust_wealth_variance(const RobustStrategy& s, double t);

}  // namespace rmv
