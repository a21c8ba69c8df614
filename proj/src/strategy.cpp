#include "rmv/strategy.hpp"

#include <cmath>

#include "rmv/errors.hpp"

namespace rmv {

RobustStrategy make_robust_strategy(double lambda, double x0, double T, const Eigen::VectorXd& b,
                                    const WorstCase& worst) {
    if (!(lambda > 0.0)) throw InvalidParameter("risk aversion lambda must be positive");
    if (!(T > 0.0)) throw InvalidParameter("horizon T must be positive");
    if (b.size() != worst.variance_risk_ratio.size())
        throw DimensionMismatch("return vector and worst-case ratio disagree in dimension");
    if (!(worst.risk_premium >= 0.0))
        throw InvalidParameter("worst-case risk premium must be nonnegative");
    return RobustStrategy{lambda, x0, T, b, worst};
}

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> samples)
    : EmpiricalMeasure(std::move(samples), {}) {}

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> samples, std::vector<double> weights)
    : samples_(std::move(samples)), weights_(std::move(weights)) {
    if (samples_.empty()) throw EmptyMeasure("empirical measure needs at least one sample");
    if (weights_.empty()) {
        weights_.assign(samples_.size(), 1.0 / static_cast<double>(samples_.size()));
    } else {
        if (weights_.size() != samples_.size())
            throw DimensionMismatch("weights and samples disagree in length");
        double total = 0.0;
        for (double w : weights_) {
            if (!(w >= 0.0)) throw InvalidParameter("measure weights must be nonnegative");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw InvalidParameter("measure weights must sum to 1 within 1e-12");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < samples_.size(); ++i) m += weights_[i] * samples_[i];
    double v = 0.0;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const double d = samples_[i] - m;
        v += weights_[i] * d * d;
    }
    mean_ = m;
    variance_ = v;
}

namespace {

void check_time(const RobustStrategy& s, double t) {
    if (!(t >= 0.0) || !(t <= s.T)) throw TimeOutOfRange("time outside [0, T]");
}

}  // namespace

double K_of_t(const RobustStrategy& s, double t) {
    check_time(s, t);
    return s.lambda * std::exp(-s.worst.risk_premium * (s.T - t));
}

double chi_of_t(const RobustStrategy& s, double t) {
    check_time(s, t);
    return -std::expm1(s.worst.risk_premium * (s.T - t)) / (4.0 * s.lambda);
}

double value_function(const RobustStrategy& s, double t, const EmpiricalMeasure& mu) {
    return K_of_t(s, t) * mu.variance() - mu.mean() + chi_of_t(s, t);
}

Eigen::VectorXd optimal_control(const RobustStrategy& s, double t, double x) {
    check_time(s, t);
    const double level = s.x0 + std::exp(s.worst.risk_premium * s.T) / (2.0 * s.lambda);
    return (level - x) * s.worst.variance_risk_ratio;
}

double optimal_cost(const RobustStrategy& s) {
    return -std::expm1(s.worst.risk_premium * s.T) / (4.0 * s.lambda) - s.x0;
}

double expected_terminal_wealth(const RobustStrategy& s) {
    return s.x0 + std::expm1(s.worst.risk_premium * s.T) / (2.0 * s.lambda);
}

double robust_wealth_variance(const RobustStrategy& s, double t) {
    check_time(s, t);
    const double R = s.worst.risk_premium;
    return std::exp(2.0 * R * (s.T - t)) * std::expm1(R * t) /
           (4.0 * s.lambda * s.lambda);
}

}  // namespace rmv
