#include "rmv/frontier.hpp"

#include <cmath>

#include "rmv/errors.hpp"

namespace rmv {

FrontierContext make_frontier_context(double x0, double T, double R_star) {
    if (!(T > 0.0)) throw InvalidParameter("horizon T must be positive");
    if (!(R_star >= 0.0)) throw InvalidParameter("risk premium must be nonnegative");
    return FrontierContext{x0, T, R_star};
}

double frontier_return(const FrontierContext& c, double vartheta) {
    if (!(vartheta > 0.0)) throw NonpositiveVariance("variance budget must be positive");
    return c.x0 + std::sqrt(vartheta) * std::sqrt(std::expm1(c.R_star * c.T));
}

double inverse_frontier(const FrontierContext& c, double target_mean) {
    if (!(target_mean > c.x0))
        throw TargetBelowInitial("target mean must exceed initial capital");
    const double gap = std::expm1(c.R_star * c.T);
    if (gap <= 0.0)
        throw ZeroRiskPremium("degenerate frontier: no excess return is attainable");
    const double excess = target_mean - c.x0;
    return excess * excess / gap;
}

double lambda_of_vartheta(const FrontierContext& c, double vartheta) {
    if (!(vartheta > 0.0)) throw NonpositiveVariance("variance budget must be positive");
    return std::sqrt(std::expm1(c.R_star * c.T) / (4.0 * vartheta));
}

double sharpe_lower_bound(const FrontierContext& c) {
    return std::sqrt(std::expm1(c.R_star * c.T));
}

}  // namespace rmv
