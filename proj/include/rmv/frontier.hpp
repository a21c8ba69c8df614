#pragma once

namespace rmv {

// Efficient-frontier geometry is fully determined by (x0, T, R*).
struct FrontierContext {
    double x0 = 0.0;
    double T = 0.0;
    double R_star = 0.0;
};

FrontierContext make_frontier_context(double x0, double T, double R_star);

// U0(vartheta) = x0 + sqrt(vartheta) sqrt(e^{R*T} - 1): best attainable mean
// at terminal-variance budget vartheta.
double frontier_return(const FrontierContext& c, double vartheta);

// vartheta(m) = (m - x0)^2 / (e^{R*T} - 1): variance needed for target mean m.
double inverse_frontier(const FrontierContext& c, double target_mean);

// lambda(vartheta) = sqrt((e^{R*T} - 1) / (4 vartheta)): risk aversion whose
// unconstrained solution has terminal variance exactly vartheta.
double lambda_of_vartheta(const FrontierContext& c, double vartheta);

// Worst-case Sharpe ratio sqrt(e^{R*T} - 1), the slope of the frontier in
// (std, mean) coordinates.
double sharpe_lower_bound(const FrontierContext& c);

}  // namespace rmv
