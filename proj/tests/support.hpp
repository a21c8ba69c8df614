#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

// Test-only oracles. Deliberately dumb and independent of the library's own
// code paths: closed forms are checked against quadrature and grid search,
// not against themselves.
namespace oracle {

// Classical RK4 for dy/dt = f(t, y).
inline double rk4(const std::function<double(double, double)>& f, double y0, double t0, double t1,
                  int n_steps) {
    const double h = (t1 - t0) / n_steps;
    double y = y0;
    for (int i = 0; i < n_steps; ++i) {
        const double t = t0 + i * h;
        const double k1 = f(t, y);
        const double k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
        const double k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
        const double k4 = f(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

// Two-asset risk premium at correlation rho, from the explicit 2x2 inverse.
inline double corr_risk_premium(double b1, double b2, double s1, double s2, double rho) {
    const double beta1 = b1 / s1, beta2 = b2 / s2;
    return (beta1 * beta1 + beta2 * beta2 - 2.0 * rho * beta1 * beta2) / (1.0 - rho * rho);
}

// Grid argmin of the premium over [rho_lo, rho_hi].
inline double corr_grid_minimizer(double b1, double b2, double s1, double s2, double rho_lo,
                                  double rho_hi, int n = 200001) {
    double best_rho = rho_lo;
    double best = corr_risk_premium(b1, b2, s1, s2, rho_lo);
    for (int i = 1; i < n; ++i) {
        const double rho = rho_lo + (rho_hi - rho_lo) * i / (n - 1.0);
        const double r = corr_risk_premium(b1, b2, s1, s2, rho);
        if (r < best) {
            best = r;
            best_rho = rho;
        }
    }
    return best_rho;
}

// Minimum premium over [rho_lo, rho_hi]: coarse grid then ternary refinement
// around the incumbent. The premium is smooth and unimodal on each side of its
// stationary point, so the local bracket is valid.
inline double corr_refined_min(double b1, double b2, double s1, double s2, double rho_lo,
                               double rho_hi, int n = 20001) {
    const double step = (rho_hi - rho_lo) / (n - 1.0);
    const double at = corr_grid_minimizer(b1, b2, s1, s2, rho_lo, rho_hi, n);
    double lo = std::max(rho_lo, at - 2.0 * step);
    double hi = std::min(rho_hi, at + 2.0 * step);
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (corr_risk_premium(b1, b2, s1, s2, m1) < corr_risk_premium(b1, b2, s1, s2, m2))
            hi = m2;
        else
            lo = m1;
    }
    return corr_risk_premium(b1, b2, s1, s2, 0.5 * (lo + hi));
}

inline double mean(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

inline double variance(const std::vector<double>& x) {  // unbiased
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

inline double central_moment(const std::vector<double>& x, int order) {
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += std::pow(v - m, order);
    return s / static_cast<double>(x.size());
}

}  // namespace oracle
