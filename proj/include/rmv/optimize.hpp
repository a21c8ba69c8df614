#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>

#include "rmv/errors.hpp"

namespace rmv {

// Golden-section minimization of a unimodal f on [lo, hi] to interval width tol.
// Iteration count is bounded by the fixed shrink rate, so this always returns.
inline double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                                 double tol) {
    static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Minimizes f over the box [lo, hi] in R^q: 33-point grid per dimension picks the
// starting cell, then coordinate-wise golden-section sweeps refine until moves
// drop below `tol` or sweeps stop improving f beyond floating-point noise.
// Valid for convex f (the concavity condition on gamma makes the risk
// premium convex); the grid stage guards against mildly non-convex callers.
inline Eigen::VectorXd grid_refine_min(const std::function<double(const Eigen::VectorXd&)>& f,
                                       const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                       double tol, int max_sweeps) {
    const Eigen::Index q = lo.size();
    if (q < 1 || q > 3)
        throw InvalidParameter("numeric minimizer supports 1 to 3 parameters, got " +
                               std::to_string(q));
    constexpr int kGrid = 33;

    Eigen::VectorXd best = lo;
    double best_val = std::numeric_limits<double>::infinity();
    Eigen::VectorXd theta(q);
    const int total = static_cast<int>(std::pow(kGrid, static_cast<int>(q)));
    for (int flat = 0; flat < total; ++flat) {
        int rem = flat;
        for (Eigen::Index dim = 0; dim < q; ++dim) {
            const int idx = rem % kGrid;
            rem /= kGrid;
            theta(dim) = (kGrid == 1) ? lo(dim)
                                      : lo(dim) + (hi(dim) - lo(dim)) * idx / double(kGrid - 1);
        }
        const double val = f(theta);
        if (val < best_val) {
            best_val = val;
            best = theta;
        }
    }

    // The inner line searches resolve finer than the outer settle test, and a
    // value-stall cutoff bounds the attainable accuracy honestly: near the
    // minimum the bracketing comparisons are sub-ulp, so theta cannot be
    // resolved below ~sqrt(eps) from function values alone. Once a sweep stops
    // measurably lowering f, further sweeps only chase comparison noise.
    const double scale = std::max({1.0, lo.cwiseAbs().maxCoeff(), hi.cwiseAbs().maxCoeff()});
    const double inner_tol =
        std::max(0.25 * tol, 8.0 * std::numeric_limits<double>::epsilon() * scale);
    const double stall = 16.0 * std::numeric_limits<double>::epsilon();
    double prev_val = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double moved = 0.0;
        for (Eigen::Index dim = 0; dim < q; ++dim) {
            if (hi(dim) - lo(dim) <= tol) continue;
            Eigen::VectorXd probe = best;
            const double updated = golden_section_min(
                [&](double x) {
                    probe(dim) = x;
                    return f(probe);
                },
                lo(dim), hi(dim), inner_tol);
            moved = std::max(moved, std::abs(updated - best(dim)));
            best(dim) = updated;
        }
        const double val = f(best);
        if (moved <= tol || prev_val - val <= stall * (1.0 + std::abs(val))) return best;
        prev_val = val;
    }
    if (q == 1) return best;  // single golden-section pass is already converged
    throw NumericNonConvergence("coordinate descent did not settle within sweep budget");
}

}  // namespace rmv
