#pragma once

#include <Eigen/Dense>

#include "rmv/ambiguity.hpp"

namespace rmv {

// Bundles the return vector, its ambiguity set, and the precomputed worst case
// so the pointwise Hamiltonian and its saddle value share one consistent state.
struct HamiltonianContext {
    Eigen::VectorXd b;
    AmbiguitySet set;
    WorstCase worst;
};

HamiltonianContext make_hamiltonian_context(const AmbiguitySet& set, const Eigen::VectorXd& b);

// H(p, M, a, theta) = p a.b + (M/2) a' gamma(theta) a, exactly as written.
double evaluate_H(const HamiltonianContext& ctx, double p, double M, const Eigen::VectorXd& a,
                  const Eigen::VectorXd& theta);

struct SigmaHat {
    Eigen::VectorXd theta;
    bool degenerate = false;  // a = 0: any theta attains the max
};

// argmax over Theta of a' gamma(theta) a. Closed form for the named kinds,
// numeric (grid + refinement) for Custom, where concavity of gamma makes the
// objective concave.
SigmaHat sigma_hat(const HamiltonianContext& ctx, const Eigen::VectorXd& a);

struct HStar {
    double value = 0.0;
    Eigen::VectorXd a_star;
};

// Saddle value and minimizer: value = -(p^2 / 2M) R*, a* = -(p/M) (Sigma*)^-1 b.
HStar h_star(const HamiltonianContext& ctx, double p, double M);

}  // namespace rmv
