#include "rmv/hamiltonian.hpp"

#include "rmv/optimize.hpp"

namespace rmv {

HamiltonianContext make_hamiltonian_context(const AmbiguitySet& set, const Eigen::VectorXd& b) {
    if (b.size() != set.d()) throw DimensionMismatch("hamiltonian context: b has wrong length");
    return HamiltonianContext{b, set, worst_case(set, b)};
}

double evaluate_H(const HamiltonianContext& ctx, double p, double M, const Eigen::VectorXd& a,
                  const Eigen::VectorXd& theta) {
    if (a.size() != ctx.b.size()) throw DimensionMismatch("evaluate_H: a has wrong length");
    const Eigen::MatrixXd g = ctx.set.gamma(theta);
    return p * a.dot(ctx.b) + 0.5 * M * a.dot(g * a);
}

SigmaHat sigma_hat(const HamiltonianContext& ctx, const Eigen::VectorXd& a) {
    if (a.size() != ctx.b.size()) throw DimensionMismatch("sigma_hat: a has wrong length");
    SigmaHat out;
    out.degenerate = (a.lpNorm<Eigen::Infinity>() == 0.0);

    switch (ctx.set.kind()) {
        case AmbiguityKind::UncertainVolatility:
            // a' gamma a = sum a_i^2 theta_i is increasing in every variance.
            out.theta = ctx.set.box_hi();
            return out;
        case AmbiguityKind::AmbiguousCorrelation: {
            // a' gamma a = a1^2 s1^2 + a2^2 s2^2 + 2 a1 a2 s1 s2 rho: monotone in
            // rho with the sign of a1*a2.
            const double rho =
                (a(0) * a(1) >= 0.0) ? ctx.set.box_hi()(0) : ctx.set.box_lo()(0);
            out.theta = Eigen::VectorXd::Constant(1, rho);
            return out;
        }
        case AmbiguityKind::Custom: {
            if (out.degenerate) {
                out.theta = 0.5 * (ctx.set.box_lo() + ctx.set.box_hi());
                return out;
            }
            out.theta = grid_refine_min(
                [&](const Eigen::VectorXd& theta) {
                    return -a.dot(ctx.set.gamma(theta) * a);
                },
                ctx.set.box_lo(), ctx.set.box_hi(), 1e-10, 200);
            return out;
        }
    }
    throw Error("unreachable ambiguity kind");
}

HStar h_star(const HamiltonianContext& ctx, double p, double M) {
    if (!(M > 0.0)) throw NonpositiveM("h_star: M must be positive");
    HStar out;
    out.value = -0.5 * (p * p / M) * ctx.worst.risk_premium;
    out.a_star = -(p / M) * ctx.worst.variance_risk_ratio;
    return out;
}

}  // namespace rmv
