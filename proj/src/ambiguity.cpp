#include "rmv/ambiguity.hpp"

#include <cmath>
#include <cstdio>

#include "rmv/linalg.hpp"
#include "rmv/optimize.hpp"

namespace rmv {

namespace {

void require_vector_length(const Eigen::VectorXd& v, Eigen::Index n, const char* what) {
    if (v.size() != n)
        throw DimensionMismatch(std::string(what) + ": expected length " + std::to_string(n) +
                                ", got " + std::to_string(v.size()));
}

}  // namespace

AmbiguitySet AmbiguitySet::uncertain_volatility(const Eigen::VectorXd& sigma_lo,
                                                const Eigen::VectorXd& sigma_hi) {
    if (sigma_lo.size() != sigma_hi.size() || sigma_lo.size() < 1)
        throw InvalidParameter("uncertain_volatility: malformed volatility bounds");
    AmbiguitySet s;
    s.kind_ = AmbiguityKind::UncertainVolatility;
    s.d_ = static_cast<int>(sigma_lo.size());
    s.box_lo_ = sigma_lo.array().square();
    s.box_hi_ = sigma_hi.array().square();
    for (int i = 0; i < s.d_; ++i) {
        if (!(sigma_lo(i) > 0.0) || !(sigma_lo(i) <= sigma_hi(i)))
            throw InvalidParameter("uncertain_volatility: need 0 < sigma_lo <= sigma_hi at asset " +
                                   std::to_string(i));
    }
    return s;
}

AmbiguitySet AmbiguitySet::ambiguous_correlation(double sigma1, double sigma2, double rho_lo,
                                                 double rho_hi) {
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0))
        throw InvalidParameter("ambiguous_correlation: marginal vols must be positive");
    if (!(rho_lo <= rho_hi) || !(std::abs(rho_lo) < 1.0) || !(std::abs(rho_hi) < 1.0))
        throw InvalidParameter("ambiguous_correlation: need rho_lo <= rho_hi inside (-1, 1)");
    AmbiguitySet s;
    s.kind_ = AmbiguityKind::AmbiguousCorrelation;
    s.d_ = 2;
    s.sigma1_ = sigma1;
    s.sigma2_ = sigma2;
    s.box_lo_ = Eigen::VectorXd::Constant(1, rho_lo);
    s.box_hi_ = Eigen::VectorXd::Constant(1, rho_hi);
    return s;
}

AmbiguitySet AmbiguitySet::custom(int d, std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> gamma,
                                  const Eigen::VectorXd& box_lo, const Eigen::VectorXd& box_hi,
                                  bool declared_concave) {
    if (d < 1) throw InvalidParameter("custom: asset count must be positive");
    if (!gamma) throw InvalidParameter("custom: missing gamma evaluator");
    if (box_lo.size() != box_hi.size() || box_lo.size() < 1 || box_lo.size() > 3)
        throw InvalidParameter("custom: parameter box must have 1 to 3 dimensions");
    for (Eigen::Index i = 0; i < box_lo.size(); ++i)
        if (!(box_lo(i) <= box_hi(i))) throw InvalidParameter("custom: box bounds out of order");
    AmbiguitySet s;
    s.kind_ = AmbiguityKind::Custom;
    s.d_ = d;
    s.gamma_fn_ = std::move(gamma);
    s.box_lo_ = box_lo;
    s.box_hi_ = box_hi;
    s.declared_concave_ = declared_concave;
    s.check_positive_definite_samples();
    s.concavity_spot_check();
    return s;
}

void AmbiguitySet::check_positive_definite_samples() const {
    // Construction-time sanity: gamma must factor at a handful of sampled theta.
    for (const auto& theta : theta_grid(3)) cholesky_lower(gamma(theta));
}

void AmbiguitySet::concavity_spot_check() const {
    // Midpoint concavity of gamma in the matrix order, probed along basis
    // directions at sampled theta pairs. A failure only warns: the numeric
    // minimizer still runs, it just loses its global-optimality guarantee.
    const auto grid = theta_grid(3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            const Eigen::MatrixXd gap = gamma(0.5 * (grid[i] + grid[j])) -
                                        0.5 * (gamma(grid[i]) + gamma(grid[j]));
            for (int k = 0; k < d_; ++k) {
                if (gap(k, k) < -1e-10) {
                    std::fprintf(stderr,
                                 "warning: custom ambiguity set fails the midpoint concavity "
                                 "check (gap %.3e); worst case may be a local minimum\n",
                                 gap(k, k));
                    return;
                }
            }
        }
    }
}

Eigen::MatrixXd AmbiguitySet::gamma(const Eigen::VectorXd& theta) const {
    switch (kind_) {
        case AmbiguityKind::UncertainVolatility: {
            require_vector_length(theta, d_, "gamma(theta)");
            return theta.asDiagonal();
        }
        case AmbiguityKind::AmbiguousCorrelation: {
            require_vector_length(theta, 1, "gamma(theta)");
            Eigen::MatrixXd g(2, 2);
            const double off = theta(0) * sigma1_ * sigma2_;
            g << sigma1_ * sigma1_, off, off, sigma2_ * sigma2_;
            return g;
        }
        case AmbiguityKind::Custom: {
            require_vector_length(theta, box_lo_.size(), "gamma(theta)");
            Eigen::MatrixXd g = gamma_fn_(theta);
            if (g.rows() != d_ || g.cols() != d_)
                throw DimensionMismatch("custom gamma returned wrong-sized matrix");
            return g;
        }
    }
    throw Error("unreachable ambiguity kind");
}

bool AmbiguitySet::contains(const Eigen::VectorXd& theta) const {
    if (theta.size() != box_lo_.size()) return false;
    for (Eigen::Index i = 0; i < theta.size(); ++i)
        if (theta(i) < box_lo_(i) || theta(i) > box_hi_(i)) return false;
    return true;
}

void AmbiguitySet::require_in_domain(const Eigen::VectorXd& theta) const {
    if (!contains(theta)) throw ThetaOutOfDomain("theta outside the parameter box");
}

std::vector<Eigen::VectorXd> AmbiguitySet::theta_grid(int points_per_dim) const {
    if (points_per_dim < 2) throw InvalidParameter("theta_grid: need at least 2 points");
    const Eigen::Index q = box_lo_.size();
    const int total = static_cast<int>(std::pow(points_per_dim, static_cast<int>(q)));
    std::vector<Eigen::VectorXd> grid;
    grid.reserve(total);
    Eigen::VectorXd theta(q);
    for (int flat = 0; flat < total; ++flat) {
        int rem = flat;
        for (Eigen::Index dim = 0; dim < q; ++dim) {
            const int idx = rem % points_per_dim;
            rem /= points_per_dim;
            theta(dim) =
                box_lo_(dim) + (box_hi_(dim) - box_lo_(dim)) * idx / double(points_per_dim - 1);
        }
        grid.push_back(theta);
    }
    return grid;
}

const char* case_label(CorrelationCase c) {
    switch (c) {
        case CorrelationCase::I1: return "I.1";
        case CorrelationCase::I2: return "I.2";
        case CorrelationCase::I3: return "I.3";
        case CorrelationCase::II1: return "II.1'";
        case CorrelationCase::II2: return "II.2'";
        case CorrelationCase::II3: return "II.3'";
    }
    return "?";
}

double risk_premium(const AmbiguitySet& set, const Eigen::VectorXd& b,
                    const Eigen::VectorXd& theta) {
    require_vector_length(b, set.d(), "risk_premium: b");
    set.require_in_domain(theta);
    return quad_form_inverse(set.gamma(theta), b);
}

namespace {

// Variance risk ratio gamma(rho)^-1 b for the correlation kind, componentwise.
Eigen::Vector2d correlation_ratio(double sigma1, double sigma2, const Eigen::VectorXd& b,
                                  double rho) {
    const double inv = 1.0 / (1.0 - rho * rho);
    Eigen::Vector2d k;
    k(0) = inv * (b(0) / (sigma1 * sigma1) - b(1) * rho / (sigma1 * sigma2));
    k(1) = inv * (b(1) / (sigma2 * sigma2) - b(0) * rho / (sigma1 * sigma2));
    return k;
}

}  // namespace

CorrelationCaseReport classify_correlation(const AmbiguitySet& set, const Eigen::VectorXd& b) {
    if (set.kind() != AmbiguityKind::AmbiguousCorrelation)
        throw InvalidParameter("classify_correlation: wrong ambiguity kind");
    require_vector_length(b, 2, "classify_correlation: b");

    CorrelationCaseReport r;
    r.beta1 = b(0) / set.sigma1();
    r.beta2 = b(1) / set.sigma2();
    const double a1 = std::abs(r.beta1), a2 = std::abs(r.beta2);
    const double hi = std::max(a1, a2);
    r.rho0_plus = (hi == 0.0) ? 0.0 : std::min(a1, a2) / hi;
    r.rho0_minus = -r.rho0_plus;

    const double rho_lo = set.box_lo()(0), rho_hi = set.box_hi()(0);
    // beta1*beta2 > 0 pivots on rho0_plus; beta1*beta2 <= 0 (including a zero
    // beta, where rho0 = 0) pivots on rho0_minus.
    const bool branch_one = r.beta1 * r.beta2 > 0.0;
    const double pivot = branch_one ? r.rho0_plus : r.rho0_minus;
    if (pivot > rho_hi) {
        r.case_id = branch_one ? CorrelationCase::I1 : CorrelationCase::II1;
        r.theta_star = rho_hi;
    } else if (pivot < rho_lo) {
        r.case_id = branch_one ? CorrelationCase::I2 : CorrelationCase::II2;
        r.theta_star = rho_lo;
    } else {
        r.case_id = branch_one ? CorrelationCase::I3 : CorrelationCase::II3;
        r.theta_star = pivot;
    }
    r.kappa_bar = correlation_ratio(set.sigma1(), set.sigma2(), b, rho_hi);
    r.kappa_under = correlation_ratio(set.sigma1(), set.sigma2(), b, rho_lo);
    return r;
}

WorstCase worst_case(const AmbiguitySet& set, const Eigen::VectorXd& b) {
    require_vector_length(b, set.d(), "worst_case: b");
    WorstCase w;
    w.degenerate = (b.lpNorm<Eigen::Infinity>() == 0.0);

    switch (set.kind()) {
        case AmbiguityKind::UncertainVolatility: {
            // R is coordinatewise decreasing in each variance: upper corner wins.
            w.theta_star = set.box_hi();
            w.variance_risk_ratio = b.array() / set.box_hi().array();
            break;
        }
        case AmbiguityKind::AmbiguousCorrelation: {
            const CorrelationCaseReport rep = classify_correlation(set, b);
            w.theta_star = Eigen::VectorXd::Constant(1, rep.theta_star);
            if (rep.case_id == CorrelationCase::I3 || rep.case_id == CorrelationCase::II3) {
                // Interior minimizer: the less attractive asset drops out exactly.
                const double a1 = std::abs(rep.beta1), a2 = std::abs(rep.beta2);
                if (a1 == a2 && !w.degenerate)
                    throw std::logic_error(
                        "interior correlation case with |beta1| == |beta2| cannot occur: "
                        "rho0 = 1 lies outside any admissible bound");
                Eigen::Vector2d k = Eigen::Vector2d::Zero();
                if (a1 > a2)
                    k(0) = b(0) / (set.sigma1() * set.sigma1());
                else if (a2 > a1)
                    k(1) = b(1) / (set.sigma2() * set.sigma2());
                w.variance_risk_ratio = k;
            } else {
                w.variance_risk_ratio =
                    correlation_ratio(set.sigma1(), set.sigma2(), b, rep.theta_star);
            }
            break;
        }
        case AmbiguityKind::Custom: {
            if (w.degenerate) {
                w.theta_star = 0.5 * (set.box_lo() + set.box_hi());
            } else {
                w.theta_star = grid_refine_min(
                    [&](const Eigen::VectorXd& theta) {
                        return quad_form_inverse(set.gamma(theta), b);
                    },
                    set.box_lo(), set.box_hi(), 1e-10, 200);
            }
            w.variance_risk_ratio = cholesky_solve(set.gamma(w.theta_star), b);
            break;
        }
    }

    w.sigma_star = set.gamma(w.theta_star);
    if (w.degenerate) w.variance_risk_ratio = Eigen::VectorXd::Zero(set.d());
    w.risk_premium = b.dot(w.variance_risk_ratio);
    return w;
}

}  // namespace rmv
