#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "rmv/ambiguity.hpp"
#include "rmv/errors.hpp"
#include "rmv/frontier.hpp"
#include "rmv/optimize.hpp"
#include "rmv/strategy.hpp"

using Eigen::VectorXd;

namespace {

// Single-asset reference market, volatility band [0.15, 0.45]: R* = (0.2/0.45)^2.
rmv::FrontierContext vol_frontier(double x0 = 0.0, double T = 1.0) {
    const auto set = rmv::AmbiguitySet::uncertain_volatility(VectorXd::Constant(1, 0.15),
                                                             VectorXd::Constant(1, 0.45));
    const VectorXd b = VectorXd::Constant(1, 0.2);
    return rmv::make_frontier_context(x0, T, rmv::worst_case(set, b).risk_premium);
}

// Two-asset reference market, correlation band [0, 0.95]: R* = 2.25.
rmv::FrontierContext corr_frontier(double x0 = 0.0, double T = 1.0) {
    const auto set = rmv::AmbiguitySet::ambiguous_correlation(1.0, 1.0, 0.0, 0.95);
    const Eigen::Vector2d b(1.5, 0.5);
    return rmv::make_frontier_context(x0, T, rmv::worst_case(set, b).risk_premium);
}

}  // namespace

TEST_CASE("frontier context validation and Sharpe floor") {
    CHECK_THROWS_AS(rmv::make_frontier_context(0.0, 0.0, 1.0), rmv::InvalidParameter);
    CHECK_THROWS_AS(rmv::make_frontier_context(0.0, -1.0, 1.0), rmv::InvalidParameter);
    CHECK_THROWS_AS(rmv::make_frontier_context(0.0, 1.0, -0.1), rmv::InvalidParameter);

    CHECK(rmv::sharpe_lower_bound(vol_frontier()) == doctest::Approx(0.4673).epsilon(2e-4));
    CHECK(rmv::sharpe_lower_bound(corr_frontier()) == doctest::Approx(2.9134).epsilon(1e-4));
    CHECK(rmv::sharpe_lower_bound(rmv::make_frontier_context(3.0, 2.0, 0.0)) == 0.0);
    // horizon scaling: S(2T)^2 + 1 = (S(T)^2 + 1)^2
    const double s1 = rmv::sharpe_lower_bound(corr_frontier(0.0, 1.0));
    const double s2 = rmv::sharpe_lower_bound(corr_frontier(0.0, 2.0));
    CHECK(s2 * s2 + 1.0 == doctest::Approx((s1 * s1 + 1.0) * (s1 * s1 + 1.0)).epsilon(1e-12));
}

TEST_CASE("frontier is a square-root curve through x0") {
    const auto c = corr_frontier(1.0);
    const double slope = rmv::sharpe_lower_bound(c);
    CHECK(rmv::frontier_return(c, 1.0) == doctest::Approx(1.0 + slope).epsilon(1e-14));
    CHECK(rmv::frontier_return(c, 4.0) == doctest::Approx(1.0 + 2.0 * slope).epsilon(1e-14));
    CHECK(rmv::frontier_return(c, 9.0) == doctest::Approx(1.0 + 3.0 * slope).epsilon(1e-14));

    // midpoint concavity in the variance budget
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> unif(0.05, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double u = unif(gen), v = unif(gen);
        const double mid = rmv::frontier_return(c, 0.5 * (u + v));
        const double chord = 0.5 * (rmv::frontier_return(c, u) + rmv::frontier_return(c, v));
        CHECK(mid >= chord - 1e-12);
    }

    CHECK_THROWS_AS(rmv::frontier_return(c, 0.0), rmv::NonpositiveVariance);
    CHECK_THROWS_AS(rmv::frontier_return(c, -2.0), rmv::NonpositiveVariance);
}

TEST_CASE("frontier and its inverse are mutually inverse") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double x0 = -2.0 + 4.0 * unif(gen);
        const double T = 0.25 + 2.0 * unif(gen);
        const double R = 0.05 + 3.0 * unif(gen);
        const auto c = rmv::make_frontier_context(x0, T, R);
        const double vartheta = 0.01 + 9.0 * unif(gen);
        const double m = rmv::frontier_return(c, vartheta);
        CHECK(rmv::inverse_frontier(c, m) == doctest::Approx(vartheta).epsilon(1e-12));
        const double target = x0 + 0.1 + 3.0 * unif(gen);
        CHECK(rmv::frontier_return(c, rmv::inverse_frontier(c, target)) ==
              doctest::Approx(target).epsilon(1e-12));
    }

    const auto c = corr_frontier(1.0);
    CHECK_THROWS_AS(rmv::inverse_frontier(c, 1.0), rmv::TargetBelowInitial);
    CHECK_THROWS_AS(rmv::inverse_frontier(c, 0.5), rmv::TargetBelowInitial);
    const auto flat = rmv::make_frontier_context(1.0, 1.0, 0.0);
    CHECK_THROWS_AS(rmv::inverse_frontier(flat, 2.0), rmv::ZeroRiskPremium);
}

TEST_CASE("lambda_of_vartheta hits the variance budget exactly") {
    const auto set = rmv::AmbiguitySet::ambiguous_correlation(1.0, 1.0, 0.0, 0.95);
    const Eigen::Vector2d b(1.5, 0.5);
    const auto w = rmv::worst_case(set, b);
    const auto c = rmv::make_frontier_context(0.0, 1.0, w.risk_premium);

    const double gap = std::expm1(2.25);
    CHECK(rmv::lambda_of_vartheta(c, gap / 4.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rmv::lambda_of_vartheta(c, 1.0) == doctest::Approx(std::sqrt(gap) / 2.0));

    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> unif(0.02, 8.0);
    for (int i = 0; i < 50; ++i) {
        const double vartheta = unif(gen);
        const double lam = rmv::lambda_of_vartheta(c, vartheta);
        const auto s = rmv::make_robust_strategy(lam, c.x0, c.T, b, w);
        CHECK(rmv::robust_wealth_variance(s, c.T) == doctest::Approx(vartheta).epsilon(1e-12));
        CHECK(rmv::expected_terminal_wealth(s) ==
              doctest::Approx(rmv::frontier_return(c, vartheta)).epsilon(1e-12));
    }

    CHECK_THROWS_AS(rmv::lambda_of_vartheta(c, 0.0), rmv::NonpositiveVariance);
}

TEST_CASE("constrained and penalized problems are Fenchel duals") {
    const auto set = rmv::AmbiguitySet::uncertain_volatility(VectorXd::Constant(1, 0.15),
                                                             VectorXd::Constant(1, 0.45));
    const VectorXd b = VectorXd::Constant(1, 0.2);
    const auto w = rmv::worst_case(set, b);

    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double x0 = -1.0 + 2.0 * unif(gen);
        const double T = 0.25 + 2.0 * unif(gen);
        const auto c = rmv::make_frontier_context(x0, T, w.risk_premium);
        const double vartheta = 0.02 + 6.0 * unif(gen);
        const double lam = rmv::lambda_of_vartheta(c, vartheta);
        const auto s = rmv::make_robust_strategy(lam, x0, T, b, w);
        // V0(lambda_vartheta) = lambda_vartheta * vartheta - U0(vartheta)
        CHECK(rmv::optimal_cost(s) ==
              doctest::Approx(lam * vartheta - rmv::frontier_return(c, vartheta))
                  .epsilon(1e-12));
    }

    // numeric Fenchel transform: minimizing lambda*v - U0(v) over v recovers
    // the budget paired with lambda and the penalized optimal cost
    const auto c = rmv::make_frontier_context(0.3, 1.0, w.risk_premium);
    for (double lam : {0.4, 1.0, 5.0}) {
        const double objective_min = [&] {
            const double v = rmv::golden_section_min(
                [&](double u) { return lam * u - rmv::frontier_return(c, u); }, 1e-6, 50.0,
                1e-12);
            const double v_expected = std::expm1(c.R_star * c.T) / (4.0 * lam * lam);
            CHECK(v == doctest::Approx(v_expected).epsilon(1e-5));
            return lam * v - rmv::frontier_return(c, v);
        }();
        const auto s = rmv::make_robust_strategy(lam, c.x0, c.T, b, w);
        CHECK(objective_min == doctest::Approx(rmv::optimal_cost(s)).epsilon(1e-9));
    }
}
