#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "rmv/ambiguity.hpp"
#include "rmv/errors.hpp"
#include "rmv/linalg.hpp"
#include "rmv/optimize.hpp"
#include "support.hpp"

using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

VectorXd vec1(double x) { return VectorXd::Constant(1, x); }

VectorXd vec2(double x, double y) {
    VectorXd v(2);
    v << x, y;
    return v;
}

}  // namespace

TEST_CASE("cholesky factors and solves against a dense inverse") {
    MatrixXd a(3, 3);
    a << 4, 2, 1, 2, 5, 3, 1, 3, 6;
    const MatrixXd l = rmv::cholesky_lower(a);
    CHECK((l * l.transpose() - a).lpNorm<Eigen::Infinity>() < 1e-14);
    CHECK(l(0, 1) == 0.0);

    VectorXd rhs(3);
    rhs << 1, -2, 0.5;
    const VectorXd x = rmv::cholesky_solve(a, rhs);
    CHECK((a * x - rhs).lpNorm<Eigen::Infinity>() < 1e-13);
    CHECK(rmv::quad_form_inverse(a, rhs) == doctest::Approx(rhs.dot(a.inverse() * rhs)).epsilon(1e-12));
}

TEST_CASE("cholesky rejects non-positive-definite and non-square input") {
    MatrixXd indefinite(2, 2);
    indefinite << 1, 2, 2, 1;  // eigenvalues 3 and -1
    CHECK_THROWS_AS(rmv::cholesky_lower(indefinite), rmv::NotPositiveDefinite);

    MatrixXd nearly(2, 2);  // pivot 1e-13 of max diagonal, below the rejection floor
    nearly << 1.0, 0.0, 0.0, 1e-13;
    CHECK_THROWS_AS(rmv::cholesky_lower(nearly), rmv::NotPositiveDefinite);

    CHECK_THROWS_AS(rmv::cholesky_lower(MatrixXd::Ones(2, 3)), rmv::DimensionMismatch);
}

TEST_CASE("golden section and grid refinement land on known minima") {
    const double x = rmv::golden_section_min([](double t) { return (t - 0.7) * (t - 0.7); },
                                             -1.0, 2.0, 1e-12);
    CHECK(x == doctest::Approx(0.7).epsilon(1e-9));

    const VectorXd m = rmv::grid_refine_min(
        [](const VectorXd& t) {
            return (t(0) - 0.3) * (t(0) - 0.3) + 2.0 * (t(1) + 0.4) * (t(1) + 0.4) +
                   0.5 * t(0) * t(1);
        },
        vec2(-1, -1), vec2(1, 1), 1e-10, 200);
    // stationary point of the coupled quadratic: x = 64/155, y = -14/31
    CHECK(m(0) == doctest::Approx(64.0 / 155.0).epsilon(1e-6));
    CHECK(m(1) == doctest::Approx(-14.0 / 31.0).epsilon(1e-6));

    CHECK_THROWS_AS(rmv::grid_refine_min([](const VectorXd&) { return 0.0; }, VectorXd::Zero(4),
                                         VectorXd::Ones(4), 1e-8, 10),
                    rmv::InvalidParameter);
}

TEST_CASE("volatility-band factory validates bounds") {
    CHECK_THROWS_AS(rmv::AmbiguitySet::uncertain_volatility(vec1(0.0), vec1(0.2)),
                    rmv::InvalidParameter);
    CHECK_THROWS_AS(rmv::AmbiguitySet::uncertain_volatility(vec1(0.3), vec1(0.2)),
                    rmv::InvalidParameter);
    CHECK_THROWS_AS(rmv::AmbiguitySet::uncertain_volatility(vec2(0.1, 0.1), vec1(0.2)),
                    rmv::InvalidParameter);

    const auto set = rmv::AmbiguitySet::uncertain_volatility(vec1(0.15), vec1(0.45));
    CHECK(set.d() == 1);
    CHECK(set.theta_dim() == 1);
    CHECK(set.box_lo()(0) == doctest::Approx(0.0225));
    CHECK(set.box_hi()(0) == doctest::Approx(0.2025));
}

TEST_CASE("correlation factory validates bounds") {
    CHECK_THROWS_AS(rmv::AmbiguitySet::ambiguous_correlation(0.0, 1.0, 0.0, 0.5),
                    rmv::InvalidParameter);
    CHECK_THROWS_AS(rmv::AmbiguitySet::ambiguous_correlation(1.0, 1.0, 0.6, 0.5),
                    rmv::InvalidParameter);
    CHECK_THROWS_AS(rmv::AmbiguitySet::ambiguous_correlation(1.0, 1.0, -1.0, 0.5),
                    rmv::InvalidParameter);
    CHECK_THROWS_AS(rmv::AmbiguitySet::ambiguous_correlation(1.0, 1.0, 0.0, 1.0),
                    rmv::InvalidParameter);

    const auto set = rmv::AmbiguitySet::ambiguous_correlation(1.0, 2.0, -0.3, 0.9);
    CHECK(set.d() == 2);
    const MatrixXd g = set.gamma(vec1(0.5));
    CHECK(g(0, 0) == doctest::Approx(1.0));
    CHECK(g(1, 1) == doctest::Approx(4.0));
    CHECK(g(0, 1) == doctest::Approx(1.0));  // 0.5 * 1 * 2
    CHECK(g(1, 0) == g(0, 1));
}

TEST_CASE("theta domain membership and grid") {
    const auto set = rmv::AmbiguitySet::ambiguous_correlation(1.0, 1.0, 0.0, 0.95);
    CHECK(set.contains(vec1(0.0)));
    CHECK(set.contains(vec1(0.95)));
    CHECK_FALSE(set.contains(vec1(-0.01)));
    CHECK_FALSE(set.contains(vec2(0.1, 0.1)));
    CHECK_NOTHROW(set.require_in_domain(vec1(0.5)));
    CHECK_THROWS_AS(set.require_in_domain(vec1(0.96)), rmv::ThetaOutOfDomain);

    const auto grid = set.theta_grid(5);
    REQUIRE(grid.size() == 5);
    CHECK(grid.front()(0) == doctest::Approx(0.0));
    CHECK(grid.back()(0) == doctest::Approx(0.95));
    CHECK_THROWS_AS(set.theta_grid(1), rmv::InvalidParameter);

    const auto vol2 =
        rmv::AmbiguitySet::uncertain_volatility(vec2(0.1, 0.2), vec2(0.3, 0.4));
    CHECK(vol2.theta_grid(3).size() == 9);
}

TEST_CASE("risk premium evaluates b' gamma^-1 b") {
    const auto corr = rmv::AmbiguitySet::ambiguous_correlation(1.0, 1.0, 0.0, 0.95);
    const VectorXd b = vec2(1.5, 0.5);
    // (2.25 + 0.25 - 2*0.75/3) / (1 - 1/9) = 2.25
    CHECK(rmv::risk_premium(corr, b, vec1(1.0 / 3.0)) == doctest::Approx(2.25).epsilon(1e-13));
    CHECK(rmv::risk_premium(corr, VectorXd::Zero(2), vec1(0.4)) == doctest::Approx(0.0));
    CHECK_THROWS_AS(rmv::risk_premium(corr, b, vec1(0.96)), rmv::ThetaOutOfDomain);
    CHECK_THROWS_AS(rmv::risk_premium(corr, vec1(1.0), vec1(0.5)), rmv::DimensionMismatch);

    const auto vol = rmv::AmbiguitySet::uncertain_volatility(vec1(0.15), vec1(0.45));
    CHECK(rmv::risk_premium(vol, vec1(0.2), vec1(0.2025)) ==
          doctest::Approx(0.197531).epsilon(1e-5));

    // random correlation points against the explicit 2x2 inverse
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> unif(-0.9, 0.9);
    for (int i = 0; i < 50; ++i) {
        const double rho = unif(gen);
        const double s1 = 0.5 + std::abs(unif(gen)), s2 = 0.5 + std::abs(unif(gen));
        const double b1 = 2.0 * unif(gen), b2 = 2.0 * unif(gen);
        const auto set = rmv::AmbiguitySet::ambiguous_correlation(s1, s2, -0.95, 0.95);
        CHECK(rmv::risk_premium(set, vec2(b1, b2), vec1(rho)) ==
              doctest::Approx(oracle::corr_risk_premium(b1, b2, s1, s2, rho)).epsilon(1e-11));
    }
}

TEST_CASE("worst case for a volatility band is the upper corner") {
    const auto set = rmv::AmbiguitySet::uncertain_volatility(vec1(0.15), vec1(0.45));
    const auto w = rmv::worst_case(set, vec1(0.2));
    CHECK(w.theta_star(0) == doctest::Approx(0.2025));
    CHECK(w.sigma_star(0, 0) == doctest::Approx(0.2025));
    CHECK(w.risk_premium == doctest::Approx(0.19753).epsilon(1e-5));
    CHECK(w.variance_risk_ratio(0) == doctest::Approx(0.2 / 0.2025).epsilon(1e-14));
    CHECK_FALSE(w.degenerate);

    // premium at theta* is the minimum over the grid
    for (const auto& theta : set.theta_grid(17))
        CHECK(w.risk_premium <= rmv::risk_premium(set, vec1(0.2), theta) + 1e-12);

    // multi-asset monotonicity: upper corner beats every grid point
    const auto set3 = rmv::AmbiguitySet::uncertain_volatility(
        Eigen::Vector3d(0.1, 0.2, 0.15), Eigen::Vector3d(0.4, 0.3, 0.35));
    const VectorXd b3 = Eigen::Vector3d(0.1, -0.2, 0.05);
    const auto w3 = rmv::worst_case(set3, b3);
    CHECK(w3.theta_star.isApprox(set3.box_hi()));
    for (const auto& theta : set3.theta_grid(7))
        CHECK(w3.risk_premium <= rmv::risk_premium(set3, b3, theta) + 1e-12);
}

TEST_CASE("worst case for the reference correlation set") {
    const auto set = rmv::AmbiguitySet::ambiguous_correlation(1.0, 1.0, 0.0, 0.95);
    const VectorXd b = vec2(1.5, 0.5);
    const auto w = rmv::worst_case(set, b);
    CHECK(w.theta_star(0) == 1.0 / 3.0);  // exact: min|beta|/max|beta| = 0.5/1.5
    CHECK(w.risk_premium == 2.25);        // b . ratio with ratio = (1.5, 0)
    CHECK(w.variance_risk_ratio(0) == 1.5);
    CHECK(w.variance_risk_ratio(1) == 0.0);
    CHECK(w.sigma_star(0, 1) == doctest::Approx(1.0 / 3.0));

    const auto rep = rmv::classify_correlation(set, b);
    CHECK(rep.case_id == rmv::CorrelationCase::I3);
    CHECK(std::string(rmv::case_label(rep.case_id)) == "I.3");
    CHECK(rep.rho0_plus == doctest::Approx(1.0 / 3.0));
    CHECK(rep.kappa_under(0) * rep.kappa_under(1) >= 0.0);
    CHECK(rep.kappa_bar(0) * rep.kappa_bar(1) <= 0.0);
}

TEST_CASE("correlation case dispatch follows the pivot") {
    // equal betas: rho0+ = 1 exceeds any admissible upper bound
    const auto set1 = rmv::AmbiguitySet::ambiguous_correlation(1.0, 1.0, -0.4, 0.8);
    const auto rep1 = rmv::classify_correlation(set1, vec2(1.0, 1.0));
    CHECK(rep1.case_id == rmv::CorrelationCase::I1);
    CHECK(rep1.theta_star == 0.8);
    CHECK(rep1.kappa_bar(0) * rep1.kappa_bar(1) > 0.0);
    CHECK(rep1.kappa_under(0) * rep1.kappa_under(1) > 0.0);

    // opposite-sign betas: rho0- = -1 lies below any admissible lower bound
    const auto rep2 = rmv::classify_correlation(set1, vec2(1.0, -1.0));
    CHECK(rep2.case_id == rmv::CorrelationCase::II2);
    CHECK(std::string(rmv::case_label(rep2.case_id)) == "II.2'");
    CHECK(rep2.theta_star == -0.4);

    // lower bound above the pivot: left endpoint minimizes
    const auto set3 = rmv::AmbiguitySet::ambiguous_correlation(1.0, 1.0, 0.5, 0.9);
    const auto rep3 = rmv::classify_correlation(set3, vec2(1.5, 0.5));
    CHECK(rep3.case_id == rmv::CorrelationCase::I2);
    CHECK(rep3.theta_star == 0.5);
    CHECK(rep3.kappa_under(0) * rep3.kappa_under(1) < 0.0);
    CHECK(oracle::corr_grid_minimizer(1.5, 0.5, 1.0, 1.0, 0.5, 0.9) ==
          doctest::Approx(0.5).epsilon(1e-5));

    // negative product with the pivot inside the bounds
    const auto set4 = rmv::AmbiguitySet::ambiguous_correlation(1.0, 1.0, -0.5, 0.0);
    const auto rep4 = rmv::classify_correlation(set4, vec2(2.0, -0.5));
    CHECK(rep4.case_id == rmv::CorrelationCase::II3);
    CHECK(rep4.theta_star == doctest::Approx(-0.25));
    const auto w4 = rmv::worst_case(set4, vec2(2.0, -0.5));
    CHECK(w4.risk_premium == doctest::Approx(4.0));  // max(beta^2)
    CHECK(w4.variance_risk_ratio(1) == 0.0);

    // negative product, pivot above the upper bound
    const auto set5 = rmv::AmbiguitySet::ambiguous_correlation(1.0, 1.0, -0.9, -0.5);
    const auto rep5 = rmv::classify_correlation(set5, vec2(2.0, -0.5));
    CHECK(rep5.case_id == rmv::CorrelationCase::II1);
    CHECK(rep5.theta_star == -0.5);

    // one zero beta joins the second branch with pivot 0
    const auto rep6 = rmv::classify_correlation(set1, vec2(1.0, 0.0));
    CHECK(rep6.rho0_plus == 0.0);
    CHECK(rep6.case_id == rmv::CorrelationCase::II3);
    const auto w6 = rmv::worst_case(set1, vec2(1.0, 0.0));
    CHECK(w6.risk_premium == doctest::Approx(1.0));
}

TEST_CASE("closed-form correlation worst case matches grid search on random instances") {
    std::mt19937_64 gen(20240817);
    std::uniform_real_distribution<double> beta_d(-3.0, 3.0);
    std::uniform_real_distribution<double> rho_d(-0.95, 0.95);
    int interior_cases = 0;
    for (int i = 0; i < 200; ++i) {
        const double b1 = beta_d(gen), b2 = beta_d(gen);
        if (std::abs(b1) < 1e-3 && std::abs(b2) < 1e-3) continue;
        double lo = rho_d(gen), hi = rho_d(gen);
        if (lo > hi) std::swap(lo, hi);
        const auto set = rmv::AmbiguitySet::ambiguous_correlation(1.0, 1.0, lo, hi);
        const auto w = rmv::worst_case(set, vec2(b1, b2));
        const double rho_grid = oracle::corr_grid_minimizer(b1, b2, 1.0, 1.0, lo, hi);
        const double r_grid = oracle::corr_risk_premium(b1, b2, 1.0, 1.0, rho_grid);
        CHECK(w.risk_premium <= r_grid + 1e-8);
        CHECK(std::abs(w.risk_premium - r_grid) < 1e-6);

        const auto rep = rmv::classify_correlation(set, vec2(b1, b2));
        if (rep.case_id == rmv::CorrelationCase::I3 ||
            rep.case_id == rmv::CorrelationCase::II3)
            ++interior_cases;
    }
    CHECK(interior_cases > 0);  // the sampler must exercise the interior branch
}

TEST_CASE("custom sets reach the same worst case numerically") {
    // correlation formula wrapped as an opaque evaluator
    const double s1 = 1.0, s2 = 1.0;
    auto gamma = [=](const VectorXd& theta) {
        MatrixXd g(2, 2);
        g << s1 * s1, theta(0) * s1 * s2, theta(0) * s1 * s2, s2 * s2;
        return g;
    };
    const auto custom =
        rmv::AmbiguitySet::custom(2, gamma, vec1(0.0), vec1(0.95), true);
    const auto closed = rmv::AmbiguitySet::ambiguous_correlation(s1, s2, 0.0, 0.95);
    const VectorXd b = vec2(1.5, 0.5);
    const auto wc = rmv::worst_case(custom, b);
    const auto wx = rmv::worst_case(closed, b);
    CHECK(std::abs(wc.risk_premium - wx.risk_premium) < 1e-8);
    CHECK(std::abs(wc.theta_star(0) - wx.theta_star(0)) < 1e-5);

    // diagonal evaluator in two parameters: upper corner analytically
    auto diag = [](const VectorXd& theta) {
        return MatrixXd(Eigen::Vector2d(theta(0), theta(1)).asDiagonal());
    };
    const auto box = rmv::AmbiguitySet::custom(2, diag, vec2(0.04, 0.09), vec2(0.25, 0.36), true);
    const auto wb = rmv::worst_case(box, vec2(0.1, 0.2));
    CHECK(wb.theta_star(0) == doctest::Approx(0.25).epsilon(1e-7));
    CHECK(wb.theta_star(1) == doctest::Approx(0.36).epsilon(1e-7));
    CHECK(wb.risk_premium ==
          doctest::Approx(0.1 * 0.1 / 0.25 + 0.2 * 0.2 / 0.36).epsilon(1e-9));
}

TEST_CASE("custom construction rejects unusable gamma") {
    auto bad = [](const VectorXd&) { return MatrixXd::Zero(2, 2); };
    CHECK_THROWS_AS(rmv::AmbiguitySet::custom(2, bad, vec1(0.0), vec1(1.0), true),
                    rmv::NotPositiveDefinite);

    auto wrong_size = [](const VectorXd&) { return MatrixXd::Identity(3, 3); };
    CHECK_THROWS_AS(rmv::AmbiguitySet::custom(2, wrong_size, vec1(0.0), vec1(1.0), true),
                    rmv::DimensionMismatch);

    // convex (not concave) parametrization: construction still succeeds, the
    // spot check only warns
    auto convex = [](const VectorXd& theta) {
        return MatrixXd(MatrixXd::Identity(1, 1) * (0.1 + theta(0) * theta(0)));
    };
    CHECK_NOTHROW(rmv::AmbiguitySet::custom(1, convex, vec1(-1.0), vec1(1.0), false));
}

TEST_CASE("zero drift is flagged degenerate with zero premium") {
    const auto vol = rmv::AmbiguitySet::uncertain_volatility(vec1(0.15), vec1(0.45));
    const auto wv = rmv::worst_case(vol, vec1(0.0));
    CHECK(wv.degenerate);
    CHECK(wv.risk_premium == 0.0);
    CHECK(wv.variance_risk_ratio(0) == 0.0);

    const auto corr = rmv::AmbiguitySet::ambiguous_correlation(1.0, 1.0, 0.0, 0.95);
    const auto wcorr = rmv::worst_case(corr, VectorXd::Zero(2));
    CHECK(wcorr.degenerate);
    CHECK(wcorr.risk_premium == 0.0);

    auto gamma = [](const VectorXd& theta) {
        return MatrixXd(MatrixXd::Identity(2, 2) * (1.0 + theta(0)));
    };
    const auto cust = rmv::AmbiguitySet::custom(2, gamma, vec1(0.0), vec1(1.0), true);
    const auto wcust = rmv::worst_case(cust, VectorXd::Zero(2));
    CHECK(wcust.degenerate);
    CHECK(wcust.risk_premium == 0.0);
    CHECK(cust.contains(wcust.theta_star));
}
