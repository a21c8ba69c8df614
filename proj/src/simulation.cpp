#include "rmv/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "rmv/errors.hpp"
#include "rmv/linalg.hpp"
#include "rmv/rng.hpp"

namespace rmv {

namespace {

// Splits [0, n) into contiguous chunks, one worker thread per chunk. Outputs
// live in disjoint slots, so the result is independent of scheduling. The
// lowest-index exception wins, keeping failures deterministic too.
template <typename Fn>
void parallel_paths(std::int64_t n, const Fn& body) {
    unsigned hw = std::thread::hardware_concurrency();
    unsigned n_threads = std::clamp<unsigned>(hw, 1u, 8u);
    if (n < 4096 || n_threads == 1) {
        for (std::int64_t p = 0; p < n; ++p) body(p);
        return;
    }
    std::vector<std::exception_ptr> errors(n_threads);
    std::vector<std::int64_t> error_index(n_threads, -1);
    std::vector<std::thread> workers;
    const std::int64_t chunk = (n + n_threads - 1) / n_threads;
    for (unsigned t = 0; t < n_threads; ++t) {
        const std::int64_t lo = t * chunk;
        const std::int64_t hi = std::min<std::int64_t>(n, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([&, t, lo, hi] {
            try {
                for (std::int64_t p = lo; p < hi; ++p) body(p);
            } catch (...) {
                errors[t] = std::current_exception();
                error_index[t] = lo;
            }
        });
    }
    for (auto& w : workers) w.join();
    std::exception_ptr first;
    std::int64_t first_index = -1;
    for (unsigned t = 0; t < errors.size(); ++t) {
        if (errors[t] && (first_index < 0 || error_index[t] < first_index)) {
            first = errors[t];
            first_index = error_index[t];
        }
    }
    if (first) std::rethrow_exception(first);
}

void check_grid(double T, int n_steps, std::int64_t n_paths) {
    if (!(T > 0.0)) throw InvalidParameter("horizon T must be positive");
    if (n_steps < 1) throw InvalidParameter("n_steps must be at least 1");
    if (n_paths < 1) throw InvalidParameter("n_paths must be at least 1");
}

PathEnsemble make_ensemble(int n_assets, int n_steps, std::int64_t n_paths, double T,
                           bool with_state) {
    PathEnsemble e;
    e.n_assets = n_assets;
    e.n_steps = n_steps;
    e.n_paths = n_paths;
    e.T = T;
    e.dt = T / n_steps;
    e.increments.resize(static_cast<std::size_t>(n_paths) * n_steps * n_assets);
    if (with_state) e.state.resize(static_cast<std::size_t>(n_paths) * (n_steps + 1));
    return e;
}

}  // namespace

void validate(const HestonBoundedModel& m) {
    if (!(m.sigma_lo > 0.0)) throw InvalidParameter("sigma_lo must be positive");
    if (!(m.sigma_lo <= m.sigma_hi)) throw InvalidParameter("volatility bounds out of order");
    if (!(m.sigma0 >= m.sigma_lo && m.sigma0 <= m.sigma_hi))
        throw InvalidParameter("sigma0 must lie in [sigma_lo, sigma_hi]");
    if (!(m.sigma_inf >= m.sigma_lo && m.sigma_inf <= m.sigma_hi))
        throw InvalidParameter("sigma_inf must lie in [sigma_lo, sigma_hi]");
    if (!(m.kappa >= 0.0)) throw InvalidParameter("kappa must be nonnegative");
    if (!(m.eta >= 0.0)) throw InvalidParameter("eta must be nonnegative");
    if (!(m.rho >= -1.0 && m.rho <= 1.0)) throw InvalidParameter("rho must lie in [-1, 1]");
}

void validate(const StochCorrModel& m) {
    if (!(m.sigma1 > 0.0 && m.sigma2 > 0.0))
        throw InvalidParameter("marginal volatilities must be positive");
    if (!(m.rho_hi > 0.0 && m.rho_hi < 1.0)) throw InvalidParameter("rho_hi must lie in (0, 1)");
    if (!(m.rho0 >= 0.0 && m.rho0 <= m.rho_hi))
        throw InvalidParameter("rho0 must lie in [0, rho_hi]");
    if (!(m.rho_inf >= 0.0 && m.rho_inf <= m.rho_hi))
        throw InvalidParameter("rho_inf must lie in [0, rho_hi]");
    if (!(m.kappa >= 0.0)) throw InvalidParameter("kappa must be nonnegative");
    if (!(m.eta >= 0.0)) throw InvalidParameter("eta must be nonnegative");
}

void validate(const ConstantModel& m) {
    if (m.b.size() == 0) throw InvalidParameter("constant model needs at least one asset");
    if (m.sigma.rows() != m.b.size() || m.sigma.cols() != m.b.size())
        throw DimensionMismatch("covariance shape does not match drift dimension");
    cholesky_lower(m.sigma);  // throws NotPositiveDefinite when unusable
}

HestonStep heston_euler_step(const HestonBoundedModel& m, double var, double dt, double z1,
                             double z2) {
    const double var_lo = m.sigma_lo * m.sigma_lo;
    const double var_hi = m.sigma_hi * m.sigma_hi;
    const double sdt = std::sqrt(dt);
    HestonStep out;
    out.increment = m.b * dt + std::sqrt(var) * sdt * z1;
    const double arg = std::max(0.0, (var - var_lo) * (var_hi - var));
    const double shock = m.rho * z1 + std::sqrt(std::max(0.0, 1.0 - m.rho * m.rho)) * z2;
    double next = var + m.kappa * (m.sigma_inf * m.sigma_inf - var) * dt +
                  m.eta * std::sqrt(arg) * sdt * shock;
    out.var_next = std::clamp(next, var_lo, var_hi);
    return out;
}

StochCorrStep stochcorr_euler_step(const StochCorrModel& m, double rho, double dt, double z1,
                                   double z2, double zt) {
    const double sdt = std::sqrt(dt);
    StochCorrStep out;
    const double root = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    out.dr1 = m.b(0) * dt + m.sigma1 * (root * z1 + rho * z2) * sdt;
    out.dr2 = m.b(1) * dt + m.sigma2 * z2 * sdt;
    const double arg = std::max(0.0, rho * (m.rho_hi - rho));
    double next = rho + m.kappa * (m.rho_inf - rho) * dt + m.eta * std::sqrt(arg) * sdt * zt;
    out.rho_next = std::clamp(next, 0.0, m.rho_hi);
    return out;
}

PathEnsemble simulate_heston_paths(const HestonBoundedModel& m, double T, int n_steps,
                                   std::int64_t n_paths, std::uint64_t seed,
                                   std::int64_t first_path) {
    validate(m);
    check_grid(T, n_steps, n_paths);
    PathEnsemble e = make_ensemble(1, n_steps, n_paths, T, true);
    const double dt = e.dt;
    parallel_paths(n_paths, [&](std::int64_t p) {
        PathRng rng(seed, static_cast<std::uint64_t>(first_path + p));
        double var = m.sigma0 * m.sigma0;
        double* inc = &e.increments[static_cast<std::size_t>(p) * n_steps];
        double* st = &e.state[static_cast<std::size_t>(p) * (n_steps + 1)];
        for (int k = 0; k < n_steps; ++k) {
            st[k] = var;
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            const HestonStep s = heston_euler_step(m, var, dt, z1, z2);
            inc[k] = s.increment;
            var = s.var_next;
        }
        st[n_steps] = var;
    });
    return e;
}

PathEnsemble simulate_stochcorr_paths(const StochCorrModel& m, double T, int n_steps,
                                      std::int64_t n_paths, std::uint64_t seed,
                                      std::int64_t first_path) {
    validate(m);
    check_grid(T, n_steps, n_paths);
    PathEnsemble e = make_ensemble(2, n_steps, n_paths, T, true);
    const double dt = e.dt;
    parallel_paths(n_paths, [&](std::int64_t p) {
        PathRng rng(seed, static_cast<std::uint64_t>(first_path + p));
        double rho = m.rho0;
        double* inc = &e.increments[static_cast<std::size_t>(p) * n_steps * 2];
        double* st = &e.state[static_cast<std::size_t>(p) * (n_steps + 1)];
        for (int k = 0; k < n_steps; ++k) {
            st[k] = rho;
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            const double zt = rng.normal();
            const StochCorrStep s = stochcorr_euler_step(m, rho, dt, z1, z2, zt);
            inc[2 * k] = s.dr1;
            inc[2 * k + 1] = s.dr2;
            rho = s.rho_next;
        }
        st[n_steps] = rho;
    });
    return e;
}

PathEnsemble simulate_constant_paths(const ConstantModel& m, double T, int n_steps,
                                     std::int64_t n_paths, std::uint64_t seed,
                                     std::int64_t first_path) {
    validate(m);
    check_grid(T, n_steps, n_paths);
    const int d = static_cast<int>(m.b.size());
    const Eigen::MatrixXd L = cholesky_lower(m.sigma);
    PathEnsemble e = make_ensemble(d, n_steps, n_paths, T, false);
    const double dt = e.dt;
    const double sdt = std::sqrt(dt);
    parallel_paths(n_paths, [&](std::int64_t p) {
        PathRng rng(seed, static_cast<std::uint64_t>(first_path + p));
        double* inc = &e.increments[static_cast<std::size_t>(p) * n_steps * d];
        Eigen::VectorXd z(d);
        for (int k = 0; k < n_steps; ++k) {
            for (int a = 0; a < d; ++a) z(a) = rng.normal();
            Eigen::Map<Eigen::VectorXd> out(inc + static_cast<std::size_t>(k) * d, d);
            out = m.b * dt + (L * z) * sdt;
        }
    });
    return e;
}

namespace {

FeedbackStrategy affine_feedback(Eigen::VectorXd ratio, double level, std::string label,
                                 double analytic_excess) {
    FeedbackStrategy f;
    f.d = static_cast<int>(ratio.size());
    f.label = std::move(label);
    f.analytic_excess = analytic_excess;
    f.ratio = std::move(ratio);
    f.level = level;
    f.map = [r = f.ratio, level](double, double x, double* out) {
        const double scale = level - x;
        for (int i = 0; i < r.size(); ++i) out[i] = scale * r(i);
    };
    return f;
}

}  // namespace

FeedbackStrategy robust_feedback(const RobustStrategy& s) {
    const double level = s.x0 + std::exp(s.worst.risk_premium * s.T) / (2.0 * s.lambda);
    const double excess = std::expm1(s.worst.risk_premium * s.T) / (2.0 * s.lambda);
    return affine_feedback(s.worst.variance_risk_ratio, level, "robust", excess);
}

FeedbackStrategy misspecified_volatility_strategy(double b, double sigma_tilde, double lambda,
                                                  double x0, double T) {
    if (!(sigma_tilde > 0.0)) throw InvalidParameter("misspecified volatility must be positive");
    Eigen::VectorXd sig(1), bv(1);
    sig(0) = sigma_tilde;
    bv(0) = b;
    const AmbiguitySet point = AmbiguitySet::uncertain_volatility(sig, sig);
    const RobustStrategy s = make_robust_strategy(lambda, x0, T, bv, worst_case(point, bv));
    FeedbackStrategy f = robust_feedback(s);
    f.label = "misspecified sigma0=" + std::to_string(sigma_tilde);
    return f;
}

FeedbackStrategy misspecified_correlation_strategy(const Eigen::Vector2d& b, double sigma1,
                                                   double sigma2, double rho_tilde, double lambda,
                                                   double x0, double T) {
    if (!(rho_tilde > -1.0 && rho_tilde < 1.0))
        throw InvalidParameter("misspecified correlation must lie in (-1, 1)");
    const AmbiguitySet point =
        AmbiguitySet::ambiguous_correlation(sigma1, sigma2, rho_tilde, rho_tilde);
    const RobustStrategy s = make_robust_strategy(lambda, x0, T, b, worst_case(point, b));
    FeedbackStrategy f = robust_feedback(s);
    f.label = "misspecified rho0=" + std::to_string(rho_tilde);
    return f;
}

std::vector<double> replay_wealth(const PathEnsemble& paths, const FeedbackStrategy& strategy,
                                  double x0) {
    if (strategy.d != paths.n_assets)
        throw DimensionMismatch("strategy dimension does not match path dimension");
    const int n_steps = paths.n_steps;
    const int d = paths.n_assets;
    std::vector<double> terminal(static_cast<std::size_t>(paths.n_paths));
    parallel_paths(paths.n_paths, [&](std::int64_t p) {
        const double* inc = &paths.increments[static_cast<std::size_t>(p) * n_steps * d];
        double x = x0;
        std::vector<double> a(static_cast<std::size_t>(d));
        for (int k = 0; k < n_steps; ++k) {
            strategy.map(k * paths.dt, x, a.data());
            double gain = 0.0;
            for (int i = 0; i < d; ++i) gain += a[i] * inc[static_cast<std::size_t>(k) * d + i];
            x += gain;
            if (!std::isfinite(x))
                throw NonFiniteWealth("wealth became non-finite on path " + std::to_string(p) +
                                      " at step " + std::to_string(k));
        }
        terminal[static_cast<std::size_t>(p)] = x;
    });
    return terminal;
}

namespace {

struct Moments {
    double mean;
    double m2;  // central, divisor N
    double m3;
    double m4;
};

Moments central_moments(const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    return {mean, m2 / n, m3 / n, m4 / n};
}

}  // namespace

SharpeEstimate estimate_sharpe(const std::vector<double>& samples, double x0) {
    const std::int64_t n = static_cast<std::int64_t>(samples.size());
    if (n < 2) throw TooFewSamples("sharpe estimation needs at least 2 samples");
    const Moments mo = central_moments(samples);
    const double var_unbiased = mo.m2 * static_cast<double>(n) / static_cast<double>(n - 1);
    if (!(var_unbiased > 0.0)) throw ZeroVariance("terminal wealth samples are all equal");
    SharpeEstimate est;
    est.n_paths = n;
    est.mean_excess = mo.mean - x0;
    est.std = std::sqrt(var_unbiased);
    est.sharpe = est.mean_excess / est.std;
    // Delta method on (mean, variance); biased moments suffice at MC sample
    // sizes. Guarded below zero against roundoff in extreme samples.
    const double v = mo.m2;
    const double s = est.sharpe;
    double var_s =
        (1.0 + s * s * (mo.m4 / (v * v) - 1.0) / 4.0 - s * mo.m3 / std::pow(v, 1.5)) /
        static_cast<double>(n);
    var_s = std::max(0.0, var_s);
    const double half = 1.959963984540054 * std::sqrt(var_s);
    est.ci_lo = s - half;
    est.ci_hi = s + half;
    return est;
}

SharpeEstimate bootstrap_sharpe(const std::vector<double>& samples, double x0, int n_resamples,
                                std::uint64_t seed) {
    const std::size_t n = samples.size();
    if (n < 2) throw TooFewSamples("sharpe estimation needs at least 2 samples");
    if (n_resamples < 2) throw InvalidParameter("need at least 2 bootstrap resamples");
    SharpeEstimate est = estimate_sharpe(samples, x0);
    std::vector<double> stats(static_cast<std::size_t>(n_resamples));
    parallel_paths(n_resamples, [&](std::int64_t r) {
        PathRng rng(seed, static_cast<std::uint64_t>(r));
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j =
                std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
            const double v = samples[j];
            sum += v;
            sum2 += v * v;
        }
        const double mean = sum / static_cast<double>(n);
        const double var = (sum2 - sum * mean) / static_cast<double>(n - 1);
        stats[static_cast<std::size_t>(r)] =
            var > 0.0 ? (mean - x0) / std::sqrt(var) : 0.0;
    });
    std::sort(stats.begin(), stats.end());
    const auto pick = [&](double q) {
        const double pos = q * static_cast<double>(n_resamples - 1);
        const std::size_t i = static_cast<std::size_t>(pos);
        const double w = pos - static_cast<double>(i);
        return i + 1 < stats.size() ? (1.0 - w) * stats[i] + w * stats[i + 1] : stats[i];
    };
    est.ci_lo = pick(0.025);
    est.ci_hi = pick(0.975);
    return est;
}

}  // namespace rmv
