#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "rmv/errors.hpp"

namespace rmv {

enum class AmbiguityKind { UncertainVolatility, AmbiguousCorrelation, Custom };

// Parametrized prior set of covariance matrices: the map gamma(theta) over a
// box/interval of parameters. The two named kinds carry closed-form worst
// cases; Custom falls back to the numeric minimizer.
class AmbiguitySet {
  public:
    // Per-asset volatility bands [sigma_lo_i, sigma_hi_i]; theta = vector of variances.
    static AmbiguitySet uncertain_volatility(const Eigen::VectorXd& sigma_lo,
                                             const Eigen::VectorXd& sigma_hi);
    // Two assets with fixed marginal vols and correlation in [rho_lo, rho_hi]; theta = (rho).
    static AmbiguitySet ambiguous_correlation(double sigma1, double sigma2, double rho_lo,
                                              double rho_hi);
    // Caller-supplied gamma over a box in R^q (q <= 3), declared concave by the caller.
    static AmbiguitySet custom(int d, std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> gamma,
                               const Eigen::VectorXd& box_lo, const Eigen::VectorXd& box_hi,
                               bool declared_concave);

    AmbiguityKind kind() const { return kind_; }
    int d() const { return d_; }
    int theta_dim() const { return static_cast<int>(box_lo_.size()); }
    const Eigen::VectorXd& box_lo() const { return box_lo_; }
    const Eigen::VectorXd& box_hi() const { return box_hi_; }
    bool declared_concave() const { return declared_concave_; }

    // Marginal vols of the correlation kind.
    double sigma1() const { return sigma1_; }
    double sigma2() const { return sigma2_; }

    // Covariance at theta; formula evaluation only, no domain check.
    Eigen::MatrixXd gamma(const Eigen::VectorXd& theta) const;
    bool contains(const Eigen::VectorXd& theta) const;
    void require_in_domain(const Eigen::VectorXd& theta) const;  // ThetaOutOfDomain

    // Uniform grid over the parameter box, n points per dimension (n >= 2).
    std::vector<Eigen::VectorXd> theta_grid(int points_per_dim) const;

  private:
    AmbiguitySet() = default;
    void check_positive_definite_samples() const;
    void concavity_spot_check() const;  // warning only, never throws

    AmbiguityKind kind_ = AmbiguityKind::Custom;
    int d_ = 0;
    double sigma1_ = 0.0, sigma2_ = 0.0;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> gamma_fn_;
    Eigen::VectorXd box_lo_, box_hi_;  // theta domain (variances / correlation / custom box)
    bool declared_concave_ = true;
};

struct WorstCase {
    Eigen::VectorXd theta_star;
    Eigen::MatrixXd sigma_star;
    double risk_premium = 0.0;             // R* = b'(Sigma*)^-1 b
    Eigen::VectorXd variance_risk_ratio;   // (Sigma*)^-1 b
    bool degenerate = false;               // b = 0
};

enum class CorrelationCase { I1, I2, I3, II1, II2, II3 };
const char* case_label(CorrelationCase c);  // "I.1" ... "II.3'"

struct CorrelationCaseReport {
    double beta1 = 0.0, beta2 = 0.0;     // b_i / sigma_i
    double rho0_plus = 0.0;              // min|beta| / max|beta|
    double rho0_minus = 0.0;
    CorrelationCase case_id = CorrelationCase::I1;
    double theta_star = 0.0;             // minimizing correlation
    Eigen::Vector2d kappa_bar;           // variance risk ratio at rho_hi
    Eigen::Vector2d kappa_under;         // variance risk ratio at rho_lo
};

// R(theta) = b' gamma(theta)^-1 b via Cholesky.
double risk_premium(const AmbiguitySet& set, const Eigen::VectorXd& b,
                    const Eigen::VectorXd& theta);

// Worst-case covariance: minimizes R over Theta. Closed form for the named
// kinds, grid + golden-section refinement for Custom.
WorstCase worst_case(const AmbiguitySet& set, const Eigen::VectorXd& b);

// Six-way case analysis for the correlation kind: which endpoint or interior
// point of [rho_lo, rho_hi] minimizes the risk premium, by the signs of
// beta1*beta2 and the position of rho0 relative to the bounds.
CorrelationCaseReport classify_correlation(const AmbiguitySet& set, const Eigen::VectorXd& b);

}  // namespace rmv
