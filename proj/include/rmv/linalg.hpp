#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "rmv/errors.hpp"

namespace rmv {

// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
// A pivot smaller than 1e-12 times the largest diagonal entry is treated as a
// positive-definiteness failure rather than silently factored.
inline Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& a) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw DimensionMismatch("cholesky: matrix not square");
    double max_diag = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
    const double floor = 1e-12 * max_diag;

    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = a(j, j);
        for (Eigen::Index k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
        if (!(pivot >= floor) || max_diag <= 0.0)
            throw NotPositiveDefinite("cholesky: pivot " + std::to_string(pivot) +
                                      " below floor at column " + std::to_string(j));
        l(j, j) = std::sqrt(pivot);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

// Solves A x = rhs with A symmetric positive definite, via the factor above.
inline Eigen::VectorXd cholesky_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs) {
    if (rhs.size() != a.rows()) throw DimensionMismatch("cholesky_solve: size mismatch");
    const Eigen::MatrixXd l = cholesky_lower(a);
    const Eigen::Index n = l.rows();
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double s = rhs(i);
        for (Eigen::Index k = 0; k < i; ++k) s -= l(i, k) * y(k);
        y(i) = s / l(i, i);
    }
    Eigen::VectorXd x(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        double s = y(i);
        for (Eigen::Index k = i + 1; k < n; ++k) s -= l(k, i) * x(k);
        x(i) = s / l(i, i);
    }
    return x;
}

// b' A^-1 b for symmetric positive definite A.
inline double quad_form_inverse(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    return b.dot(cholesky_solve(a, b));
}

}  // namespace rmv
