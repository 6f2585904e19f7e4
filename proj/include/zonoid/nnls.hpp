#ifndef ZONOID_NNLS_HPP
#define ZONOID_NNLS_HPP

#include <Eigen/Dense>

namespace zonoid {

struct NnlsResult {
    Eigen::VectorXd x;
    double residual_norm = 0.0; // two-norm of b - A x
    bool converged = false;
    int iterations = 0;
};

/// Active-set nonnegative least squares, Lawson-Hanson style:
/// min |A x - b|_2 subject to x >= 0. The passive-set subproblems are solved
/// by column-pivoted QR. max_iter defaults to 3 * cols.
NnlsResult nnls_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iter = 0,
                      double tol = 1e-11);

} // namespace zonoid

#endif
