#include "zonoid/nnls.hpp"

#include <limits>
#include <vector>

namespace zonoid {

namespace {

Eigen::VectorXd passive_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                              const std::vector<int>& passive) {
    Eigen::MatrixXd Ap(A.rows(), passive.size());
    for (size_t c = 0; c < passive.size(); ++c) Ap.col(c) = A.col(passive[c]);
    return Ap.colPivHouseholderQr().solve(b);
}

} // namespace

NnlsResult nnls_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iter,
                      double tol) {
    const int n = static_cast<int>(A.cols());
    if (max_iter <= 0) max_iter = 3 * n;

    NnlsResult result;
    result.x = Eigen::VectorXd::Zero(n);
    std::vector<bool> in_passive(n, false);
    std::vector<int> passive;

    double btol = tol * std::max(1.0, b.norm());
    int iter = 0;
    while (true) {
        Eigen::VectorXd w = A.transpose() * (b - A * result.x);
        int j_best = -1;
        double w_best = btol;
        for (int j = 0; j < n; ++j)
            if (!in_passive[j] && w[j] > w_best) { w_best = w[j]; j_best = j; }
        if (j_best < 0) { result.converged = true; break; }
        in_passive[j_best] = true;
        passive.push_back(j_best);

        while (true) {
            if (++iter > max_iter) {
                result.iterations = iter;
                result.residual_norm = (b - A * result.x).norm();
                return result; // iteration cap; converged stays false
            }
            Eigen::VectorXd z = passive_solve(A, b, passive);
            double zmin = std::numeric_limits<double>::infinity();
            for (int c = 0; c < z.size(); ++c) zmin = std::min(zmin, z[c]);
            if (zmin > 0.0) {
                for (size_t c = 0; c < passive.size(); ++c) result.x[passive[c]] = z[c];
                break;
            }
            // step toward z until the first passive variable hits zero
            double alpha = std::numeric_limits<double>::infinity();
            for (size_t c = 0; c < passive.size(); ++c) {
                if (z[c] <= 0.0) {
                    double xi = result.x[passive[c]];
                    double a = xi / (xi - z[c]);
                    alpha = std::min(alpha, a);
                }
            }
            for (size_t c = 0; c < passive.size(); ++c) {
                int j = passive[c];
                result.x[j] += alpha * (z[c] - result.x[j]);
            }
            std::vector<int> keep;
            for (int j : passive) {
                if (result.x[j] > tol) keep.push_back(j);
                else { result.x[j] = 0.0; in_passive[j] = false; }
            }
            passive = std::move(keep);
            if (passive.empty()) break;
        }
    }
    result.iterations = iter;
    result.residual_norm = (b - A * result.x).norm();
    return result;
}

} // namespace zonoid
