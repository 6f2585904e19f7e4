#ifndef ZONOID_QUADRATURE_HPP
#define ZONOID_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace zonoid {

struct QuadRule {
    std::vector<double> x; // nodes on [-1,1]
    std::vector<double> w;
};

/// Gauss-Legendre rule of order n (cached per n).
const QuadRule& gauss_legendre(int n);

/// Fixed-order Gauss-Legendre integral over [a,b].
double integrate_gl(const std::function<double(double)>& f, double a, double b, int n = 32);

/// Adaptive integration: the interval is pre-split at the given knots, then
/// each panel is refined by GL(n) vs GL(2n) disagreement until abs_tol is met
/// (with a depth cap; returns the best estimate regardless).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, const std::vector<double>& knots = {}, int n = 16,
                          int max_depth = 24, double* err_estimate = nullptr);

} // namespace zonoid

#endif
