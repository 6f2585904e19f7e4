#include "zonoid/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace zonoid {

namespace {

QuadRule make_gauss_legendre(int n) {
    // Newton iteration on Legendre polynomials, symmetric nodes.
    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    return r;
}

} // namespace

const QuadRule& gauss_legendre(int n) {
    static std::map<int, QuadRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int n) {
    const QuadRule& r = gauss_legendre(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += r.w[i] * f(mid + half * r.x[i]);
    return half * acc;
}

namespace {

double gl_with_abs(const std::function<double(double)>& f, double a, double b, int n,
                   double& abs_part) {
    const QuadRule& r = gauss_legendre(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0, acc_abs = 0.0;
    for (int i = 0; i < n; ++i) {
        double v = f(mid + half * r.x[i]);
        acc += r.w[i] * v;
        acc_abs += r.w[i] * std::abs(v);
    }
    abs_part = half * acc_abs;
    return half * acc;
}

double adaptive_panel(const std::function<double(double)>& f, double a, double b, double tol,
                      int n, int depth, int max_depth, double& err_acc) {
    double coarse = integrate_gl(f, a, b, n);
    double abs_part = 0.0;
    double fine = gl_with_abs(f, a, b, 2 * n, abs_part);
    double err = std::abs(fine - coarse);
    // the relative floor keeps cancellation-heavy integrands from recursing
    // past what double precision can resolve
    if (err <= tol + 1e-14 * abs_part || depth >= max_depth) {
        err_acc += err;
        return fine;
    }
    double mid = 0.5 * (a + b);
    return adaptive_panel(f, a, mid, 0.5 * tol, n, depth + 1, max_depth, err_acc) +
           adaptive_panel(f, mid, b, 0.5 * tol, n, depth + 1, max_depth, err_acc);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, const std::vector<double>& knots, int n, int max_depth,
                          double* err_estimate) {
    if (a == b) return 0.0;
    std::vector<double> cuts{a, b};
    for (double k : knots)
        if (k > a && k < b) cuts.push_back(k);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0, err_acc = 0.0;
    double per_panel = abs_tol / std::max<size_t>(1, cuts.size() - 1);
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        total += adaptive_panel(f, cuts[i], cuts[i + 1], per_panel, n, 0, max_depth, err_acc);
    if (err_estimate) *err_estimate = err_acc;
    return total;
}

} // namespace zonoid
