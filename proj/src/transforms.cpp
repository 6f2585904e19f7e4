#include "zonoid/transforms.hpp"

#include "zonoid/cheb.hpp"
#include "zonoid/opcalc.hpp"
#include "zonoid/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace zonoid {

double mean_abs_affine(double a, double b) {
    a = std::abs(a);
    if (a >= b) return a;
    return (a * a + b * b) / (2.0 * b);
}

double orbit_mean_abs(double z, double s) {
    double b2 = (1.0 - z * z) * (1.0 - s * s);
    return mean_abs_affine(z * s, std::sqrt(std::max(0.0, b2)));
}

double radon_zonal(const PiecewiseFn& phi, int n, double z, double tol) {
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("radon_zonal: n must be odd and >= 3");
    double zp = std::sqrt(std::max(0.0, 1.0 - z * z));
    int pw = (n - 3) / 2;
    auto f = [&](double u) {
        double w = 1.0 - u * u;
        double weight = 1.0;
        for (int i = 0; i < pw; ++i) weight *= w;
        return phi(zp * u) * weight;
    };
    std::vector<double> knots;
    if (zp > 0)
        for (double k : phi.knots)
            if (std::abs(k) < zp) knots.push_back(std::abs(k) / zp);
    double err = 0.0;
    double val = integrate_adaptive(f, 0.0, 1.0, tol, knots, 16, 22, &err);
    if (err > 1e3 * tol + 1e-9)
        throw std::runtime_error("radon_zonal: quadrature failed to converge");
    return cn_exact(n).value() * val;
}

double cosine_zonal(const PiecewiseFn& rho, int n, double z, double tol) {
    if (n != 3) throw std::invalid_argument("cosine_zonal: only ambient sphere dimension 3");
    double w0 = std::sqrt(std::max(0.0, 1.0 - z * z)); // kink latitude of the kernel
    double volS2 = sphere_volume(2);
    auto f = [&](double s) {
        return orbit_mean_abs(z, s) * rho(s) * volS2 * std::sqrt(std::max(0.0, 1.0 - s * s));
    };
    std::vector<double> knots{-w0, w0};
    knots.insert(knots.end(), rho.knots.begin(), rho.knots.end());
    double err = 0.0;
    double val = integrate_adaptive(f, -1.0, 1.0, tol, knots, 16, 22, &err);
    if (err > 1e3 * tol + 1e-9)
        throw std::runtime_error("cosine_zonal: quadrature failed to converge");
    return 0.5 * val;
}

double radon3_inverse_quadrature(const PiecewiseFn& psi, double z) {
    double w = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (double k : psi.knots)
        if (std::abs(w - std::abs(k)) < 1e-11)
            throw std::invalid_argument("radon3_inverse_quadrature: evaluation at a knot");
    // local spectral fit around w, clipped to [0,1] and to the knot gaps
    double lo = 0.0, hi = 1.0;
    for (double k : psi.knots) {
        double ak = std::abs(k);
        if (ak < w) lo = std::max(lo, ak);
        if (ak > w) hi = std::min(hi, ak);
    }
    double span = std::min({0.05, w - lo > 0 ? w - lo : 0.05, hi - w > 0 ? hi - w : 0.05});
    double a = std::max(lo, w - span), b = std::min(hi, w + span);
    if (b - a < 1e-12) throw std::invalid_argument("radon3_inverse_quadrature: degenerate fit gap");
    ChebPiece local = ChebPiece::fit(psi.f, a, b, 24);
    auto jets = local.jets(w, 1);
    double dPdz = w >= 1e-154 ? jets[1] * (-z / w) : 0.0;
    return (jets[0] + z * dPdz) / cn_exact(3).value();
}

std::pair<double, double> dimension_reduction_check(const PiecewiseFn& phi, int n, int k,
                                                    double z) {
    if (n - 2 * k < 2) throw std::invalid_argument("dimension_reduction_check: n - 2k must be >= 2");
    if (std::abs(z) > 0.9)
        throw std::invalid_argument("dimension_reduction_check: restrict to |z| <= 0.9");
    double zp0 = std::sqrt(1.0 - z * z);

    // u(z') = (z')^{n-2} (r_n phi)(z(z')), differentiated k times in z'
    auto u = [&](double zp) {
        double zz = std::sqrt(std::max(0.0, 1.0 - zp * zp));
        double pw = std::pow(zp, n - 2);
        return pw * radon_zonal(phi, n, zz, 1e-12);
    };
    double lhs;
    {
        double h = 6e-3;
        auto apply_op = [&](auto&& self, double zp, int depth) -> double {
            if (depth == 0) return u(zp);
            auto g = [&](double x) { return self(self, x, depth - 1); };
            double d = (g(zp - 2 * h) - 8 * g(zp - h) + 8 * g(zp + h) - g(zp + 2 * h)) / (12 * h);
            return d / zp;
        };
        lhs = apply_op(apply_op, zp0, k);
    }
    double rhs = radon_constant(n, k) * std::pow(zp0, n - 2 - 2 * k) *
                 radon_zonal(phi, n - 2 * k, z, 1e-12);
    return {lhs, rhs};
}

} // namespace zonoid
