#ifndef ZONOID_TRANSFORMS_HPP
#define ZONOID_TRANSFORMS_HPP

#include <functional>
#include <utility>
#include <vector>

namespace zonoid {

/// scalar function on [-1,1] with its known non-smooth points
struct PiecewiseFn {
    std::function<double(double)> f;
    std::vector<double> knots;

    double operator()(double z) const { return f(z); }
};

/// mean over t uniform in [-1,1] of |a + b t| (closed form), b >= 0
double mean_abs_affine(double a, double b);

/// Mean of |<u,x>| over the orbit sphere at latitude s, for u at latitude z
/// (ambient spheres of dimension 3). Symmetric under sign flips of z and s.
double orbit_mean_abs(double z, double s);

/// Interval Radon transform in odd ambient dimension n >= 3:
///   (r_n phi)(z) = c_n * Int_0^1 phi(z' u) (1-u^2)^{(n-3)/2} du,  z' = sqrt(1-z^2)
/// (the z'-scaled form of the latitude integral; finite at z = +-1).
double radon_zonal(const PiecewiseFn& phi, int n, double z, double tol = 1e-11);

/// Interval cosine transform of a zonal density (ambient sphere dimension 3):
///   (t_3 rho)(z) = (1/2) Int_{-1}^{1} orbit_mean_abs(z,s) rho(s) W(s) ds
/// with the latitude weight W(s) = Vol(S^2) sqrt(1-s^2). The integrand has
/// kinks along |s| = sqrt(1-z^2); the quadrature splits there.
double cosine_zonal(const PiecewiseFn& rho, int n, double z, double tol = 1e-11);

/// Inverse of r_3 evaluated through a local spectral fit:
/// (1/c_3) [ psi(sigma(z)) + z * d/dz psi(sigma(z)) ].
/// Throws when sigma(z) falls on a knot of psi.
double radon3_inverse_quadrature(const PiecewiseFn& psi, double z);

/// Both sides of the derivative identity linking r_n to r_{n-2k}:
///   ((1/z') d/dz')^k ( (z')^{n-2} r_n phi ) = c_{n,k} (z')^{n-2-2k} r_{n-2k} phi.
/// Left side by numerical differentiation in z'; restrict to |z| <= 0.9.
std::pair<double, double> dimension_reduction_check(const PiecewiseFn& phi, int n, int k,
                                                    double z);

} // namespace zonoid

#endif
