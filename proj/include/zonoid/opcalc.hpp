#ifndef ZONOID_OPCALC_HPP
#define ZONOID_OPCALC_HPP

#include "zonoid/rational.hpp"

#include <string>
#include <vector>

namespace zonoid {

/// Exact scalar of the form q * pi^p with q rational.
struct SymbolicScale {
    Rational q{1};
    int pi_pow = 0;

    double value() const;
    std::string str() const;

    friend SymbolicScale operator*(const SymbolicScale& a, const SymbolicScale& b) {
        return {a.q * b.q, a.pi_pow + b.pi_pow};
    }
    SymbolicScale inverse() const { return {Rational(1) / q, -pi_pow}; }
    friend bool operator==(const SymbolicScale& a, const SymbolicScale& b) {
        return a.q == b.q && a.pi_pow == b.pi_pow;
    }
};

/// Differential operator on even functions of z in [-1,1]:
///
///     scale * sum_k coeffs[k](z) * (d/dz)^k  [ applied to psi or to psi(sqrt(1-z^2)) ]
///
/// with exact rational polynomial coefficients. When pre_substitution is set
/// the operand is first pulled back through sigma(z) = sqrt(1-z^2).
struct ZonalDiffOperator {
    std::vector<RationalPoly> coeffs; // index k = coefficient of the k-th derivative
    bool pre_substitution = false;
    SymbolicScale scale;

    int order() const { return static_cast<int>(coeffs.size()) - 1; }

    /// scale-included numeric value of coefficient k at z
    double coeff_value(int k, double z) const;

    /// scale * sum_k coeffs[k](z) * jets[k], jets holding operand derivatives 0..order
    double apply_jets(const std::vector<double>& jets, double z) const;

    std::string str() const;
};

/// Surface measure of the unit d-sphere, Vol(S^d) = 2 pi^{(d+1)/2} / Gamma((d+1)/2).
double sphere_volume(int d);
/// Same value in exact q * pi^p form (the exponent is integral for every d).
SymbolicScale sphere_volume_exact(int d);

/// c_n = 2 Vol(S^{n-2})
SymbolicScale cn_exact(int n);

/// c_{n,k} = (n-3)!! / (n-3-2k)!! * c_{n-2k} / c_n, for 0 <= k <= n/2 - 1.
double radon_constant(int n, int k);
SymbolicScale radon_constant_exact(int n, int k);

/// Second-order operator (1 - z^2) psi'' - n z psi' + n psi.
ZonalDiffOperator box_operator(int n);

/// Inverse of the interval Radon transform in odd dimension n = 2m+1,
/// expanded to polynomial coefficients Q_{k,m} acting on the sigma-pullback
/// of the operand. The k = 0 coefficient is a nonzero constant.
ZonalDiffOperator build_radon_inverse(int m);

/// Inverse of the interval cosine transform in odd dimension n = 2m+1:
/// composition of box_operator(2m+1) after build_radon_inverse(m), expanded
/// by Leibniz in exact arithmetic. Order m+2, sigma-pullback operand.
ZonalDiffOperator build_cosine_inverse(int m);

struct ScaledPoly {
    RationalPoly poly;
    SymbolicScale scale;
    double eval(double z) const { return scale.value() * poly.eval(z); }
};

/// Exact application to a polynomial operand. For pre-substitution operators
/// the operand must be even (p(sqrt(1-z^2)) is then again a polynomial).
ScaledPoly apply_to_poly(const ZonalDiffOperator& op, const RationalPoly& p);

} // namespace zonoid

#endif
