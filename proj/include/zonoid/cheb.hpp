#ifndef ZONOID_CHEB_HPP
#define ZONOID_CHEB_HPP

#include <functional>
#include <vector>

namespace zonoid {

enum class Endpoint { left, right };

/// Chebyshev interpolant of a function restricted to [a,b]: coefficients of
/// T_k in the affinely mapped variable, built on Gauss-Lobatto nodes.
class ChebPiece {
  public:
    ChebPiece() = default;

    static ChebPiece fit(const std::function<double(double)>& f, double a, double b, int degree);
    static ChebPiece from_coefficients(std::vector<double> coef, double a, double b);

    double a() const { return a_; }
    double b() const { return b_; }
    const std::vector<double>& coefficients() const { return coef_; }
    int degree() const { return static_cast<int>(coef_.size()) - 1; }

    double eval(double z) const;

    /// spectral derivative of the stored series, interval-scaled
    ChebPiece derivative(int order = 1) const;

    /// value and derivatives 0..order at z (order <= 3)
    std::vector<double> jets(double z, int order) const;

    /// integral of the interpolant over [from,to] (subinterval of [a,b])
    double integrate(double from, double to) const;

    /// second antiderivative anchored at z0: result(z0) = result'(z0) = 0
    ChebPiece double_primitive(double z0) const;

    /// One-sided derivatives 0..order at an endpoint, plus a divergence flag:
    /// the flag is raised when Richardson extrapolation of the top derivative
    /// from interior samples disagrees with the endpoint value by more than
    /// rel_tol in relative terms (endpoint singularity detector).
    std::vector<double> one_sided_jet(Endpoint end, int order, bool* divergence_flag = nullptr,
                                      double rel_tol = 1e-4) const;

    /// ratio of the last-quarter coefficient norm to the total coefficient
    /// norm; a smoothness certificate for the fit
    double tail_decay() const;

    /// copy with coefficients below rel_floor * max|c| stripped from the tail
    ChebPiece truncated_to_plateau(double rel_floor = 1e-13) const;

    /// Pullback through sigma(z) = sqrt(1-z^2): for a piece on [a,b] within
    /// [0,1], the fitted composite on the mapped interval [sigma(b), sigma(a)].
    ChebPiece compose_sigma(int degree = -1) const;

  private:
    double to_unit(double z) const { return (2.0 * z - (a_ + b_)) / (b_ - a_); }

    double a_ = -1.0, b_ = 1.0;
    std::vector<double> coef_;
};

} // namespace zonoid

#endif
