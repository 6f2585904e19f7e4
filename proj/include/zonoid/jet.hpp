#ifndef ZONOID_JET_HPP
#define ZONOID_JET_HPP

#include <array>
#include <cmath>
#include <stdexcept>

namespace zonoid {

/// Truncated Taylor data (value and first three derivatives) with exact
/// propagation rules. Used for smooth test-function machinery where finite
/// differences would be hopeless.
struct Jet3 {
    double v = 0, d1 = 0, d2 = 0, d3 = 0;

    static Jet3 variable(double x) { return {x, 1.0, 0.0, 0.0}; }
    static Jet3 constant(double c) { return {c, 0.0, 0.0, 0.0}; }

    std::array<double, 4> as_array() const { return {v, d1, d2, d3}; }

    friend Jet3 operator+(const Jet3& a, const Jet3& b) {
        return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
    }
    friend Jet3 operator-(const Jet3& a, const Jet3& b) {
        return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
    }
    friend Jet3 operator-(const Jet3& a) { return {-a.v, -a.d1, -a.d2, -a.d3}; }
    friend Jet3 operator*(double s, const Jet3& a) {
        return {s * a.v, s * a.d1, s * a.d2, s * a.d3};
    }
    friend Jet3 operator*(const Jet3& a, const Jet3& b) {
        return {a.v * b.v,
                a.d1 * b.v + a.v * b.d1,
                a.d2 * b.v + 2 * a.d1 * b.d1 + a.v * b.d2,
                a.d3 * b.v + 3 * a.d2 * b.d1 + 3 * a.d1 * b.d2 + a.v * b.d3};
    }
    friend Jet3 operator/(const Jet3& a, const Jet3& b) { return a * reciprocal(b); }

    /// outer(inner): outer jets taken at inner.v
    static Jet3 compose(const Jet3& f, const Jet3& g) {
        return {f.v,
                f.d1 * g.d1,
                f.d2 * g.d1 * g.d1 + f.d1 * g.d2,
                f.d3 * g.d1 * g.d1 * g.d1 + 3 * f.d2 * g.d1 * g.d2 + f.d1 * g.d3};
    }

    static Jet3 reciprocal(const Jet3& a) {
        double iv = 1.0 / a.v;
        Jet3 f{iv, -iv * iv, 2 * iv * iv * iv, -6 * iv * iv * iv * iv};
        return compose(f, a);
    }

    static Jet3 sqrt(const Jet3& a) {
        double s = std::sqrt(a.v);
        Jet3 f{s, 0.5 / s, -0.25 / (s * a.v), 0.375 / (s * a.v * a.v)};
        return compose(f, a);
    }

    static Jet3 exp(const Jet3& a) {
        double e = std::exp(a.v);
        return compose({e, e, e, e}, a);
    }
};

/// Smooth even cutoff: 1 on |t| <= 1, 0 on |t| >= 2, built from exp(-1/s)
/// partitions in the variable t^2 so that every derivative is available in
/// closed form and the function is a smooth function of t^2.
Jet3 bump_jet(const Jet3& t);

/// sigma(z) = sqrt(1 - z^2) as a jet at z (|z| < 1).
inline Jet3 sigma_jet(double z) {
    double w = std::sqrt(1.0 - z * z);
    return {w, -z / w, -1.0 / (w * w * w), -3.0 * z / (w * w * w * w * w)};
}

} // namespace zonoid

#endif
