#include "zonoid/jet.hpp"

namespace zonoid {

namespace {

// theta(s) = exp(-1/s) for s > 0, extended by 0; callers keep s in (0, 4).
Jet3 theta_jet(const Jet3& s) {
    if (s.v <= 0.0) return Jet3::constant(0.0);
    return Jet3::exp(-Jet3::reciprocal(s));
}

} // namespace

Jet3 bump_jet(const Jet3& t) {
    Jet3 r = t * t;
    if (r.v <= 1.0) return Jet3::constant(1.0);
    if (r.v >= 4.0) return Jet3::constant(0.0);
    Jet3 up = theta_jet(Jet3::constant(4.0) - r);
    Jet3 down = theta_jet(r - Jet3::constant(1.0));
    return up / (up + down);
}

} // namespace zonoid
