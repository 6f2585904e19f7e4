#ifndef ZONOID_BODIES_HPP
#define ZONOID_BODIES_HPP

#include "zonoid/cheb.hpp"

#include <memory>
#include <string>
#include <vector>

namespace zonoid {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
Vec normalized(const Vec& a);

enum class BodyKind { polytope, zonotope, ball, revolution, embedded };

/// Profile of a body of revolution: either a Chebyshev series on [-1,1] or
/// the exact disc profile r*sqrt(1-t^2) produced by embedding a ball.
enum class RevolutionProfile { chebyshev, sqrt_disc };

/// A concrete centrally symmetric convex body in R^dim.
struct BodySpec {
    int dim = 0;
    BodyKind kind = BodyKind::ball;

    std::vector<Vec> vertices;        // polytope: closed under x -> -x
    std::vector<Vec> generators;      // zonotope: nonzero segment generators
    double radius = 0.0;              // ball
    Vec axis;                         // revolution: unit axis
    RevolutionProfile profile_kind = RevolutionProfile::chebyshev;
    std::vector<double> profile_cheb; // revolution: even series on [-1,1]
    std::shared_ptr<const BodySpec> inner; // embedded: body one dimension down

    static BodySpec make_polytope(int dim, std::vector<Vec> verts);
    static BodySpec make_zonotope(int dim, std::vector<Vec> gens);
    static BodySpec make_ball(int dim, double r);
    static BodySpec make_revolution(int dim, Vec axis, std::vector<double> cheb);

    /// revolution profile value at t in [-1,1]
    double profile_value(double t) const;

    BodySpec scaled(double s) const;
    /// apply a rotation matrix (rows of R) to the defining data
    BodySpec rotated(const std::vector<Vec>& R) const;

    std::string kind_name() const;
};

/// Structural validation: dimensions, central symmetry of polytopes,
/// nonzero generators, evenness and spot-checked sublinearity of profiles.
void validate_body(const BodySpec& body);

/// Support function at a unit direction.
double support_eval(const BodySpec& body, const Vec& u);

/// Positively homogeneous extension |x| h(x/|x|); H(0) = 0.
double support_homogeneous(const BodySpec& body, const Vec& x);

/// Embed a body from odd ambient dimension d into d+1 (support pulled back
/// through the coordinate projection). Polytopes and zonotopes are padded,
/// balls become disc-profile revolution bodies, anything else is wrapped.
BodySpec embed_to_odd(const BodySpec& body);

/// Deterministic orthonormal basis of the complement of e: Gram-Schmidt of
/// the standard basis vectors ordered by increasing alignment with e.
std::vector<Vec> orthonormal_complement(const Vec& e);

/// Averaged support profile of a body in R^4 along direction e, on [-1,1].
///
/// Pieces are stored on [0,1] (the profile is even by construction); pieces
/// whose closure touches w = 1 are parametrized by the conjugate coordinate
/// zeta = sqrt(1-w^2), in which the averaged profile stays analytic.
struct ZonalProfile {
    struct Piece {
        double a, b;        // w-interval within [0,1]
        ChebPiece fit;      // over [a,b], or over [sigma(b), sigma(a)] if pullback_chart
        bool pullback_chart = false;
    };

    Vec direction;
    std::vector<double> breakpoints; // full symmetric list, -1 = first, 1 = last
    std::vector<Piece> pieces;       // ordered over [0,1]
    double scale = 1.0;              // max |eta|
    double asymmetry = 0.0;          // evenness defect of the raw average
    double continuity_defect = 0.0;  // mismatch across interior piece edges
    double quad_defect = 0.0;        // worst quadrature disagreement seen

    double eval(double z) const;

    /// derivatives 0..order of eta at w in [0,1]; side > 0 evaluates on the
    /// piece above w, side < 0 below (one-sided data at piece edges)
    std::vector<double> jets(double w, int order, int side = 0) const;

    /// derivatives 0..order of the sigma-pullback eta(sqrt(1-z^2)) at z in
    /// (0,1), one-sided by `side`; `divergent` reports an endpoint blow-up
    std::vector<double> pullback_jets(double z, int order, int side = 0,
                                      bool* divergent = nullptr) const;

    const Piece& piece_at(double w, int side = 0) const;

    /// evaluate a specific piece at w (chart-aware)
    double eval_piece(size_t idx, double w) const;

    /// piece cut points on [0,1] including 0 and 1
    std::vector<double> positive_cuts() const;
};

/// Non-smoothness points of the averaged profile, symmetric and including
/// +-1. Polytope and zonotope candidates come from the facial structure;
/// everything is confirmed by one-sided derivative disagreement; generic
/// bodies fall back to an adaptive derivative-jump scan refined `depth` times.
std::vector<double> detect_breakpoints(const BodySpec& body, const Vec& e, int depth,
                                       int n_cap = 32);

/// Rotational average of the support function reduced to one variable.
/// quad_order seeds the quadrature; piece_degree bounds each Chebyshev fit.
ZonalProfile zonal_profile(const BodySpec& body, const Vec& e, int quad_order, int piece_degree,
                           int breakpoint_depth = 40, int n_cap = 32);

} // namespace zonoid

#endif
