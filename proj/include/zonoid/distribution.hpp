#ifndef ZONOID_DISTRIBUTION_HPP
#define ZONOID_DISTRIBUTION_HPP

#include "zonoid/bodies.hpp"
#include "zonoid/opcalc.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace zonoid {

struct ToleranceSet {
    double density = 1e-7;      // density floor, relative to the profile scale
    double atom = 1e-6;         // atom acceptance band
    double neg = 1e-3;          // rejection threshold, relative to the profile scale
    double even = 1e-7;         // profile evenness defect
    double cont = 1e-6;         // profile continuity defect
    double quad = 1e-8;         // quadrature disagreement
    double jet = 1e-4;          // endpoint jet divergence detector
    double atom_extract = 1e-3; // extraction uncertainty before an atom is inconclusive
    double oracle = 1e-3;       // oracle residual threshold, relative
};

/// coefficient of the order-th delta derivative at x
struct Atom {
    double x = 0.0;
    int order = 0;
    double coeff = 0.0;
    double uncertainty = 0.0; // 0 for exact jump-calculus atoms
};

/// The inverse cosine transform of an averaged profile, decomposed into a
/// piecewise density (with respect to the sphere measure, as a function of
/// latitude) plus finitely many atoms carrying sphere masses.
struct IntervalDistribution {
    struct DensityPiece {
        double a, b;            // z-interval within [0,1]
        ChebPiece fit;          // lambda on [a,b]; for pole pieces, w*lambda over zeta
        bool pole_chart = false;

        double eval(double z) const;
    };

    Vec direction;
    std::vector<double> cuts;         // singular candidates on [0,1], 0 and 1 included
    std::vector<DensityPiece> pieces; // over [0,1]; the density is even
    std::vector<Atom> atoms;          // full signed list over [-1,1]
    double profile_scale = 1.0;
    double min_density = 0.0;
    double min_density_at = 0.0;
    std::string note;

    double density(double z) const;
    /// all atoms at a location (within 1e-9), any order
    std::vector<Atom> atoms_at(double x) const;
};

struct PositivityReport {
    enum class Verdict { nonnegative, negative, inconclusive };

    double min_density = 0.0;
    double min_density_at = 0.0;
    bool interior_atoms_ok = true;
    std::array<double, 4> boundary_plus{};  // delta-derivative coefficients at +1
    std::array<double, 4> boundary_minus{}; // and at -1
    Verdict verdict = Verdict::inconclusive;
    double scale = 1.0; // profile scale the relative tolerances refer to
    /// most negative normalized margin over all positivity conditions;
    /// nonnegative distributions have margin >= -tol
    double margin = 0.0;
    double extraction_uncertainty = 0.0;
    std::string detail;

    static const char* verdict_name(Verdict v);
};

/// Localized smooth test function ((z-x)^j / j!) * cutoff((z-x)/eps),
/// evenly symmetrized (for x = 0 the plain even monomial bump; j even only).
struct TestBump {
    double x;
    int j;
    double eps;

    double eval(double z) const;
    /// value and three derivatives of z -> bump(sqrt(1-z^2))
    std::array<double, 4> sigma_pullback_jets(double z) const;
    /// z-intervals of the support of the sigma pullback, positive side
    std::pair<double, double> pullback_support() const;
};

/// Interval jump calculus: atoms produced at x by applying the operator to a
/// function with the given one-sided derivative data (jumps [G^{(i)}] feed
/// delta derivatives, then the polynomial coefficients are folded in).
/// Coefficients are in the plain interval normalization, no latitude weight.
std::vector<Atom> jump_calculus_atoms(const std::vector<double>& jets_left,
                                      const std::vector<double>& jets_right,
                                      const ZonalDiffOperator& op, double x);

/// Multiply an atom list at x by a smooth factor given through its jets.
std::vector<Atom> atoms_times_smooth(const std::vector<Atom>& atoms,
                                     const std::array<double, 4>& factor_jets, double x);

/// Latitude weight W(z) = Vol(S^2) sqrt(1-z^2) and its jets.
double latitude_weight(double z);
std::array<double, 4> latitude_weight_jets(double z);

/// Mollified extraction of atoms at x by pairing against test bumps at
/// scales eps and eps/2 with Richardson extrapolation.
///   pair_fn    : psi -> <Lambda, psi>  (full-interval pairing)
///   density_fn : (s, side) -> known density, subtracted before the solve
/// `boundary` selects the endpoint convergence-order model.
std::vector<Atom> mollified_extract_with(const std::function<double(const TestBump&)>& pair_fn,
                                         const std::function<double(double, int)>& density_fn,
                                         const std::vector<double>& density_knots, double x,
                                         double eps, int max_order, bool boundary);

/// Pairing-based extraction for a profile: <Lambda, psi> is evaluated as the
/// integral of eta against the classical inverse transform of psi, weighted
/// by the latitude measure; only profile values are ever integrated.
std::vector<Atom> mollified_atom_extract(const ZonalProfile& eta, const ZonalDiffOperator& op,
                                         double x, double eps);

/// Full decomposition: per-piece density via the spectral engine, interior
/// atoms by exact jump calculus (mollified fallback on divergent jets),
/// endpoint atoms by the mollified extractor.
IntervalDistribution inverse_cosine_distribution(const ZonalProfile& eta,
                                                 const ZonalDiffOperator& op,
                                                 const ToleranceSet& tol = {},
                                                 int piece_degree = 128);

/// Second antiderivative of the density of one piece, anchored at the piece
/// midpoint (value and slope vanish there).
ChebPiece double_primitive(const IntervalDistribution& dist, int piece_index);

struct ConvexExtension {
    bool ok = false;
    /// per glued piece over (-1,1), left to right: linear shift alpha*z + beta
    std::vector<double> alpha, beta;
    std::vector<double> piece_left; // left endpoint of each glued piece
};

/// Executable certificate for the interior part: true when every piece
/// density clears the floor and interior atoms are order-0 and nonnegative;
/// the returned shifts glue the per-piece double primitives into a continuous
/// convex function whose slope jumps match the interior atom masses.
ConvexExtension convex_extension_check(const IntervalDistribution& dist,
                                       const ToleranceSet& tol = {});

PositivityReport positivity_verdict(const IntervalDistribution& dist,
                                    const ToleranceSet& tol = {});

} // namespace zonoid

#endif
