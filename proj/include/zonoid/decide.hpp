#ifndef ZONOID_DECIDE_HPP
#define ZONOID_DECIDE_HPP

#include "zonoid/bodies.hpp"
#include "zonoid/distribution.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zonoid {

enum class DirectionScheme { fibonacci_sphere, axis_and_random };

struct DecisionConfig {
    int direction_count = 64;
    DirectionScheme scheme = DirectionScheme::fibonacci_sphere;
    std::uint64_t seed = 20240101;
    ToleranceSet tol;
    int piece_degree = 128;
    int quad_order = 16;
    int oracle_grid = 200;
    bool run_oracle = true;
    int refine_count = 16;      // extra directions around the worst margin
    double refine_radius = 0.25;
    int breakpoint_depth = 40;
    int n_cap = 32;
    int threads = 0; // 0 = hardware concurrency
};

struct DirectionResult {
    Vec e;
    PositivityReport report;
    std::string error; // set when a stage failed for this direction
};

struct OracleResult {
    bool feasible = false;
    double residual = 0.0; // sup-norm on the validation grid
    double scale = 1.0;
    std::vector<double> weights;
    std::vector<double> latitudes;
};

enum class Aggregate { zonoid, not_zonoid, inconclusive };

struct ZonoidVerdict {
    Aggregate aggregate = Aggregate::inconclusive;
    std::vector<DirectionResult> per_direction;
    int witness = -1; // index of the direction with the worst margin
    std::optional<OracleResult> oracle;
    std::string note;
    DecisionConfig config;

    static const char* aggregate_name(Aggregate a);
};

/// Deterministic direction set on the unit sphere of R^4.
std::vector<Vec> sample_directions(const DecisionConfig& cfg);

/// One direction of the decision pipeline: averaged profile, inverse cosine
/// transform, positivity verdict. Artifacts are optionally retained.
struct DirectionArtifacts {
    ZonalProfile profile;
    IntervalDistribution distribution;
};
PositivityReport direction_check(const BodySpec& body4, const Vec& e, const DecisionConfig& cfg,
                                 DirectionArtifacts* artifacts = nullptr);

/// Discretized-transform kernel: mean of |<u,x>| over the symmetrized orbit
/// pair at latitude s, evaluated at latitude z (even in both arguments).
double oracle_kernel(double z, double s, int n = 3);

/// Independent check: fit the profile as a nonnegative combination of orbit
/// kernels on a latitude grid; feasible when the sup-norm residual on a
/// validation grid stays below tol.oracle * scale.
OracleResult nnls_oracle(const ZonalProfile& eta, const DecisionConfig& cfg);

/// Full decision: embed 3-dimensional bodies, sweep the direction set (with
/// a refinement pass near the worst margin), aggregate, and optionally attach
/// the oracle result at the witness direction.
ZonoidVerdict zonoid_check(const BodySpec& body, const DecisionConfig& cfg = {});

} // namespace zonoid

#endif
