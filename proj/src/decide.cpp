#include "zonoid/decide.hpp"

#include "zonoid/nnls.hpp"
#include "zonoid/transforms.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace zonoid {

const char* ZonoidVerdict::aggregate_name(Aggregate a) {
    switch (a) {
        case Aggregate::zonoid: return "zonoid";
        case Aggregate::not_zonoid: return "not_zonoid";
        case Aggregate::inconclusive: return "inconclusive";
    }
    return "?";
}

std::vector<Vec> sample_directions(const DecisionConfig& cfg) {
    std::vector<Vec> out;
    int n = std::max(1, cfg.direction_count);
    if (cfg.scheme == DirectionScheme::fibonacci_sphere) {
        // double-spiral lattice on the 3-sphere
        const double phi = std::numbers::sqrt2;
        const double psi = 1.533751168755204288118041;
        for (int i = 0; i < n; ++i) {
            double s = (i + 0.5) / n;
            double r = std::sqrt(s), R = std::sqrt(1.0 - s);
            double alpha = 2.0 * std::numbers::pi * i / phi;
            double beta = 2.0 * std::numbers::pi * i / psi;
            out.push_back(normalized(
                Vec{r * std::sin(alpha), r * std::cos(alpha), R * std::sin(beta), R * std::cos(beta)}));
        }
    } else {
        for (int a = 0; a < 4 && static_cast<int>(out.size()) < n; ++a) {
            Vec e(4, 0.0);
            e[a] = 1.0;
            out.push_back(e);
        }
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> g(0.0, 1.0);
        while (static_cast<int>(out.size()) < n) {
            Vec e(4);
            for (double& x : e) x = g(rng);
            if (norm(e) < 1e-8) continue;
            out.push_back(normalized(e));
        }
    }
    return out;
}

PositivityReport direction_check(const BodySpec& body4, const Vec& e, const DecisionConfig& cfg,
                                 DirectionArtifacts* artifacts) {
    ZonalProfile profile = zonal_profile(body4, e, cfg.quad_order, cfg.piece_degree,
                                         cfg.breakpoint_depth, cfg.n_cap);
    ZonalDiffOperator op = build_cosine_inverse(1);
    IntervalDistribution dist = inverse_cosine_distribution(profile, op, cfg.tol,
                                                            cfg.piece_degree);
    PositivityReport rep = positivity_verdict(dist, cfg.tol);
    if (profile.quad_defect > cfg.tol.quad * std::max(1.0, profile.scale) &&
        rep.verdict == PositivityReport::Verdict::nonnegative) {
        rep.verdict = PositivityReport::Verdict::inconclusive;
        rep.detail = "quadrature disagreement above tolerance";
    }
    if (artifacts) {
        artifacts->profile = std::move(profile);
        artifacts->distribution = std::move(dist);
    }
    return rep;
}

double oracle_kernel(double z, double s, int n) {
    if (n != 3) throw std::invalid_argument("oracle_kernel: only ambient sphere dimension 3");
    if (std::abs(z) > 1.0 || std::abs(s) > 1.0)
        throw std::invalid_argument("oracle_kernel: arguments must lie in [-1,1]");
    return orbit_mean_abs(z, s);
}

OracleResult nnls_oracle(const ZonalProfile& eta, const DecisionConfig& cfg) {
    int m = std::max(50, cfg.oracle_grid);
    int nfit = 2 * m + 1;
    Eigen::MatrixXd A(nfit, m);
    Eigen::VectorXd b(nfit);
    std::vector<double> lat(m);
    for (int k = 0; k < m; ++k) lat[k] = k / double(m - 1);
    for (int i = 0; i < nfit; ++i) {
        double z = 0.5 * (1.0 + std::cos(std::numbers::pi * i / (nfit - 1)));
        b[i] = eta.eval(z);
        for (int k = 0; k < m; ++k) A(i, k) = oracle_kernel(z, lat[k]);
    }
    NnlsResult sol = nnls_solve(A, b);

    OracleResult res;
    res.scale = eta.scale;
    res.latitudes = lat;
    res.weights.assign(sol.x.data(), sol.x.data() + sol.x.size());
    double sup = 0.0;
    int nv = 4 * m + 1;
    for (int i = 0; i < nv; ++i) {
        double z = i / double(nv - 1);
        double fit = 0.0;
        for (int k = 0; k < m; ++k) fit += sol.x[k] * oracle_kernel(z, lat[k]);
        sup = std::max(sup, std::abs(fit - eta.eval(z)));
    }
    res.residual = sup;
    res.feasible = sol.converged && sup <= cfg.tol.oracle * std::max(eta.scale, 1e-30);
    return res;
}

namespace {

/// worst normalized margin first; ties by index for determinism
int worst_direction(const std::vector<DirectionResult>& dirs) {
    int w = -1;
    double worst = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < dirs.size(); ++i) {
        if (!dirs[i].error.empty()) continue;
        if (dirs[i].report.margin < worst) {
            worst = dirs[i].report.margin;
            w = static_cast<int>(i);
        }
    }
    return w;
}

std::vector<DirectionResult> run_directions(const BodySpec& body4, const std::vector<Vec>& dirs,
                                            const DecisionConfig& cfg) {
    std::vector<DirectionResult> out(dirs.size());
    int threads = cfg.threads > 0 ? cfg.threads
                                  : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<int>(threads, static_cast<int>(dirs.size()));
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= dirs.size()) break;
            out[i].e = dirs[i];
            try {
                out[i].report = direction_check(body4, dirs[i], cfg);
            } catch (const std::exception& ex) {
                out[i].error = ex.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

} // namespace

ZonoidVerdict zonoid_check(const BodySpec& body, const DecisionConfig& cfg) {
    validate_body(body);
    if (body.dim != 3 && body.dim != 4)
        throw std::invalid_argument("zonoid_check: supported ambient dimensions are 3 and 4");
    BodySpec body4 = body.dim == 3 ? embed_to_odd(body) : body;

    ZonoidVerdict verdict;
    verdict.config = cfg;

    std::vector<Vec> dirs = sample_directions(cfg);
    verdict.per_direction = run_directions(body4, dirs, cfg);

    // refinement pass: extra directions in a cap around the worst margin
    int w = worst_direction(verdict.per_direction);
    if (w >= 0 && cfg.refine_count > 0) {
        std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
        std::normal_distribution<double> g(0.0, 1.0);
        const Vec& e0 = verdict.per_direction[w].e;
        std::vector<Vec> extra;
        for (int i = 0; i < cfg.refine_count; ++i) {
            Vec e(4);
            for (int k = 0; k < 4; ++k) e[k] = e0[k] + cfg.refine_radius * g(rng);
            if (norm(e) < 1e-8) { --i; continue; }
            extra.push_back(normalized(e));
        }
        auto more = run_directions(body4, extra, cfg);
        verdict.per_direction.insert(verdict.per_direction.end(), more.begin(), more.end());
    }

    bool any_negative = false, all_nonnegative = true, any_error = false;
    for (const auto& d : verdict.per_direction) {
        if (!d.error.empty()) { any_error = true; all_nonnegative = false; continue; }
        using V = PositivityReport::Verdict;
        if (d.report.verdict == V::negative) any_negative = true;
        if (d.report.verdict != V::nonnegative) all_nonnegative = false;
    }
    if (any_negative) verdict.aggregate = Aggregate::not_zonoid;
    else if (all_nonnegative) verdict.aggregate = Aggregate::zonoid;
    else verdict.aggregate = Aggregate::inconclusive;
    if (any_error) verdict.note = "one or more directions failed; aggregate downgraded";

    verdict.witness = worst_direction(verdict.per_direction);
    if (cfg.run_oracle && verdict.witness >= 0) {
        const Vec& e = verdict.per_direction[verdict.witness].e;
        ZonalProfile profile = zonal_profile(body4, e, cfg.quad_order, cfg.piece_degree,
                                             cfg.breakpoint_depth, cfg.n_cap);
        verdict.oracle = nnls_oracle(profile, cfg);
    }
    return verdict;
}

} // namespace zonoid
