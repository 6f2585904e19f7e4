#include "zonoid/body_io.hpp"
#include "zonoid/decide.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitZonoid = 0;
constexpr int kExitNotZonoid = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitBadFile = 64;
constexpr int kExitBadDimension = 65;
constexpr int kExitFailure = 70;

int aggregate_exit_code(zonoid::Aggregate a) {
    switch (a) {
        case zonoid::Aggregate::zonoid: return kExitZonoid;
        case zonoid::Aggregate::not_zonoid: return kExitNotZonoid;
        case zonoid::Aggregate::inconclusive: return kExitInconclusive;
    }
    return kExitFailure;
}

zonoid::BodySpec load_or_exit(const std::string& path) {
    try {
        return zonoid::load_body_file(path);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        std::exit(kExitBadFile);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zonoid decision engine for centrally symmetric convex bodies in R^3 and R^4"};
    app.require_subcommand(1);

    // ---- check -----------------------------------------------------------
    auto* check = app.add_subcommand("check", "decide whether a body is a zonoid");
    std::string body_path, report_path, csv_path;
    zonoid::DecisionConfig cfg;
    bool no_oracle = false;
    check->add_option("body", body_path, "body specification (JSON)")->required();
    check->add_option("--directions", cfg.direction_count, "number of sampled directions");
    check->add_option("--seed", cfg.seed, "seed for randomized schemes and refinement");
    check->add_option("--tol-density", cfg.tol.density, "relative density floor");
    check->add_option("--tol-atom", cfg.tol.atom, "atom acceptance band");
    check->add_option("--piece-degree", cfg.piece_degree, "spectral degree per piece");
    check->add_option("--quad-order", cfg.quad_order, "base quadrature order");
    check->add_option("--oracle-grid", cfg.oracle_grid, "latitude grid of the oracle");
    check->add_option("--refine", cfg.refine_count, "extra directions near the worst margin");
    check->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
    check->add_flag("--no-oracle", no_oracle, "skip the independent oracle");
    check->add_option("--report", report_path, "write the JSON report here");
    check->add_option("--csv", csv_path, "write witness-direction diagnostics CSV here");
    std::string scheme = "fibonacci_sphere";
    check->add_option("--scheme", scheme, "fibonacci_sphere | axis_and_random");

    // ---- profile ---------------------------------------------------------
    auto* profile_cmd = app.add_subcommand("profile", "dump the averaged profile and its "
                                                      "inverse-transform decomposition");
    std::string pbody_path, pout_path;
    std::vector<double> pdir;
    int ppiece_degree = 128, pquad = 16;
    profile_cmd->add_option("body", pbody_path, "body specification (JSON)")->required();
    profile_cmd->add_option("--direction", pdir, "averaging direction components")->expected(3, 4);
    profile_cmd->add_option("--out", pout_path, "output CSV (default stdout)");
    profile_cmd->add_option("--piece-degree", ppiece_degree, "spectral degree per piece");
    profile_cmd->add_option("--quad-order", pquad, "base quadrature order");

    // ---- operators -------------------------------------------------------
    auto* ops_cmd = app.add_subcommand("operators", "print the exact inverse-transform "
                                                    "operators for odd dimension 2m+1");
    int m = 1;
    std::string oout_path;
    ops_cmd->add_option("-m,--m", m, "half-dimension parameter (1 or 2)")->required();
    ops_cmd->add_option("--out", oout_path, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check) {
            cfg.run_oracle = !no_oracle;
            cfg.scheme = scheme == "axis_and_random" ? zonoid::DirectionScheme::axis_and_random
                                                     : zonoid::DirectionScheme::fibonacci_sphere;
            zonoid::BodySpec body = load_or_exit(body_path);
            if (body.dim != 3 && body.dim != 4) {
                std::cerr << "error: supported ambient dimensions are 3 and 4\n";
                return kExitBadDimension;
            }
            zonoid::ZonoidVerdict verdict = zonoid::zonoid_check(body, cfg);
            auto rj = zonoid::verdict_to_json(verdict, body);
            if (!report_path.empty()) {
                std::ofstream out(report_path);
                out << rj.dump(2) << "\n";
            }
            if (!csv_path.empty() && verdict.witness >= 0) {
                zonoid::BodySpec body4 = body.dim == 3 ? zonoid::embed_to_odd(body) : body;
                zonoid::DirectionArtifacts art;
                zonoid::direction_check(body4, verdict.per_direction[verdict.witness].e, cfg,
                                        &art);
                std::ofstream out(csv_path);
                out << zonoid::diagnostics_csv(art.profile, art.distribution);
            }
            std::cout << "aggregate: " << zonoid::ZonoidVerdict::aggregate_name(verdict.aggregate);
            if (verdict.witness >= 0) {
                std::cout << "  worst margin "
                          << verdict.per_direction[verdict.witness].report.margin;
            }
            if (verdict.oracle) {
                std::cout << "  oracle " << (verdict.oracle->feasible ? "feasible" : "infeasible")
                          << " (residual " << verdict.oracle->residual << ")";
            }
            std::cout << "\n";
            return aggregate_exit_code(verdict.aggregate);
        }

        if (*profile_cmd) {
            zonoid::BodySpec body = load_or_exit(pbody_path);
            if (body.dim != 3 && body.dim != 4) {
                std::cerr << "error: supported ambient dimensions are 3 and 4\n";
                return kExitBadDimension;
            }
            zonoid::BodySpec body4 = body.dim == 3 ? zonoid::embed_to_odd(body) : body;
            zonoid::Vec e;
            if (pdir.empty()) {
                e = zonoid::Vec{0.0, 0.0, 1.0, 0.0};
            } else {
                e = pdir;
                if (static_cast<int>(e.size()) == 3) e.push_back(0.0);
                e = zonoid::normalized(e);
            }
            zonoid::DecisionConfig pcfg;
            pcfg.piece_degree = ppiece_degree;
            pcfg.quad_order = pquad;
            zonoid::DirectionArtifacts art;
            zonoid::PositivityReport rep = zonoid::direction_check(body4, e, pcfg, &art);
            std::string csv = zonoid::diagnostics_csv(art.profile, art.distribution);
            if (pout_path.empty()) std::cout << csv;
            else std::ofstream(pout_path) << csv;
            std::cerr << "direction verdict: " << zonoid::PositivityReport::verdict_name(rep.verdict)
                      << " (margin " << rep.margin << ")\n";
            return 0;
        }

        if (*ops_cmd) {
            if (m < 1 || m > 2) {
                std::cerr << "error: m must be 1 or 2\n";
                return kExitBadFile;
            }
            std::ostringstream os;
            auto radon = zonoid::build_radon_inverse(m);
            auto cosine = zonoid::build_cosine_inverse(m);
            os << "radon inverse, m=" << m << "\n" << radon.str();
            os << "cosine inverse, m=" << m << "\n" << cosine.str();
            if (oout_path.empty()) std::cout << os.str();
            else std::ofstream(oout_path) << os.str();
            return 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}
