#include "zonoid/body_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace zonoid {

using nlohmann::json;
using nlohmann::ordered_json;

BodySpec body_from_json(const json& j) {
    if (!j.contains("dimension") || !j.contains("kind"))
        throw std::invalid_argument("body file: missing dimension or kind");
    int dim = j.at("dimension").get<int>();
    std::string kind = j.at("kind").get<std::string>();
    auto vectors = [dim](const json& arr) {
        std::vector<Vec> out;
        for (const auto& row : arr) {
            Vec v = row.get<Vec>();
            if (static_cast<int>(v.size()) != dim)
                throw std::invalid_argument("body file: vector length != dimension");
            out.push_back(std::move(v));
        }
        return out;
    };
    BodySpec body;
    if (kind == "polytope") {
        body = BodySpec::make_polytope(dim, vectors(j.at("vertices")));
    } else if (kind == "zonotope") {
        body = BodySpec::make_zonotope(dim, vectors(j.at("generators")));
    } else if (kind == "ball") {
        body = BodySpec::make_ball(dim, j.at("radius").get<double>());
    } else if (kind == "revolution_profile") {
        Vec axis = j.at("axis").get<Vec>();
        auto cheb = j.at("profile_cheb").get<std::vector<double>>();
        body = BodySpec::make_revolution(dim, std::move(axis), std::move(cheb));
    } else {
        throw std::invalid_argument("body file: unknown kind '" + kind + "'");
    }
    validate_body(body);
    return body;
}

json body_to_json(const BodySpec& body) {
    json j;
    j["dimension"] = body.dim;
    j["kind"] = body.kind_name();
    switch (body.kind) {
        case BodyKind::polytope: j["vertices"] = body.vertices; break;
        case BodyKind::zonotope: j["generators"] = body.generators; break;
        case BodyKind::ball: j["radius"] = body.radius; break;
        case BodyKind::revolution:
            j["axis"] = body.axis;
            if (body.profile_kind == RevolutionProfile::sqrt_disc) {
                j["profile"] = "sqrt_disc";
                j["radius"] = body.radius;
            } else {
                j["profile_cheb"] = body.profile_cheb;
            }
            break;
        case BodyKind::embedded: j["inner"] = body_to_json(*body.inner); break;
    }
    return j;
}

BodySpec load_body_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open body file: " + path);
    json j;
    in >> j;
    return body_from_json(j);
}

namespace {

ordered_json report_to_json(const PositivityReport& rep) {
    ordered_json r;
    r["verdict"] = PositivityReport::verdict_name(rep.verdict);
    r["margin"] = rep.margin;
    r["min_density"] = rep.min_density;
    r["min_density_at"] = rep.min_density_at;
    r["interior_atoms_ok"] = rep.interior_atoms_ok;
    r["boundary_plus"] = rep.boundary_plus;
    r["boundary_minus"] = rep.boundary_minus;
    r["scale"] = rep.scale;
    r["extraction_uncertainty"] = rep.extraction_uncertainty;
    if (!rep.detail.empty()) r["detail"] = rep.detail;
    return r;
}

} // namespace

ordered_json verdict_to_json(const ZonoidVerdict& verdict, const BodySpec& body) {
    ordered_json j;
    j["schema"] = "zonoid-report/1";
    j["body"] = body_to_json(body);
    ordered_json cfg;
    cfg["direction_count"] = verdict.config.direction_count;
    cfg["direction_scheme"] = verdict.config.scheme == DirectionScheme::fibonacci_sphere
                                  ? "fibonacci_sphere"
                                  : "axis_and_random";
    cfg["seed"] = verdict.config.seed;
    cfg["piece_degree"] = verdict.config.piece_degree;
    cfg["quad_order"] = verdict.config.quad_order;
    cfg["oracle_grid"] = verdict.config.oracle_grid;
    cfg["refine_count"] = verdict.config.refine_count;
    cfg["tolerances"] = {{"density", verdict.config.tol.density},
                         {"atom", verdict.config.tol.atom},
                         {"neg", verdict.config.tol.neg},
                         {"oracle", verdict.config.tol.oracle}};
    j["config"] = cfg;
    j["aggregate"] = ZonoidVerdict::aggregate_name(verdict.aggregate);
    if (!verdict.note.empty()) j["note"] = verdict.note;
    j["witness_index"] = verdict.witness;
    if (verdict.witness >= 0) j["witness_direction"] = verdict.per_direction[verdict.witness].e;
    ordered_json dirs = ordered_json::array();
    for (const auto& d : verdict.per_direction) {
        ordered_json e;
        e["direction"] = d.e;
        if (!d.error.empty()) e["error"] = d.error;
        else e["report"] = report_to_json(d.report);
        dirs.push_back(std::move(e));
    }
    j["directions"] = std::move(dirs);
    if (verdict.oracle) {
        ordered_json o;
        o["feasible"] = verdict.oracle->feasible;
        o["residual"] = verdict.oracle->residual;
        o["scale"] = verdict.oracle->scale;
        j["oracle"] = std::move(o);
    }
    return j;
}

std::string diagnostics_csv(const ZonalProfile& profile, const IntervalDistribution& dist,
                            int samples) {
    std::ostringstream os;
    os.precision(15);
    os << "z,eta,density\n";
    for (int i = 0; i < samples; ++i) {
        double z = -1.0 + 2.0 * i / (samples - 1);
        double zs = std::clamp(z, -1.0 + 1e-7, 1.0 - 1e-7);
        os << z << "," << profile.eval(zs) << "," << dist.density(zs) << "\n";
    }
    os << "\nlocation,order,coefficient,uncertainty\n";
    for (const Atom& a : dist.atoms)
        os << a.x << "," << a.order << "," << a.coeff << "," << a.uncertainty << "\n";
    return os.str();
}

} // namespace zonoid
