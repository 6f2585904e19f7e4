#include "zonoid/distribution.hpp"

#include "zonoid/jet.hpp"
#include "zonoid/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace zonoid {

namespace {

long long binom(int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

Jet3 pow_jet(const Jet3& a, int n) {
    Jet3 r = Jet3::constant(1.0);
    for (int i = 0; i < n; ++i) r = r * a;
    return r;
}

/// B(s): 1 for s <= 1, 0 for s >= 4, smooth partition in between; the bump
/// cutoff expressed in the squared variable.
Jet3 bump_of_square(const Jet3& s) {
    if (s.v <= 1.0) return Jet3::constant(1.0);
    if (s.v >= 4.0) return Jet3::constant(0.0);
    auto theta = [](const Jet3& a) { return Jet3::exp(-Jet3::reciprocal(a)); };
    Jet3 up = theta(Jet3::constant(4.0) - s);
    Jet3 down = theta(s - Jet3::constant(1.0));
    return up / (up + down);
}

double factorial(int j) {
    double r = 1.0;
    for (int i = 2; i <= j; ++i) r *= i;
    return r;
}

} // namespace

double latitude_weight(double z) {
    return sphere_volume(2) * std::sqrt(std::max(0.0, 1.0 - z * z));
}

std::array<double, 4> latitude_weight_jets(double z) {
    Jet3 s = sigma_jet(z);
    double v = sphere_volume(2);
    return {v * s.v, v * s.d1, v * s.d2, v * s.d3};
}

// ---------------------------------------------------------------------------
// test bumps
// ---------------------------------------------------------------------------

double TestBump::eval(double z) const {
    auto single = [this](double y) {
        double t = (y - x) / eps;
        if (std::abs(t) >= 2.0) return 0.0;
        double chi = bump_of_square(Jet3::constant(t * t)).v;
        double p = 1.0;
        for (int i = 0; i < j; ++i) p *= (y - x);
        return p / factorial(j) * chi;
    };
    if (x == 0.0) return single(z);
    return single(z) + single(-z);
}

std::array<double, 4> TestBump::sigma_pullback_jets(double z) const {
    if (x == 0.0) {
        // even monomial bump: a function of w^2 = 1 - z^2
        Jet3 r{1.0 - z * z, -2.0 * z, -2.0, 0.0};
        Jet3 f = pow_jet(r, j / 2) * bump_of_square((1.0 / (eps * eps)) * r);
        f = (1.0 / factorial(j)) * f;
        return f.as_array();
    }
    // bump centered at x > 0: only the positive branch of sigma contributes
    Jet3 y = sigma_jet(z) - Jet3::constant(x);
    if (std::abs(y.v) >= 2.0 * eps) return {0.0, 0.0, 0.0, 0.0};
    Jet3 f = pow_jet(y, j) * bump_of_square((1.0 / (eps * eps)) * (y * y));
    f = (1.0 / factorial(j)) * f;
    return f.as_array();
}

std::pair<double, double> TestBump::pullback_support() const {
    auto sig = [](double w) { return std::sqrt(std::max(0.0, 1.0 - w * w)); };
    double wlo = std::max(0.0, x - 2.0 * eps), whi = std::min(1.0, x + 2.0 * eps);
    if (x == 0.0) return {sig(whi), 1.0};
    return {sig(whi), sig(wlo)};
}

// ---------------------------------------------------------------------------
// jump calculus
// ---------------------------------------------------------------------------

std::vector<Atom> atoms_times_smooth(const std::vector<Atom>& atoms,
                                     const std::array<double, 4>& factor_jets, double x) {
    std::array<double, 4> out{};
    for (const Atom& a : atoms) {
        int k = a.order;
        // psi * D^k delta = (-1)^k sum_i (-1)^i C(k,i) psi^{(k-i)}(x) D^i delta
        for (int i = 0; i <= k; ++i) {
            double sign = ((k + i) % 2 == 0) ? 1.0 : -1.0;
            out[i] += a.coeff * sign * binom(k, i) * factor_jets[k - i];
        }
    }
    std::vector<Atom> result;
    for (int i = 0; i < 4; ++i)
        if (out[i] != 0.0) result.push_back({x, i, out[i], 0.0});
    return result;
}

std::vector<Atom> jump_calculus_atoms(const std::vector<double>& jets_left,
                                      const std::vector<double>& jets_right,
                                      const ZonalDiffOperator& op, double x) {
    int K = op.order();
    if (static_cast<int>(jets_left.size()) < K || static_cast<int>(jets_right.size()) < K)
        throw std::invalid_argument("jump_calculus_atoms: need one-sided jets up to order-1");
    for (double v : jets_left)
        if (!std::isfinite(v)) throw std::invalid_argument("jump_calculus_atoms: divergent jet");
    for (double v : jets_right)
        if (!std::isfinite(v)) throw std::invalid_argument("jump_calculus_atoms: divergent jet");

    std::array<double, 4> total{};
    for (int k = 1; k <= K; ++k) {
        if (op.coeffs[k].is_zero()) continue;
        // D^k of the piecewise function contributes [G^{(i)}] D^{k-1-i} delta_x
        for (int i = 0; i <= k - 1; ++i) {
            double jump = jets_right[i] - jets_left[i];
            if (jump == 0.0) continue;
            int del_order = k - 1 - i;
            // fold the polynomial coefficient in: P_k * D^j delta
            for (int i2 = 0; i2 <= del_order; ++i2) {
                double sign = ((del_order + i2) % 2 == 0) ? 1.0 : -1.0;
                double pder = op.coeffs[k].derivative_value(del_order - i2, x);
                total[i2] += jump * sign * binom(del_order, i2) * pder;
            }
        }
    }
    double s = op.scale.value();
    std::vector<Atom> out;
    for (int i = 0; i < 4; ++i)
        if (total[i] != 0.0) out.push_back({x, i, s * total[i], 0.0});
    return out;
}

namespace {

/// Is op the collapsed-form inverse for expansion parameter m = 1?
bool is_m1_cosine_inverse(const ZonalDiffOperator& op) {
    static const ZonalDiffOperator ref = build_cosine_inverse(1);
    return op.pre_substitution && op.coeffs == ref.coeffs && op.scale == ref.scale;
}

/// m = 1 density times w, collected so that no negative power of w appears:
///   w * lambda = scale * (3 w eta - 3 w^2 eta' + 6 z^2 w eta'' - z^4 eta''')
/// with eta derivatives taken in the latitude variable w. Exact for the m = 1
/// operator (the chain rule through sigma collapses via w^2 + z^2 = 1), and
/// stable at the poles where the generic jet composition cancels badly.
double density_times_w_m1(const ZonalProfile& eta, const ZonalDiffOperator& op, double z,
                          int w_side) {
    double az = std::abs(z);
    double w = std::sqrt(std::max(0.0, 1.0 - az * az));
    auto j = eta.jets(w, 3, w_side);
    double z2 = az * az;
    double num = 3.0 * w * j[0] - 3.0 * w * w * j[1] + 6.0 * z2 * w * j[2] - z2 * z2 * j[3];
    return op.scale.value() * num;
}

/// density evaluator choosing the chart that is numerically stable at z
double density_value(const ZonalProfile& eta, const ZonalDiffOperator& op, double z, int side,
                     bool* divergent = nullptr) {
    double az = std::abs(z);
    if (divergent) *divergent = false;
    if (is_m1_cosine_inverse(op) && az >= 0.72) {
        double w = std::sqrt(std::max(1e-300, 1.0 - az * az));
        return density_times_w_m1(eta, op, z, -side) / w;
    }
    bool div = false;
    auto jets = eta.pullback_jets(z, op.order(), side, &div);
    if (div) {
        if (divergent) *divergent = true;
        return std::numeric_limits<double>::quiet_NaN();
    }
    return op.apply_jets(jets, z);
}

} // namespace

// ---------------------------------------------------------------------------
// mollified extraction
// ---------------------------------------------------------------------------

std::vector<Atom> mollified_extract_with(const std::function<double(const TestBump&)>& pair_fn,
                                         const std::function<double(double, int)>& density_fn,
                                         const std::vector<double>& density_knots, double x,
                                         double eps, int max_order, bool boundary) {
    auto density_pairing = [&](const TestBump& bump) {
        // subtract the known absolutely continuous part over the bump support
        double lo = std::max(0.0, x - 2.0 * bump.eps);
        double hi = std::min(1.0, x + 2.0 * bump.eps);
        std::vector<double> knots = density_knots;
        knots.push_back(x);
        auto f = [&](double s) {
            int side = s < x ? -1 : +1;
            return density_fn(s, side) * bump.eval(s) * latitude_weight(s);
        };
        double hi_clip = std::min(hi, 1.0 - 1e-9);
        if (hi_clip <= lo) return 0.0;
        return 2.0 * integrate_adaptive(f, lo, hi_clip, 1e-11, knots, 16, 14);
    };

    std::vector<Atom> out;
    for (int j = 0; j <= max_order; ++j) {
        if (x == 0.0 && j % 2 == 1) continue; // forced to zero by evenness
        double val[2];
        for (int lev = 0; lev < 2; ++lev) {
            TestBump bump{x, j, eps / (lev + 1.0)};
            double A = pair_fn(bump);
            double D = density_pairing(bump);
            double sym = (x == 0.0) ? 1.0 : 2.0;
            double sign = (j % 2 == 0) ? 1.0 : -1.0;
            val[lev] = sign * (A - D) / sym;
        }
        double p = j + (boundary ? 1.5 : 1.0);
        double fac = std::pow(2.0, p) - 1.0;
        double extrapolated = val[1] + (val[1] - val[0]) / fac;
        double uncertainty = std::abs(val[1] - val[0]) / fac;
        out.push_back({x, j, extrapolated, uncertainty});
    }
    return out;
}

namespace {

/// full-interval pairing <Lambda, psi> = Int eta(z) (t^{-1} psi)(z) W(z) dz
double profile_pairing(const ZonalProfile& eta, const ZonalDiffOperator& op,
                       const TestBump& bump) {
    auto [zlo, zhi] = bump.pullback_support();
    if (zhi <= zlo) return 0.0;
    auto integrand = [&](double z) {
        auto jets = bump.sigma_pullback_jets(z);
        std::vector<double> jv(jets.begin(), jets.end());
        return eta.eval(z) * op.apply_jets(jv, z) * latitude_weight(z);
    };
    // split at profile kinks and at the pullbacks of the bump transition edges
    std::vector<double> knots;
    for (double c : eta.positive_cuts()) knots.push_back(c);
    auto sig = [](double w) { return std::sqrt(std::max(0.0, 1.0 - w * w)); };
    for (double s : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) {
        double w = bump.x + s * bump.eps;
        if (w > 0.0 && w < 1.0) knots.push_back(sig(w));
    }
    double zhi_clip = std::min(zhi, 1.0 - 1e-10);
    if (zhi_clip <= zlo) return 0.0;
    return 2.0 * integrate_adaptive(integrand, zlo, zhi_clip, 1e-11, knots, 16, 14);
}

} // namespace

std::vector<Atom> mollified_atom_extract(const ZonalProfile& eta, const ZonalDiffOperator& op,
                                         double x, double eps) {
    x = std::abs(x);
    if (x > 1.0) throw std::invalid_argument("mollified_atom_extract: x outside [-1,1]");
    bool boundary = x > 1.0 - 1e-12;
    if (!boundary && x > 0.0 && (x - 2.0 * eps <= 0.0 || x + 2.0 * eps >= 1.0))
        throw std::invalid_argument("mollified_atom_extract: eps too large for this location");

    auto pair_fn = [&](const TestBump& b) { return profile_pairing(eta, op, b); };
    auto density_fn = [&](double s, int side) {
        bool div = false;
        double v = density_value(eta, op, s, side, &div);
        return div ? 0.0 : v;
    };
    std::vector<double> knots = eta.positive_cuts();
    return mollified_extract_with(pair_fn, density_fn, knots, x, eps, op.order(), boundary);
}

// ---------------------------------------------------------------------------
// distribution assembly
// ---------------------------------------------------------------------------

double IntervalDistribution::DensityPiece::eval(double z) const {
    z = std::abs(z);
    if (!pole_chart) return fit.eval(z);
    double zeta = std::sqrt(std::max(0.0, 1.0 - z * z));
    if (zeta < 1e-12) zeta = 1e-12;
    return fit.eval(zeta) / zeta;
}

double IntervalDistribution::density(double z) const {
    z = std::abs(z);
    for (const auto& p : pieces)
        if (z <= p.b + 1e-14) return p.eval(z);
    return pieces.empty() ? 0.0 : pieces.back().eval(z);
}

std::vector<Atom> IntervalDistribution::atoms_at(double x) const {
    std::vector<Atom> out;
    for (const Atom& a : atoms)
        if (std::abs(a.x - x) < 1e-9) out.push_back(a);
    return out;
}

IntervalDistribution inverse_cosine_distribution(const ZonalProfile& eta,
                                                 const ZonalDiffOperator& op,
                                                 const ToleranceSet& tol, int piece_degree) {
    if (!op.pre_substitution)
        throw std::invalid_argument("inverse_cosine_distribution: operator must act on the "
                                    "sigma pullback");
    IntervalDistribution dist;
    dist.direction = eta.direction;
    dist.profile_scale = eta.scale;

    // sigma-closed cut set on [0,1]
    std::vector<double> cuts{0.0, 1.0};
    for (double c : eta.positive_cuts()) {
        cuts.push_back(c);
        cuts.push_back(std::sqrt(std::max(0.0, 1.0 - c * c)));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-9; }),
               cuts.end());
    if (cuts.back() < 1.0 - 1e-9) cuts.push_back(1.0);
    dist.cuts = cuts;

    auto lam = [&](double z, int side) { return density_value(eta, op, z, side); };
    const bool stable_pole = is_m1_cosine_inverse(op);

    // density pieces
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        IntervalDistribution::DensityPiece piece;
        piece.a = cuts[i];
        piece.b = cuts[i + 1];
        piece.pole_chart = (i + 2 == cuts.size()); // touches z = 1
        if (piece.pole_chart) {
            double zeta_max = std::sqrt(std::max(0.0, 1.0 - piece.a * piece.a));
            auto f = [&](double zeta) {
                double zz = std::clamp(zeta, 1e-9, zeta_max);
                double z = std::sqrt(std::max(0.0, 1.0 - zz * zz));
                if (stable_pole) return density_times_w_m1(eta, op, z, 0);
                return zz * lam(z, 0);
            };
            piece.fit = ChebPiece::fit(f, 0.0, zeta_max, piece_degree);
        } else {
            auto f = [&](double z) {
                int side = 0;
                if (z - piece.a < 1e-13) side = +1;
                if (piece.b - z < 1e-13) side = -1;
                return lam(z, side);
            };
            piece.fit = ChebPiece::fit(f, piece.a, piece.b, piece_degree);
        }
        dist.pieces.push_back(std::move(piece));
    }

    // sampled minimum of the density (pointwise evaluator, ends clipped)
    dist.min_density = std::numeric_limits<double>::infinity();
    for (const auto& piece : dist.pieces) {
        int ns = 160;
        for (int k = 0; k <= ns; ++k) {
            double u = std::cos(std::numbers::pi * k / ns);
            double z = 0.5 * (piece.a + piece.b) + 0.5 * (piece.b - piece.a) * u;
            z = std::clamp(z, piece.a + 1e-9, std::min(piece.b - 1e-9, 1.0 - 1e-7));
            double v = lam(z, 0);
            if (std::isfinite(v) && v < dist.min_density) {
                dist.min_density = v;
                dist.min_density_at = z;
            }
        }
    }

    // atoms: interior cuts by jump calculus (mollified fallback), poles mollified
    const double drop = 1e-9 * std::max(1.0, eta.scale);
    auto add_atoms = [&](const std::vector<Atom>& found) {
        for (const Atom& a : found) {
            if (std::abs(a.coeff) < drop && a.uncertainty < drop) continue;
            dist.atoms.push_back(a);
            if (a.x > 1e-9) {
                Atom mirror = a;
                mirror.x = -a.x;
                mirror.coeff = (a.order % 2 == 0) ? a.coeff : -a.coeff;
                dist.atoms.push_back(mirror);
            }
        }
    };

    std::vector<double> atom_candidates{0.0};
    for (double b : eta.breakpoints)
        if (b >= 0.0) atom_candidates.push_back(std::sqrt(std::max(0.0, 1.0 - b * b)));
    std::sort(atom_candidates.begin(), atom_candidates.end());
    atom_candidates.erase(std::unique(atom_candidates.begin(), atom_candidates.end(),
                                      [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                          atom_candidates.end());

    auto is_atom_candidate = [&](double x) {
        for (double c : atom_candidates)
            if (std::abs(c - x) < 1e-9) return true;
        return false;
    };

    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double x = cuts[i];
        if (!is_atom_candidate(x)) continue;
        bool divL = false, divR = false;
        std::vector<double> jl, jr;
        if (x == 0.0) {
            jr = eta.pullback_jets(0.0, op.order(), +1, &divR);
            jl = jr;
            for (size_t k = 1; k < jl.size(); k += 2) jl[k] = -jl[k];
            divL = divR;
        } else {
            jl = eta.pullback_jets(x, op.order(), -1, &divL);
            jr = eta.pullback_jets(x, op.order(), +1, &divR);
        }
        if (!divL && !divR) {
            auto raw = jump_calculus_atoms(jl, jr, op, x);
            add_atoms(atoms_times_smooth(raw, latitude_weight_jets(x), x));
        } else {
            double gap = std::min(x > 0 ? cuts[i] - cuts[i - 1] : cuts[1], cuts[i + 1] - x);
            double eps = std::clamp(0.2 * gap, 1e-4, 0.03);
            add_atoms(mollified_atom_extract(eta, op, x, eps));
        }
    }
    {
        double gap = 1.0 - cuts[cuts.size() - 2];
        double eps = std::clamp(0.2 * gap, 1e-4, 0.03);
        add_atoms(mollified_atom_extract(eta, op, 1.0, eps));
    }

    std::sort(dist.atoms.begin(), dist.atoms.end(), [](const Atom& a, const Atom& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.order < b.order;
    });
    return dist;
}

// ---------------------------------------------------------------------------
// certificate and verdict
// ---------------------------------------------------------------------------

namespace {

/// density fit of a piece in the plain z chart (pole pieces are clipped)
ChebPiece plain_chart_fit(const IntervalDistribution::DensityPiece& piece, int degree = 64) {
    double b = piece.pole_chart ? std::min(piece.b - 1e-6, 1.0 - 1e-6) : piece.b;
    if (!piece.pole_chart) return piece.fit;
    auto f = [&](double z) { return piece.eval(z); };
    return ChebPiece::fit(f, piece.a, b, degree);
}

} // namespace

ChebPiece double_primitive(const IntervalDistribution& dist, int piece_index) {
    if (piece_index < 0 || piece_index >= static_cast<int>(dist.pieces.size()))
        throw std::out_of_range("double_primitive: bad piece index");
    const auto& piece = dist.pieces[piece_index];
    ChebPiece fit = plain_chart_fit(piece);
    return fit.double_primitive(0.5 * (fit.a() + fit.b()));
}

ConvexExtension convex_extension_check(const IntervalDistribution& dist,
                                       const ToleranceSet& tol) {
    ConvexExtension ext;
    double floor = -tol.density * std::max(dist.profile_scale, 1e-30);
    if (dist.min_density < floor) return ext;
    for (const Atom& a : dist.atoms) {
        if (std::abs(a.x) >= 1.0 - 1e-9) continue; // endpoint atoms are the other condition
        if (a.order > 0 && std::abs(a.coeff) > tol.atom) return ext;
        if (a.order == 0 && a.coeff < -tol.atom) return ext;
    }
    ext.ok = true;

    // glue the double primitives over (-1,1): mirrored pieces first, then the
    // positive side; slope jumps at interior cuts equal the atom masses
    struct Glued { double a, b; ChebPiece prim; bool mirrored; };
    std::vector<Glued> parts;
    for (size_t i = dist.pieces.size(); i-- > 0;) {
        ChebPiece p = plain_chart_fit(dist.pieces[i]);
        parts.push_back({-p.b(), -p.a(), p.double_primitive(0.5 * (p.a() + p.b())), true});
    }
    for (size_t i = 0; i < dist.pieces.size(); ++i) {
        ChebPiece p = plain_chart_fit(dist.pieces[i]);
        parts.push_back({p.a(), p.b(), p.double_primitive(0.5 * (p.a() + p.b())), false});
    }

    auto piece_val = [](const Glued& g, double z) {
        return g.mirrored ? g.prim.eval(-z) : g.prim.eval(z);
    };
    auto piece_slope = [](const Glued& g, double z) {
        ChebPiece d = g.prim.derivative();
        return g.mirrored ? -d.eval(-z) : d.eval(z);
    };
    auto mass_at = [&](double x) {
        double m = 0.0;
        for (const Atom& a : dist.atoms)
            if (a.order == 0 && std::abs(a.x - x) < 1e-9) m += a.coeff;
        return m;
    };

    double value = 0.0, slope = 0.0;
    for (size_t i = 0; i < parts.size(); ++i) {
        const Glued& g = parts[i];
        if (i == 0) {
            ext.alpha.push_back(0.0);
            ext.beta.push_back(0.0);
        } else {
            double jump = mass_at(g.a);
            double want_slope = slope + jump;
            double a = want_slope - piece_slope(g, g.a);
            double b = value - piece_val(g, g.a) - a * g.a;
            ext.alpha.push_back(a);
            ext.beta.push_back(b);
        }
        ext.piece_left.push_back(g.a);
        double a = ext.alpha.back(), b = ext.beta.back();
        value = piece_val(g, g.b) + a * g.b + b;
        slope = piece_slope(g, g.b) + a;
    }
    return ext;
}

PositivityReport positivity_verdict(const IntervalDistribution& dist, const ToleranceSet& tol) {
    PositivityReport rep;
    double scale = std::max(dist.profile_scale, 1e-30);
    rep.scale = scale;
    rep.min_density = dist.min_density;
    rep.min_density_at = dist.min_density_at;

    double margin = dist.min_density / scale; // normalized worst margin
    bool ok = dist.min_density >= -tol.density * scale;
    bool reject = dist.min_density < -tol.neg * scale;
    double unc = 0.0;

    for (const Atom& a : dist.atoms) {
        bool endpoint = std::abs(std::abs(a.x) - 1.0) < 1e-9;
        unc = std::max(unc, a.uncertainty);
        if (a.order == 0) {
            margin = std::min(margin, a.coeff / scale);
            if (a.coeff < -tol.atom * std::max(1.0, scale)) {
                ok = false;
                if (!endpoint) rep.interior_atoms_ok = false;
            }
            if (a.coeff < -tol.neg * scale) reject = true;
        } else {
            margin = std::min(margin, -std::abs(a.coeff) / scale);
            if (std::abs(a.coeff) > tol.atom * std::max(1.0, scale)) {
                ok = false;
                if (!endpoint) rep.interior_atoms_ok = false;
            }
            if (std::abs(a.coeff) > tol.neg * scale) reject = true;
        }
        if (endpoint && a.order < 4) {
            if (a.x > 0) rep.boundary_plus[a.order] += a.coeff;
            else rep.boundary_minus[a.order] += a.coeff;
        }
    }

    rep.margin = margin;
    rep.extraction_uncertainty = unc;
    if (ok && unc <= tol.atom_extract * std::max(1.0, scale))
        rep.verdict = PositivityReport::Verdict::nonnegative;
    else if (reject && unc <= 0.5 * tol.neg * scale)
        rep.verdict = PositivityReport::Verdict::negative;
    else
        rep.verdict = PositivityReport::Verdict::inconclusive;
    return rep;
}

const char* PositivityReport::verdict_name(Verdict v) {
    switch (v) {
        case Verdict::nonnegative: return "nonnegative";
        case Verdict::negative: return "negative";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

} // namespace zonoid
