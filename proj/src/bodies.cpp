#include "zonoid/bodies.hpp"

#include "zonoid/jet.hpp"
#include "zonoid/quadrature.hpp"
#include "zonoid/transforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace zonoid {

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec normalized(const Vec& a) {
    double n = norm(a);
    if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
    Vec r = a;
    for (double& v : r) v /= n;
    return r;
}

BodySpec BodySpec::make_polytope(int dim, std::vector<Vec> verts) {
    BodySpec b;
    b.dim = dim;
    b.kind = BodyKind::polytope;
    b.vertices = std::move(verts);
    return b;
}

BodySpec BodySpec::make_zonotope(int dim, std::vector<Vec> gens) {
    BodySpec b;
    b.dim = dim;
    b.kind = BodyKind::zonotope;
    b.generators = std::move(gens);
    return b;
}

BodySpec BodySpec::make_ball(int dim, double r) {
    BodySpec b;
    b.dim = dim;
    b.kind = BodyKind::ball;
    b.radius = r;
    return b;
}

BodySpec BodySpec::make_revolution(int dim, Vec axis, std::vector<double> cheb) {
    BodySpec b;
    b.dim = dim;
    b.kind = BodyKind::revolution;
    b.axis = std::move(axis);
    b.profile_cheb = std::move(cheb);
    return b;
}

double BodySpec::profile_value(double t) const {
    t = std::clamp(t, -1.0, 1.0);
    if (profile_kind == RevolutionProfile::sqrt_disc)
        return radius * std::sqrt(std::max(0.0, 1.0 - t * t));
    // Clenshaw on [-1,1]
    double b0 = 0.0, b1 = 0.0;
    for (size_t i = profile_cheb.size(); i-- > 1;) {
        double v = 2.0 * t * b0 - b1 + profile_cheb[i];
        b1 = b0;
        b0 = v;
    }
    return t * b0 - b1 + (profile_cheb.empty() ? 0.0 : profile_cheb[0]);
}

BodySpec BodySpec::scaled(double s) const {
    if (s <= 0.0) throw std::invalid_argument("BodySpec::scaled: factor must be positive");
    BodySpec b = *this;
    for (auto& v : b.vertices)
        for (double& x : v) x *= s;
    for (auto& g : b.generators)
        for (double& x : g) x *= s;
    b.radius *= s;
    for (double& c : b.profile_cheb) c *= s;
    if (inner) b.inner = std::make_shared<BodySpec>(inner->scaled(s));
    return b;
}

BodySpec BodySpec::rotated(const std::vector<Vec>& R) const {
    auto apply = [&R](const Vec& x) {
        Vec y(R.size(), 0.0);
        for (size_t i = 0; i < R.size(); ++i) y[i] = dot(R[i], x);
        return y;
    };
    BodySpec b = *this;
    for (auto& v : b.vertices) v = apply(v);
    for (auto& g : b.generators) g = apply(g);
    if (!b.axis.empty()) b.axis = apply(b.axis);
    if (inner) throw std::invalid_argument("BodySpec::rotated: embedded bodies cannot be rotated");
    return b;
}

std::string BodySpec::kind_name() const {
    switch (kind) {
        case BodyKind::polytope: return "polytope";
        case BodyKind::zonotope: return "zonotope";
        case BodyKind::ball: return "ball";
        case BodyKind::revolution: return "revolution_profile";
        case BodyKind::embedded: return "embedded";
    }
    return "?";
}

namespace {

constexpr double kUnitTol = 1e-12;

void check_dim(const BodySpec& body, const Vec& u) {
    if (static_cast<int>(u.size()) != body.dim)
        throw std::invalid_argument("support_eval: direction dimension mismatch");
}

} // namespace

void validate_body(const BodySpec& body) {
    if (body.dim < 2) throw std::invalid_argument("body: ambient dimension must be >= 2");
    switch (body.kind) {
        case BodyKind::polytope: {
            if (body.vertices.empty()) throw std::invalid_argument("polytope: no vertices");
            for (const auto& v : body.vertices) {
                if (static_cast<int>(v.size()) != body.dim)
                    throw std::invalid_argument("polytope: vertex dimension mismatch");
                // central symmetry: the negated vertex must be present
                bool found = false;
                for (const auto& w : body.vertices) {
                    double d = 0.0;
                    for (size_t i = 0; i < v.size(); ++i) d += std::abs(v[i] + w[i]);
                    if (d < 1e-9) { found = true; break; }
                }
                if (!found)
                    throw std::invalid_argument("polytope: vertex set not centrally symmetric");
            }
            break;
        }
        case BodyKind::zonotope: {
            if (body.generators.empty()) throw std::invalid_argument("zonotope: no generators");
            for (const auto& g : body.generators) {
                if (static_cast<int>(g.size()) != body.dim)
                    throw std::invalid_argument("zonotope: generator dimension mismatch");
                if (norm(g) < 1e-14) throw std::invalid_argument("zonotope: zero generator");
            }
            break;
        }
        case BodyKind::ball:
            if (body.radius <= 0.0) throw std::invalid_argument("ball: radius must be positive");
            break;
        case BodyKind::revolution: {
            if (static_cast<int>(body.axis.size()) != body.dim)
                throw std::invalid_argument("revolution: axis dimension mismatch");
            if (std::abs(norm(body.axis) - 1.0) > 1e-9)
                throw std::invalid_argument("revolution: axis must be a unit vector");
            if (body.profile_kind == RevolutionProfile::chebyshev) {
                for (size_t k = 1; k < body.profile_cheb.size(); k += 2)
                    if (std::abs(body.profile_cheb[k]) > 1e-9)
                        throw std::invalid_argument("revolution: profile must be even");
            }
            // sublinearity spot check of the induced support function
            std::mt19937_64 rng(12345);
            std::uniform_real_distribution<double> un(-1.0, 1.0);
            for (int it = 0; it < 50; ++it) {
                Vec x(body.dim), y(body.dim);
                for (int i = 0; i < body.dim; ++i) { x[i] = un(rng); y[i] = un(rng); }
                double t = 0.5 * (un(rng) + 1.0);
                Vec m(body.dim);
                for (int i = 0; i < body.dim; ++i) m[i] = t * x[i] + (1 - t) * y[i];
                double lhs = support_homogeneous(body, m);
                double rhs = t * support_homogeneous(body, x) +
                             (1 - t) * support_homogeneous(body, y);
                if (lhs > rhs + 1e-7 * (1.0 + std::abs(rhs)))
                    throw std::invalid_argument("revolution: profile is not a support profile");
            }
            break;
        }
        case BodyKind::embedded:
            if (!body.inner) throw std::invalid_argument("embedded: missing inner body");
            validate_body(*body.inner);
            break;
    }
}

double support_eval(const BodySpec& body, const Vec& u) {
    check_dim(body, u);
    if (std::abs(norm(u) - 1.0) > kUnitTol)
        throw std::invalid_argument("support_eval: direction must be a unit vector");
    switch (body.kind) {
        case BodyKind::polytope: {
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& v : body.vertices) best = std::max(best, dot(u, v));
            return best;
        }
        case BodyKind::zonotope: {
            double s = 0.0;
            for (const auto& g : body.generators) s += std::abs(dot(u, g));
            return s;
        }
        case BodyKind::ball:
            return body.radius;
        case BodyKind::revolution:
            return body.profile_value(dot(u, body.axis));
        case BodyKind::embedded: {
            Vec p(u.begin(), u.end() - 1);
            return support_homogeneous(*body.inner, p);
        }
    }
    throw std::logic_error("support_eval: unknown kind");
}

double support_homogeneous(const BodySpec& body, const Vec& x) {
    double n = norm(x);
    if (n < 1e-300) return 0.0;
    Vec u(x.size());
    for (size_t i = 0; i < x.size(); ++i) u[i] = x[i] / n;
    return n * support_eval(body, u);
}

BodySpec embed_to_odd(const BodySpec& body) {
    if (body.dim % 2 == 0)
        throw std::invalid_argument("embed_to_odd: body already has even ambient dimension");
    auto pad = [](const Vec& v) {
        Vec w = v;
        w.push_back(0.0);
        return w;
    };
    switch (body.kind) {
        case BodyKind::polytope: {
            std::vector<Vec> vs;
            vs.reserve(body.vertices.size());
            for (const auto& v : body.vertices) vs.push_back(pad(v));
            return BodySpec::make_polytope(body.dim + 1, std::move(vs));
        }
        case BodyKind::zonotope: {
            std::vector<Vec> gs;
            gs.reserve(body.generators.size());
            for (const auto& g : body.generators) gs.push_back(pad(g));
            return BodySpec::make_zonotope(body.dim + 1, std::move(gs));
        }
        case BodyKind::ball: {
            // support becomes r |pi(u)| = r sqrt(1 - u_last^2)
            BodySpec b;
            b.dim = body.dim + 1;
            b.kind = BodyKind::revolution;
            b.axis = Vec(body.dim + 1, 0.0);
            b.axis.back() = 1.0;
            b.profile_kind = RevolutionProfile::sqrt_disc;
            b.radius = body.radius;
            return b;
        }
        default: {
            BodySpec b;
            b.dim = body.dim + 1;
            b.kind = BodyKind::embedded;
            b.inner = std::make_shared<BodySpec>(body);
            return b;
        }
    }
}

std::vector<Vec> orthonormal_complement(const Vec& e) {
    int d = static_cast<int>(e.size());
    std::vector<int> order(d);
    for (int i = 0; i < d; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&e](int i, int j) { return std::abs(e[i]) < std::abs(e[j]); });
    std::vector<Vec> basis;
    basis.push_back(e);
    for (int idx : order) {
        if (static_cast<int>(basis.size()) == d) break;
        Vec v(d, 0.0);
        v[idx] = 1.0;
        for (const auto& b : basis) {
            double p = dot(v, b);
            for (int i = 0; i < d; ++i) v[i] -= p * b[i];
        }
        double n = norm(v);
        if (n > 1e-8) {
            for (double& x : v) x /= n;
            basis.push_back(v);
        }
    }
    if (static_cast<int>(basis.size()) != d)
        throw std::runtime_error("orthonormal_complement: degenerate completion");
    return {basis.begin() + 1, basis.end()};
}

// ---------------------------------------------------------------------------
// averaged profile evaluation
// ---------------------------------------------------------------------------

namespace {

/// Exact average over the circle of the upper envelope of sinusoids
/// f_i(phi) = al[i] + A[i] cos(phi) + B[i] sin(phi).
class CircleEnvelope {
  public:
    double average(const std::vector<double>& al, const std::vector<double>& A,
                   const std::vector<double>& B) {
        size_t n = al.size();
        angles_.clear();
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = i + 1; j < n; ++j) {
                double dA = A[i] - A[j], dB = B[i] - B[j], da = al[i] - al[j];
                double R = std::hypot(dA, dB);
                if (R < 1e-15) continue;
                double c = -da / R;
                if (c < -1.0 || c > 1.0) continue;
                double phi0 = std::atan2(dB, dA);
                double delta = std::acos(std::clamp(c, -1.0, 1.0));
                angles_.push_back(wrap(phi0 + delta));
                angles_.push_back(wrap(phi0 - delta));
            }
        }
        const double two_pi = 2.0 * std::numbers::pi;
        if (angles_.empty()) {
            size_t w = winner(al, A, B, 0.0);
            return al[w]; // cos/sin average out over the full circle
        }
        std::sort(angles_.begin(), angles_.end());
        angles_.push_back(angles_.front() + two_pi);
        double acc = 0.0;
        for (size_t k = 0; k + 1 < angles_.size(); ++k) {
            double p1 = angles_[k], p2 = angles_[k + 1];
            if (p2 - p1 < 1e-15) continue;
            size_t w = winner(al, A, B, 0.5 * (p1 + p2));
            acc += al[w] * (p2 - p1) + A[w] * (std::sin(p2) - std::sin(p1)) -
                   B[w] * (std::cos(p2) - std::cos(p1));
        }
        return acc / two_pi;
    }

  private:
    static double wrap(double phi) {
        const double two_pi = 2.0 * std::numbers::pi;
        phi = std::fmod(phi, two_pi);
        if (phi < 0) phi += two_pi;
        return phi;
    }
    static size_t winner(const std::vector<double>& al, const std::vector<double>& A,
                         const std::vector<double>& B, double phi) {
        double c = std::cos(phi), s = std::sin(phi);
        size_t best = 0;
        double bv = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < al.size(); ++i) {
            double v = al[i] + A[i] * c + B[i] * s;
            if (v > bv) { bv = v; best = i; }
        }
        return best;
    }

    std::vector<double> angles_;
};

/// Rotational average of the support function at latitude z, for bodies in
/// R^4: the mean of h(z e + sqrt(1-z^2) v) over v in the unit 2-sphere of
/// the complement of e.
class ProfileEvaluator {
  public:
    ProfileEvaluator(const BodySpec& body, const Vec& e, int quad_order)
        : body_(body), e_(e), quad_order_(std::max(8, quad_order)) {
        if (body.dim != 4)
            throw std::invalid_argument("zonal_profile: body must live in R^4 (embed first)");
        frame_ = orthonormal_complement(e);
        if (body.kind == BodyKind::polytope) {
            for (const auto& x : body.vertices) {
                axial_.push_back(dot(e, x));
                frame_dots_.push_back({dot(frame_[0], x), dot(frame_[1], x), dot(frame_[2], x)});
            }
        } else if (body.kind == BodyKind::zonotope) {
            for (const auto& g : body.generators) {
                double a = dot(e, g);
                double b2 = std::max(0.0, dot(g, g) - a * a);
                zono_a_.push_back(a);
                zono_b_.push_back(std::sqrt(b2));
            }
        } else if (body.kind == BodyKind::revolution) {
            axis_align_ = dot(e, body.axis);
            Vec perp = body.axis;
            for (int i = 0; i < 4; ++i) perp[i] -= axis_align_ * e[i];
            axis_perp_ = norm(perp);
        }
    }

    /// even-symmetrized average; tol controls the adaptive quadratures
    double eval(double z, double tol) const { return 0.5 * (raw(z, tol) + raw(-z, tol)); }

    double raw(double z, double tol) const {
        z = std::clamp(z, -1.0, 1.0);
        switch (body_.kind) {
            case BodyKind::ball:
                return body_.radius;
            case BodyKind::zonotope: {
                double zp = std::sqrt(std::max(0.0, 1.0 - z * z));
                double s = 0.0;
                for (size_t j = 0; j < zono_a_.size(); ++j)
                    s += mean_abs_affine(z * zono_a_[j], zp * zono_b_[j]);
                return s;
            }
            case BodyKind::polytope:
                return polytope_raw(z, tol);
            case BodyKind::revolution:
                return revolution_raw(z, tol);
            case BodyKind::embedded:
                return generic_raw(z, tol);
        }
        throw std::logic_error("ProfileEvaluator: unknown kind");
    }

    double quad_defect() const { return quad_defect_; }
    double asymmetry_seen(double z, double tol) const {
        return 0.5 * std::abs(raw(z, tol) - raw(-z, tol));
    }

  private:
    double polytope_raw(double z, double tol) const {
        double zp = std::sqrt(std::max(0.0, 1.0 - z * z));
        size_t n = axial_.size();
        std::vector<double> al(n), A(n), B(n);
        CircleEnvelope env;
        auto latitude_avg = [&](double t) {
            double rt = std::sqrt(std::max(0.0, 1.0 - t * t));
            for (size_t i = 0; i < n; ++i) {
                al[i] = z * axial_[i] + zp * t * frame_dots_[i][2];
                A[i] = zp * rt * frame_dots_[i][0];
                B[i] = zp * rt * frame_dots_[i][1];
            }
            return env.average(al, A, B);
        };
        double err = 0.0;
        double val = integrate_adaptive(latitude_avg, -1.0, 1.0, tol, {}, 16, 18, &err);
        quad_defect_ = std::max(quad_defect_, err);
        return 0.5 * val;
    }

    double revolution_raw(double z, double tol) const {
        double zp = std::sqrt(std::max(0.0, 1.0 - z * z));
        double A = axis_align_, B = axis_perp_;
        if (B < 1e-13) {
            // averaging direction coincides with the axis of revolution
            return body_.profile_value(z * A);
        }
        auto f = [&](double t) { return body_.profile_value(z * A + zp * B * t); };
        double err = 0.0;
        double val = integrate_adaptive(f, -1.0, 1.0, tol, {}, 16, 18, &err);
        quad_defect_ = std::max(quad_defect_, err);
        return 0.5 * val;
    }

    /// product quadrature over the orbit sphere with order doubling
    double generic_raw(double z, double tol) const {
        double zp = std::sqrt(std::max(0.0, 1.0 - z * z));
        auto sphere_avg = [&](int nt) {
            const QuadRule& rule = gauss_legendre(nt);
            int nphi = 2 * nt;
            double acc = 0.0;
            Vec u(4);
            for (int it = 0; it < nt; ++it) {
                double t = rule.x[it];
                double rt = std::sqrt(std::max(0.0, 1.0 - t * t));
                double inner = 0.0;
                for (int ip = 0; ip < nphi; ++ip) {
                    double phi = 2.0 * std::numbers::pi * ip / nphi;
                    double c = std::cos(phi), s = std::sin(phi);
                    for (int i = 0; i < 4; ++i)
                        u[i] = z * e_[i] + zp * (rt * (c * frame_[0][i] + s * frame_[1][i]) +
                                                 t * frame_[2][i]);
                    inner += support_homogeneous(body_, u);
                }
                acc += rule.w[it] * inner / nphi;
            }
            return 0.5 * acc;
        };
        int nt = std::max(16, quad_order_);
        double prev = sphere_avg(nt);
        for (int it = 0; it < 4; ++it) {
            nt *= 2;
            double cur = sphere_avg(nt);
            double diff = std::abs(cur - prev);
            prev = cur;
            if (diff <= tol) {
                quad_defect_ = std::max(quad_defect_, diff);
                return cur;
            }
        }
        quad_defect_ = std::max(quad_defect_, 1.0); // recorded as non-convergence
        return prev;
    }

    const BodySpec& body_;
    Vec e_;
    int quad_order_;
    std::vector<Vec> frame_;
    std::vector<double> axial_;
    std::vector<std::array<double, 3>> frame_dots_;
    std::vector<double> zono_a_, zono_b_;
    double axis_align_ = 0.0, axis_perp_ = 0.0;
    mutable double quad_defect_ = 0.0;
};

double rho_to_z(double rho) { return rho / std::sqrt(1.0 + rho * rho); }

/// facial-structure candidates for polytopes: latitudes where a pairwise tie
/// circle degenerates, where a triple tie leaves the orbit sphere, or where
/// two tie circles become tangent
void polytope_candidates(const BodySpec& body, const Vec& e, std::vector<double>& out) {
    auto frame = orthonormal_complement(e);
    size_t n = body.vertices.size();
    std::vector<double> c(n);
    std::vector<std::array<double, 3>> d(n);
    for (size_t i = 0; i < n; ++i) {
        c[i] = dot(e, body.vertices[i]);
        d[i] = {dot(frame[0], body.vertices[i]), dot(frame[1], body.vertices[i]),
                dot(frame[2], body.vertices[i])};
    }
    auto sub = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
        return std::array<double, 3>{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
    };
    auto nrm = [](const std::array<double, 3>& a) {
        return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
    };
    auto dt3 = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
        return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    };

    struct Pair { std::array<double, 3> m; double alpha; };
    std::vector<Pair> pairs;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            auto dij = sub(d[i], d[j]);
            double nd = nrm(dij);
            double dc = c[j] - c[i];
            if (nd < 1e-12) continue;
            pairs.push_back({{dij[0] / nd, dij[1] / nd, dij[2] / nd}, dc / nd});
            if (std::abs(dc) > 1e-12) out.push_back(rho_to_z(nd / std::abs(dc)));
        }
    }
    // triples: tangency of the tie line to the orbit sphere
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            for (size_t k = j + 1; k < n; ++k) {
                auto r1 = sub(d[i], d[j]);
                auto r2 = sub(d[i], d[k]);
                double b1 = c[j] - c[i], b2 = c[k] - c[i];
                // minimal-norm solution of [r1;r2] v = rho (b1,b2)
                double g11 = dt3(r1, r1), g12 = dt3(r1, r2), g22 = dt3(r2, r2);
                double det = g11 * g22 - g12 * g12;
                if (std::abs(det) < 1e-14) continue;
                // |v0|^2 = b^T G^{-1} b * rho^2
                double q = (b1 * (g22 * b1 - g12 * b2) + b2 * (g11 * b2 - g12 * b1)) / det;
                if (q > 1e-14) out.push_back(rho_to_z(1.0 / std::sqrt(q)));
            }
    // tangency of two tie circles
    for (size_t p = 0; p < pairs.size(); ++p)
        for (size_t q = p + 1; q < pairs.size(); ++q) {
            double K = dt3(pairs[p].m, pairs[q].m);
            double a1 = pairs[p].alpha, a2 = pairs[q].alpha;
            double den = a1 * a1 + a2 * a2 - 2.0 * K * a1 * a2;
            double num = 1.0 - K * K;
            if (den > 1e-14 && num > 1e-14) out.push_back(rho_to_z(std::sqrt(num / den)));
        }
}

} // namespace

// ---------------------------------------------------------------------------
// breakpoint detection
// ---------------------------------------------------------------------------

namespace {

/// one-sided derivative-jump indicator at z0, from local fits on both sides
double jump_indicator(const ProfileEvaluator& ev, double z0, double h, double scale,
                      double eval_tol) {
    double lo = std::max(0.0, z0 - h), hi = std::min(1.0, z0 + h);
    if (z0 - lo < 0.2 * h || hi - z0 < 0.2 * h) return 0.0; // too close to the ends
    auto f = [&](double z) { return ev.eval(z, eval_tol); };
    ChebPiece left = ChebPiece::fit(f, lo, z0, 12);
    ChebPiece right = ChebPiece::fit(f, z0, hi, 12);
    auto jl = left.jets(z0, 3);
    auto jr = right.jets(z0, 3);
    double ind = 0.0;
    double hp = 1.0;
    for (int k = 1; k <= 3; ++k) {
        hp *= h;
        ind = std::max(ind, std::abs(jr[k] - jl[k]) * hp);
    }
    return ind / std::max(scale, 1e-30);
}

} // namespace

std::vector<double> detect_breakpoints(const BodySpec& body, const Vec& e_in, int depth,
                                       int n_cap) {
    Vec e = normalized(e_in);
    ProfileEvaluator ev(body, e, 16);
    const double scan_tol = 1e-9;
    double scale = 1e-30;
    for (int i = 0; i <= 16; ++i)
        scale = std::max(scale, std::abs(ev.eval(i / 16.0, scan_tol)));

    std::vector<double> cand;
    switch (body.kind) {
        case BodyKind::ball:
            return {-1.0, 1.0};
        case BodyKind::zonotope: {
            for (size_t j = 0; j < body.generators.size(); ++j) {
                const Vec& g = body.generators[j];
                double a = dot(e, g);
                double b2 = std::max(0.0, dot(g, g) - a * a);
                double gn = norm(g);
                double zj = std::sqrt(b2) / gn;
                cand.push_back(zj); // 0 when the generator is axial, 1 when equatorial
            }
            break;
        }
        case BodyKind::polytope:
            polytope_candidates(body, e, cand);
            cand.push_back(0.0);
            break;
        default:
            cand.push_back(0.0);
            break;
    }

    // generic scan for derivative jumps the candidates may have missed
    {
        const int grid = 384;
        std::vector<double> vals(grid + 1);
        for (int i = 0; i <= grid; ++i) vals[i] = ev.eval(i / double(grid), scan_tol);
        double h = 1.0 / grid;
        for (int i = 2; i + 2 <= grid; ++i) {
            double d3 = std::abs(vals[i + 2] - 2 * vals[i + 1] + 2 * vals[i - 1] - vals[i - 2]);
            if (d3 > 1e3 * h * h * h * scale && d3 > 1e-7 * scale) {
                // refine by descending into the half with the larger indicator
                double lo = (i - 2) * h, hi = (i + 2) * h;
                for (int it = 0; it < depth && hi - lo > 1e-12; ++it) {
                    double m = 0.5 * (lo + hi), hh = 0.25 * (hi - lo);
                    double il = jump_indicator(ev, std::max(1e-6, m - hh), hh, scale, scan_tol);
                    double ir = jump_indicator(ev, std::min(1.0 - 1e-6, m + hh), hh, scale, scan_tol);
                    double im = jump_indicator(ev, m, hh, scale, scan_tol);
                    if (im >= il && im >= ir) { lo = m - hh; hi = m + hh; }
                    else if (il > ir) hi = m;
                    else lo = m;
                }
                cand.push_back(0.5 * (lo + hi));
            }
        }
    }

    std::sort(cand.begin(), cand.end());
    std::vector<double> uniq;
    for (double z : cand) {
        if (z < 1e-9 || z > 1.0 - 1e-9) {
            if (z < 1e-9 && (uniq.empty() || uniq.front() > 1e-9)) uniq.insert(uniq.begin(), 0.0);
            continue;
        }
        if (uniq.empty() || z - uniq.back() > 1e-7) uniq.push_back(z);
    }

    // confirmation by one-sided derivative disagreement
    std::vector<double> confirmed;
    for (size_t idx = 0; idx < uniq.size(); ++idx) {
        double z0 = uniq[idx];
        double gap = 1.0;
        if (idx > 0) gap = std::min(gap, z0 - uniq[idx - 1]);
        if (idx + 1 < uniq.size()) gap = std::min(gap, uniq[idx + 1] - z0);
        gap = std::min({gap, z0 > 0 ? z0 : 1.0, 1.0 - z0});
        double h = std::clamp(0.3 * gap, 1e-5, 0.02);
        if (z0 == 0.0) {
            // kink at the origin shows as an odd component of the derivative
            auto f = [&](double z) { return ev.eval(z, scan_tol); };
            ChebPiece right = ChebPiece::fit(f, 0.0, h, 12);
            auto jr = right.jets(0.0, 3);
            double ind = std::max(std::abs(jr[1]) * h, std::abs(jr[3]) * h * h * h);
            if (ind / scale > 1e-5) confirmed.push_back(0.0);
            continue;
        }
        if (jump_indicator(ev, z0, h, scale, scan_tol) > 1e-5) confirmed.push_back(z0);
    }

    std::vector<double> out;
    for (auto it = confirmed.rbegin(); it != confirmed.rend(); ++it)
        if (*it > 0) out.push_back(-*it);
    out.insert(out.begin(), -1.0);
    for (double z : confirmed) out.push_back(z);
    out.push_back(1.0);
    std::sort(out.begin(), out.end());
    if (static_cast<int>(out.size()) > n_cap)
        throw std::runtime_error("detect_breakpoints: candidate cap exceeded, "
                                 "body too irregular for the configured resolution");
    return out;
}

// ---------------------------------------------------------------------------
// profile construction and access
// ---------------------------------------------------------------------------

ZonalProfile zonal_profile(const BodySpec& body, const Vec& e, int quad_order, int piece_degree,
                           int breakpoint_depth, int n_cap) {
    if (body.dim != 4)
        throw std::invalid_argument("zonal_profile: body must live in R^4 (embed first)");
    if (quad_order < 8) throw std::invalid_argument("zonal_profile: quad_order must be >= 8");
    Vec en = normalized(e);

    ZonalProfile zp;
    zp.direction = en;
    zp.breakpoints = detect_breakpoints(body, en, breakpoint_depth, n_cap);

    ProfileEvaluator ev(body, en, quad_order);
    const double fit_tol = 1e-11;
    auto f = [&](double z) { return ev.eval(z, fit_tol); };

    std::vector<double> cuts{0.0};
    for (double b : zp.breakpoints)
        if (b > 1e-12 && b < 1.0 - 1e-12) cuts.push_back(b);
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    // A single piece would touch both w = 0 and w = 1 and no chart is analytic
    // across both ends; split at the fixed point of sigma (adds no new cut
    // under the sigma closure used downstream).
    if (cuts.size() == 2) cuts.insert(cuts.begin() + 1, std::numbers::sqrt2 / 2.0);

    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        ZonalProfile::Piece piece;
        piece.a = cuts[i];
        piece.b = cuts[i + 1];
        piece.pullback_chart = (i + 2 == cuts.size()); // the piece touching w = 1
        if (piece.pullback_chart) {
            double za = 0.0;
            double zb = std::sqrt(std::max(0.0, 1.0 - piece.a * piece.a));
            auto g = [&](double zeta) { return f(std::sqrt(std::max(0.0, 1.0 - zeta * zeta))); };
            piece.fit = ChebPiece::fit(g, za, zb, piece_degree);
        } else {
            piece.fit = ChebPiece::fit(f, piece.a, piece.b, piece_degree);
        }
        zp.pieces.push_back(std::move(piece));
    }

    double scale = 1e-30, asym = 0.0;
    for (int i = 0; i <= 32; ++i) {
        double z = i / 32.0;
        scale = std::max(scale, std::abs(f(z)));
        asym = std::max(asym, ev.asymmetry_seen(z, fit_tol));
    }
    zp.scale = scale;
    zp.asymmetry = asym;
    zp.quad_defect = ev.quad_defect();
    for (size_t i = 0; i + 1 < zp.pieces.size(); ++i) {
        double c = zp.pieces[i].b;
        zp.continuity_defect = std::max(zp.continuity_defect,
                                        std::abs(zp.eval_piece(i, c) - zp.eval_piece(i + 1, c)));
    }
    return zp;
}

double ZonalProfile::eval_piece(size_t idx, double w) const {
    const Piece& p = pieces[idx];
    if (p.pullback_chart) return p.fit.eval(std::sqrt(std::max(0.0, 1.0 - w * w)));
    return p.fit.eval(w);
}

const ZonalProfile::Piece& ZonalProfile::piece_at(double w, int side) const {
    w = std::abs(w);
    const double snap = 1e-13;
    for (size_t i = 0; i < pieces.size(); ++i) {
        const Piece& p = pieces[i];
        if (std::abs(w - p.a) <= snap) {
            if (side < 0 && i > 0) return pieces[i - 1];
            return p;
        }
        if (std::abs(w - p.b) <= snap) {
            if (side > 0 && i + 1 < pieces.size()) return pieces[i + 1];
            return p;
        }
        if (w > p.a && w < p.b) return p;
    }
    return pieces.back();
}

double ZonalProfile::eval(double z) const {
    double w = std::abs(z);
    const Piece& p = piece_at(w);
    if (p.pullback_chart) return p.fit.eval(std::sqrt(std::max(0.0, 1.0 - w * w)));
    return p.fit.eval(w);
}

std::vector<double> ZonalProfile::jets(double w, int order, int side) const {
    w = std::abs(w);
    const Piece& p = piece_at(w, side);
    if (!p.pullback_chart) return p.fit.jets(w, order);
    // chain through zeta = sqrt(1 - w^2)
    Jet3 zeta = sigma_jet(w);
    auto fz = p.fit.jets(zeta.v, order);
    Jet3 outer{fz[0], order > 0 ? fz[1] : 0.0, order > 1 ? fz[2] : 0.0, order > 2 ? fz[3] : 0.0};
    Jet3 composed = Jet3::compose(outer, zeta);
    std::vector<double> out{composed.v};
    if (order > 0) out.push_back(composed.d1);
    if (order > 1) out.push_back(composed.d2);
    if (order > 2) out.push_back(composed.d3);
    return out;
}

std::vector<double> ZonalProfile::pullback_jets(double z, int order, int side,
                                                bool* divergent) const {
    if (divergent) *divergent = false;
    double az = std::abs(z);
    double w = std::sqrt(std::max(0.0, 1.0 - az * az));
    // z above a cut means w below the mirrored cut: flip the side
    const Piece& p = piece_at(w, -side);
    if (p.pullback_chart) {
        // the fitted coordinate is exactly |z|
        auto out = p.fit.jets(az, order);
        if (z < 0) { // odd-order chain signs for z -> |z|
            for (int k = 1; k <= order; k += 2) out[k] = -out[k];
        }
        return out;
    }
    if (az > 1.0 - 1e-12) {
        if (divergent) *divergent = true;
        return std::vector<double>(order + 1, std::numeric_limits<double>::quiet_NaN());
    }
    auto ew = p.fit.jets(w, order);
    Jet3 sw = sigma_jet(z);
    Jet3 outer{ew[0], order > 0 ? ew[1] : 0.0, order > 1 ? ew[2] : 0.0, order > 2 ? ew[3] : 0.0};
    Jet3 composed = Jet3::compose(outer, sw);
    std::vector<double> out{composed.v};
    if (order > 0) out.push_back(composed.d1);
    if (order > 1) out.push_back(composed.d2);
    if (order > 2) out.push_back(composed.d3);
    return out;
}

std::vector<double> ZonalProfile::positive_cuts() const {
    std::vector<double> cuts;
    cuts.push_back(0.0);
    for (const auto& p : pieces) cuts.push_back(p.b);
    return cuts;
}

} // namespace zonoid
