#include "zonoid/cheb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace zonoid {

ChebPiece ChebPiece::fit(const std::function<double(double)>& f, double a, double b, int degree) {
    if (!(a < b)) throw std::invalid_argument("ChebPiece::fit: need a < b");
    if (degree < 1) throw std::invalid_argument("ChebPiece::fit: degree must be >= 1");
    int n = degree;
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    std::vector<double> fv(n + 1);
    for (int j = 0; j <= n; ++j) {
        double x = std::cos(std::numbers::pi * j / n);
        double v = f(mid + half * x);
        if (!std::isfinite(v)) throw std::runtime_error("ChebPiece::fit: non-finite sample");
        fv[j] = v;
    }
    // Lobatto (type I DCT) projection; first/last terms carry weight 1/2.
    std::vector<double> c(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        double acc = 0.5 * (fv[0] + (k % 2 == 0 ? fv[n] : -fv[n]));
        for (int j = 1; j < n; ++j) acc += fv[j] * std::cos(std::numbers::pi * j * k / n);
        c[k] = 2.0 * acc / n;
    }
    c[0] *= 0.5;
    c[n] *= 0.5;
    ChebPiece p;
    p.a_ = a;
    p.b_ = b;
    p.coef_ = std::move(c);
    return p;
}

ChebPiece ChebPiece::from_coefficients(std::vector<double> coef, double a, double b) {
    if (!(a < b)) throw std::invalid_argument("ChebPiece: need a < b");
    if (coef.empty()) coef.push_back(0.0);
    ChebPiece p;
    p.a_ = a;
    p.b_ = b;
    p.coef_ = std::move(coef);
    return p;
}

double ChebPiece::eval(double z) const {
    double x = std::clamp(to_unit(z), -1.0, 1.0);
    double b0 = 0.0, b1 = 0.0;
    for (size_t i = coef_.size(); i-- > 1;) {
        double t = 2.0 * x * b0 - b1 + coef_[i];
        b1 = b0;
        b0 = t;
    }
    return x * b0 - b1 + coef_[0];
}

ChebPiece ChebPiece::derivative(int order) const {
    if (order < 0) throw std::invalid_argument("ChebPiece::derivative: negative order");
    ChebPiece p = *this;
    double scale = 2.0 / (b_ - a_);
    for (int rep = 0; rep < order; ++rep) {
        int n = p.degree();
        std::vector<double> d(std::max(n, 1), 0.0);
        double acc2 = 0.0, acc1 = 0.0; // d[k+2], d[k+1] as we walk down
        for (int k = n - 1; k >= 0; --k) {
            double dk = (k + 2 <= n - 1 ? acc2 : 0.0) + 2.0 * (k + 1) * p.coef_[k + 1];
            acc2 = acc1;
            acc1 = dk;
            d[k] = dk;
        }
        d[0] *= 0.5;
        for (double& v : d) v *= scale;
        p.coef_ = std::move(d);
    }
    return p;
}

ChebPiece ChebPiece::truncated_to_plateau(double rel_floor) const {
    double top = 0.0;
    for (double c : coef_) top = std::max(top, std::abs(c));
    size_t keep = 1;
    for (size_t k = 0; k < coef_.size(); ++k)
        if (std::abs(coef_[k]) > rel_floor * top) keep = k + 1;
    ChebPiece p = *this;
    p.coef_.resize(keep);
    return p;
}

std::vector<double> ChebPiece::jets(double z, int order) const {
    std::vector<double> out;
    out.reserve(order + 1);
    // differentiate only the resolved part of the series: coefficients at the
    // roundoff plateau would otherwise be amplified by ~degree^2 per order
    ChebPiece d = truncated_to_plateau();
    out.push_back(eval(z));
    for (int k = 1; k <= order; ++k) {
        d = d.derivative();
        out.push_back(d.eval(z));
    }
    return out;
}

double ChebPiece::integrate(double from, double to) const {
    double lo = std::min(from, to), hi = std::max(from, to);
    if (lo < a_ - 1e-12 || hi > b_ + 1e-12)
        throw std::out_of_range("ChebPiece::integrate: range outside the piece");
    // antiderivative series in the unit variable
    int n = degree();
    std::vector<double> F(n + 2, 0.0);
    for (int k = 1; k <= n + 1; ++k) {
        double ck1 = k - 1 >= 0 && k - 1 <= n ? coef_[k - 1] : 0.0;
        double ck3 = k + 1 <= n ? coef_[k + 1] : 0.0;
        if (k == 1) ck1 = 2.0 * coef_[0]; // T_0 contributes with full weight
        F[k] = (ck1 - ck3) / (2.0 * k);
    }
    ChebPiece prim = from_coefficients(std::move(F), a_, b_);
    double half = 0.5 * (b_ - a_);
    double sign = to >= from ? 1.0 : -1.0;
    return sign * half * (prim.eval(hi) - prim.eval(lo));
}

ChebPiece ChebPiece::double_primitive(double z0) const {
    auto antiderivative = [](const ChebPiece& p) {
        int n = p.degree();
        std::vector<double> F(n + 2, 0.0);
        for (int k = 1; k <= n + 1; ++k) {
            double ck1 = k - 1 <= n ? p.coef_[k - 1] : 0.0;
            double ck3 = k + 1 <= n ? p.coef_[k + 1] : 0.0;
            if (k == 1) ck1 = 2.0 * p.coef_[0];
            F[k] = 0.5 * (p.b_ - p.a_) * (ck1 - ck3) / (2.0 * k);
        }
        return from_coefficients(std::move(F), p.a_, p.b_);
    };
    ChebPiece first = antiderivative(*this);
    first.coef_[0] -= first.eval(z0);
    ChebPiece second = antiderivative(first);
    // subtract the line s*(z - z0) + v so value and slope vanish at z0;
    // the slope is already ~0 because first(z0) = 0, roundoff is cheap to kill
    double s = second.derivative().eval(z0);
    double mid = 0.5 * (a_ + b_), half = 0.5 * (b_ - a_);
    second.coef_[0] -= s * (mid - z0);
    if (second.coef_.size() > 1) second.coef_[1] -= s * half;
    second.coef_[0] -= second.eval(z0);
    return second;
}

std::vector<double> ChebPiece::one_sided_jet(Endpoint end, int order, bool* divergence_flag,
                                             double rel_tol) const {
    double z = end == Endpoint::left ? a_ : b_;
    std::vector<double> out = jets(z, order);
    if (divergence_flag) {
        *divergence_flag = false;
        // Richardson check on the top derivative: extrapolate interior samples
        // toward the endpoint and compare with the series value there.
        double h = 0.02 * (b_ - a_);
        double dir = end == Endpoint::left ? 1.0 : -1.0;
        ChebPiece d = truncated_to_plateau().derivative(order);
        double f1 = d.eval(z + dir * h);
        double f2 = d.eval(z + dir * 0.5 * h);
        double extrap = 2.0 * f2 - f1;
        double endv = out[order];
        double scale = std::max({std::abs(endv), std::abs(f1), 1.0});
        if (std::abs(extrap - endv) > rel_tol * scale) *divergence_flag = true;
    }
    return out;
}

double ChebPiece::tail_decay() const {
    if (coef_.size() < 8) return 0.0;
    size_t start = coef_.size() - coef_.size() / 4;
    double tail = 0.0, total = 0.0;
    for (size_t i = 0; i < coef_.size(); ++i) {
        total = std::max(total, std::abs(coef_[i]));
        if (i >= start) tail = std::max(tail, std::abs(coef_[i]));
    }
    return total > 0.0 ? tail / total : 0.0;
}

ChebPiece ChebPiece::compose_sigma(int degree) const {
    if (a_ < -1e-12 || b_ > 1.0 + 1e-12)
        throw std::invalid_argument("compose_sigma: piece must lie in [0,1]");
    double za = std::sqrt(std::max(0.0, 1.0 - b_ * b_));
    double zb = std::sqrt(std::max(0.0, 1.0 - a_ * a_));
    if (degree < 1) degree = this->degree();
    auto g = [this](double z) { return eval(std::sqrt(std::max(0.0, 1.0 - z * z))); };
    return fit(g, za, zb, degree);
}

} // namespace zonoid
