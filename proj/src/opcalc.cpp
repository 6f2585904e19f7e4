#include "zonoid/opcalc.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace zonoid {

double SymbolicScale::value() const {
    return q.value() * std::pow(std::numbers::pi, pi_pow);
}

std::string SymbolicScale::str() const {
    std::ostringstream os;
    os << q.str();
    if (pi_pow == 1) os << "*pi";
    else if (pi_pow == -1) os << "/pi";
    else if (pi_pow > 1) os << "*pi^" << pi_pow;
    else if (pi_pow < -1) os << "/pi^" << -pi_pow;
    return os.str();
}

double ZonalDiffOperator::coeff_value(int k, double z) const {
    if (k < 0 || k > order()) return 0.0;
    return scale.value() * coeffs[k].eval(z);
}

double ZonalDiffOperator::apply_jets(const std::vector<double>& jets, double z) const {
    double acc = 0.0;
    int kmax = std::min<int>(order(), static_cast<int>(jets.size()) - 1);
    for (int k = 0; k <= kmax; ++k) acc += coeffs[k].eval(z) * jets[k];
    return scale.value() * acc;
}

std::string ZonalDiffOperator::str() const {
    std::ostringstream os;
    os << "scale " << scale.str() << (pre_substitution ? ", on sigma-pullback" : "") << "\n";
    for (int k = 0; k <= order(); ++k) os << "  D^" << k << ": " << coeffs[k].str() << "\n";
    return os.str();
}

double sphere_volume(int d) {
    if (d < 0) throw std::invalid_argument("sphere_volume: d must be >= 0");
    return sphere_volume_exact(d).value();
}

SymbolicScale sphere_volume_exact(int d) {
    if (d < 0) throw std::invalid_argument("sphere_volume: d must be >= 0");
    if (d % 2 == 0) {
        // Vol(S^{2j}) = 2 * 4^j * j! / (2j)! * pi^j
        int j = d / 2;
        Rational q(2);
        for (int i = 1; i <= j; ++i) q = q * Rational(4) * Rational(i);
        for (int i = 1; i <= 2 * j; ++i) q = q / Rational(i);
        return {q, j};
    }
    // Vol(S^{2j+1}) = 2 / j! * pi^{j+1}
    int j = (d - 1) / 2;
    Rational q(2);
    for (int i = 1; i <= j; ++i) q = q / Rational(i);
    return {q, j + 1};
}

SymbolicScale cn_exact(int n) {
    if (n < 2) throw std::invalid_argument("cn_exact: n must be >= 2");
    SymbolicScale v = sphere_volume_exact(n - 2);
    return {Rational(2) * v.q, v.pi_pow};
}

SymbolicScale radon_constant_exact(int n, int k) {
    if (n < 3 || k < 0 || 2 * k > n - 2)
        throw std::invalid_argument("radon_constant: need 3 <= n and 0 <= k <= n/2 - 1");
    Rational dfac(1); // (n-3)!! / (n-3-2k)!!
    for (int v = n - 3; v > n - 3 - 2 * k; v -= 2) dfac = dfac * Rational(v);
    SymbolicScale num = cn_exact(n - 2 * k);
    SymbolicScale den = cn_exact(n);
    return {dfac * num.q / den.q, num.pi_pow - den.pi_pow};
}

double radon_constant(int n, int k) { return radon_constant_exact(n, k).value(); }

ZonalDiffOperator box_operator(int n) {
    if (n < 1) throw std::invalid_argument("box_operator: n must be >= 1");
    ZonalDiffOperator op;
    op.coeffs = {RationalPoly::constant(Rational(n)),
                 RationalPoly::monomial(Rational(-n), 1),
                 RationalPoly({Rational(1), Rational(0), Rational(-1)})};
    op.pre_substitution = false;
    op.scale = SymbolicScale{Rational(1), 0};
    return op;
}

namespace {

/// Laurent polynomial over rationals: coefficient of z^{off + i} is c[i].
struct Laurent {
    int off = 0;
    std::vector<Rational> c;

    static Laurent monomial(Rational a, int k) { return {k, {a}}; }

    Rational coeff(int deg) const {
        int i = deg - off;
        if (i < 0 || i >= static_cast<int>(c.size())) return Rational(0);
        return c[i];
    }
    void normalize() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
        size_t lead = 0;
        while (lead < c.size() && c[lead].is_zero()) ++lead;
        if (lead > 0) {
            c.erase(c.begin(), c.begin() + lead);
            off += static_cast<int>(lead);
        }
        if (c.empty()) off = 0;
    }
    Laurent derivative() const {
        Laurent d;
        d.off = off - 1;
        d.c.resize(c.size());
        for (size_t i = 0; i < c.size(); ++i)
            d.c[i] = Rational(off + static_cast<int>(i)) * c[i];
        d.normalize();
        return d;
    }
    Laurent shifted(int k) const {
        Laurent s = *this;
        s.off += k;
        return s;
    }
    friend Laurent operator+(const Laurent& a, const Laurent& b) {
        if (a.c.empty()) return b;
        if (b.c.empty()) return a;
        int lo = std::min(a.off, b.off);
        int hi = std::max(a.off + (int)a.c.size(), b.off + (int)b.c.size());
        Laurent r;
        r.off = lo;
        r.c.resize(hi - lo);
        for (int d = lo; d < hi; ++d) r.c[d - lo] = a.coeff(d) + b.coeff(d);
        r.normalize();
        return r;
    }
    RationalPoly to_poly() const {
        if (c.empty()) return RationalPoly();
        if (off < 0) throw std::logic_error("Laurent: negative power where polynomial expected");
        std::vector<Rational> v(off + c.size());
        for (size_t i = 0; i < c.size(); ++i) v[off + i] = c[i];
        return RationalPoly(std::move(v));
    }
};

} // namespace

ZonalDiffOperator build_radon_inverse(int m) {
    if (m < 1) throw std::invalid_argument("build_radon_inverse: m must be >= 1");
    // Expand  z * ((1/z) d/dz)^m [ z^{2m-1} g(z) ]  into  sum_k Q_k(z) g^(k)(z),
    // tracking the coefficient of each derivative order as a Laurent polynomial.
    std::vector<Laurent> coef(1, Laurent::monomial(Rational(1), 2 * m - 1));
    for (int step = 0; step < m; ++step) {
        std::vector<Laurent> next(coef.size() + 1);
        for (size_t k = 0; k < coef.size(); ++k) {
            next[k] = next[k] + coef[k].derivative(); // product-rule hit on the coefficient
            next[k + 1] = next[k + 1] + coef[k];      // hit on the operand
        }
        for (auto& l : next) l = l.shifted(-1); // the 1/z factor
        coef = std::move(next);
    }
    for (auto& l : coef) l = l.shifted(1); // leading z

    ZonalDiffOperator op;
    op.coeffs.reserve(coef.size());
    for (auto& l : coef) op.coeffs.push_back(l.to_poly());
    op.pre_substitution = true;
    op.scale = (radon_constant_exact(2 * m + 1, m - 1) * cn_exact(3)).inverse();
    return op;
}

ZonalDiffOperator build_cosine_inverse(int m) {
    if (m < 1) throw std::invalid_argument("build_cosine_inverse: m must be >= 1");
    ZonalDiffOperator radon = build_radon_inverse(m);
    ZonalDiffOperator box = box_operator(2 * m + 1);

    // box( sum_k Q_k g^(k) ) = sum_j B_j (d/dz)^j sum_k Q_k g^(k)
    //                        = sum_j B_j sum_k sum_{i<=j} C(j,i) Q_k^{(j-i)} g^{(k+i)}
    int out_order = radon.order() + box.order();
    std::vector<RationalPoly> out(out_order + 1);
    for (int j = 0; j <= box.order(); ++j) {
        if (box.coeffs[j].is_zero()) continue;
        for (int k = 0; k <= radon.order(); ++k) {
            RationalPoly dq = radon.coeffs[k]; // Q_k^{(j-i)} built by stepping down
            // iterate i = j..0 so dq holds the (j-i)-th derivative
            std::vector<RationalPoly> derivs(j + 1);
            derivs[0] = radon.coeffs[k];
            for (int d = 1; d <= j; ++d) derivs[d] = derivs[d - 1].derivative();
            long long binom = 1;
            for (int i = 0; i <= j; ++i) {
                if (i > 0) binom = binom * (j - i + 1) / i;
                out[k + i] = out[k + i] + Rational(binom) * (box.coeffs[j] * derivs[j - i]);
            }
        }
    }
    ZonalDiffOperator op;
    op.coeffs = std::move(out);
    for (auto& p : op.coeffs) p.trim();
    op.pre_substitution = true;
    op.scale = radon.scale * box.scale;
    return op;
}

ScaledPoly apply_to_poly(const ZonalDiffOperator& op, const RationalPoly& p) {
    RationalPoly operand = p;
    if (op.pre_substitution) {
        for (int k = 1; k <= p.degree(); k += 2)
            if (!p.coeff(k).is_zero())
                throw std::invalid_argument("apply_to_poly: sigma-pullback needs an even operand");
        // p(sqrt(1-z^2)) = sum a_{2i} (1-z^2)^i
        RationalPoly onemz2({Rational(1), Rational(0), Rational(-1)});
        RationalPoly pw = RationalPoly::constant(Rational(1));
        RationalPoly acc;
        for (int i = 0; 2 * i <= p.degree(); ++i) {
            acc = acc + p.coeff(2 * i) * pw;
            pw = pw * onemz2;
        }
        operand = acc;
    }
    RationalPoly result;
    RationalPoly d = operand;
    for (int k = 0; k <= op.order(); ++k) {
        result = result + op.coeffs[k] * d;
        d = d.derivative();
    }
    return {result, op.scale};
}

} // namespace zonoid
