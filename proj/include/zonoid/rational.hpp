#ifndef ZONOID_RATIONAL_HPP
#define ZONOID_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace zonoid {

/// Exact rational number on 64-bit integers. Intermediate products are
/// carried in 128 bits and an overflow of the reduced result throws.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) { assign(n, d); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    bool is_zero() const { return num_ == 0; }

    Rational operator-() const { return Rational(-num_, den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from128((__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_,
                       (__int128)a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from128((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return from128((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
    }
    Rational& operator+=(const Rational& b) { return *this = *this + b; }
    Rational& operator-=(const Rational& b) { return *this = *this - b; }
    Rational& operator*=(const Rational& b) { return *this = *this * b; }
    Rational& operator/=(const Rational& b) { return *this = *this / b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

  private:
    void assign(long long n, long long d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        num_ = n;
        den_ = d;
    }

    static Rational from128(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 an = n < 0 ? -n : n;
        __int128 g = gcd128(an, d);
        if (g > 1) { n /= g; d /= g; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw std::overflow_error("Rational: 64-bit overflow");
        Rational r;
        r.num_ = static_cast<long long>(n);
        r.den_ = static_cast<long long>(d);
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a;
    }

    long long num_, den_;
};

/// Dense polynomial with exact rational coefficients, ascending degree.
/// Trailing zeros are trimmed so that degree() is meaningful.
struct RationalPoly {
    std::vector<Rational> c;

    RationalPoly() = default;
    RationalPoly(std::initializer_list<Rational> init) : c(init) { trim(); }
    explicit RationalPoly(std::vector<Rational> v) : c(std::move(v)) { trim(); }

    static RationalPoly constant(Rational a) { return RationalPoly({a}); }
    /// monomial a * z^k
    static RationalPoly monomial(Rational a, int k) {
        std::vector<Rational> v(k + 1);
        v[k] = a;
        return RationalPoly(std::move(v));
    }

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }

    Rational coeff(int k) const {
        if (k < 0 || k >= static_cast<int>(c.size())) return Rational(0);
        return c[k];
    }

    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }

    friend RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
        std::vector<Rational> v(std::max(a.c.size(), b.c.size()));
        for (size_t i = 0; i < v.size(); ++i) v[i] = a.coeff((int)i) + b.coeff((int)i);
        return RationalPoly(std::move(v));
    }
    friend RationalPoly operator-(const RationalPoly& a, const RationalPoly& b) {
        std::vector<Rational> v(std::max(a.c.size(), b.c.size()));
        for (size_t i = 0; i < v.size(); ++i) v[i] = a.coeff((int)i) - b.coeff((int)i);
        return RationalPoly(std::move(v));
    }
    friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
        if (a.is_zero() || b.is_zero()) return RationalPoly();
        std::vector<Rational> v(a.c.size() + b.c.size() - 1);
        for (size_t i = 0; i < a.c.size(); ++i)
            for (size_t j = 0; j < b.c.size(); ++j) v[i + j] += a.c[i] * b.c[j];
        return RationalPoly(std::move(v));
    }
    friend RationalPoly operator*(const Rational& s, const RationalPoly& a) {
        std::vector<Rational> v(a.c.size());
        for (size_t i = 0; i < v.size(); ++i) v[i] = s * a.c[i];
        return RationalPoly(std::move(v));
    }
    friend bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.c == b.c; }

    RationalPoly derivative() const {
        if (c.size() <= 1) return RationalPoly();
        std::vector<Rational> v(c.size() - 1);
        for (size_t i = 1; i < c.size(); ++i) v[i - 1] = Rational((long long)i) * c[i];
        return RationalPoly(std::move(v));
    }

    Rational eval(const Rational& z) const {
        Rational r(0);
        for (size_t i = c.size(); i-- > 0;) r = r * z + c[i];
        return r;
    }

    double eval(double z) const {
        double r = 0.0;
        for (size_t i = c.size(); i-- > 0;) r = r * z + c[i].value();
        return r;
    }

    double derivative_value(int order, double z) const {
        RationalPoly d = *this;
        for (int i = 0; i < order; ++i) d = d.derivative();
        return d.eval(z);
    }

    /// e.g. "3 - 6*z^2" with ascending terms; "0" for the zero polynomial.
    std::string str() const {
        if (c.empty()) return "0";
        std::string out;
        bool first = true;
        for (size_t i = 0; i < c.size(); ++i) {
            if (c[i].is_zero()) continue;
            std::string term = c[i].str();
            if (i >= 1 && term == "1") term.clear();
            else if (i >= 1 && term == "-1") term = "-";
            else if (i >= 1) term += "*";
            if (i == 1) term += "z";
            else if (i > 1) term += "z^" + std::to_string(i);
            if (!first) out += term[0] == '-' ? " - " + term.substr(1) : " + " + term;
            else out = term;
            first = false;
        }
        return out;
    }
};

} // namespace zonoid

#endif
