#pragma once

#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gnp/arith.hpp"

namespace gnp {

/// Dense univariate polynomial over Q in a formal variable z. Coefficients
/// are indexed by degree with trailing zeros trimmed; the zero polynomial
/// has no coefficients.
class RatPoly {
  public:
    RatPoly() = default;
    explicit RatPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
    RatPoly(std::initializer_list<long> coeffs) {
        for (long c : coeffs) coeffs_.emplace_back(c);
        trim();
    }

    static RatPoly constant(const Rational& c) { return RatPoly(std::vector<Rational>{c}); }
    /// a*z + b
    static RatPoly linear(const Rational& a, const Rational& b) { return RatPoly(std::vector<Rational>{b, a}); }

    bool is_zero() const { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    Rational coeff(long i) const {
        return (i >= 0 && i < static_cast<long>(coeffs_.size())) ? coeffs_[static_cast<std::size_t>(i)] : Rational(0);
    }
    const Rational& leading() const { return coeffs_.back(); }

    template <class T>
    Rational operator()(const T& x) const {
        Rational at(x);
        Rational acc = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * at + *it;
        return acc;
    }

    bool has_integer_coeffs() const {
        for (const auto& c : coeffs_) {
            if (c.get_den() != 1) return false;
        }
        return true;
    }

    RatPoly& operator+=(const RatPoly& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        trim();
        return *this;
    }
    RatPoly& operator-=(const RatPoly& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        trim();
        return *this;
    }
    RatPoly& operator*=(const Rational& c) {
        if (c == 0) {
            coeffs_.clear();
            return *this;
        }
        for (auto& x : coeffs_) x *= c;
        return *this;
    }

    friend RatPoly operator+(RatPoly a, const RatPoly& b) { return a += b; }
    friend RatPoly operator-(RatPoly a, const RatPoly& b) { return a -= b; }
    friend RatPoly operator*(RatPoly a, const Rational& c) { return a *= c; }
    friend RatPoly operator*(const Rational& c, RatPoly a) { return a *= c; }
    friend RatPoly operator*(const RatPoly& a, const RatPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return RatPoly(std::move(out));
    }
    RatPoly& operator*=(const RatPoly& o) { return *this = *this * o; }

    friend bool operator==(const RatPoly& a, const RatPoly& b) { return a.coeffs_ == b.coeffs_; }

    std::string str() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (long i = degree(); i >= 0; --i) {
            const Rational& c = coeffs_[static_cast<std::size_t>(i)];
            if (c == 0) continue;
            if (!first) os << (c < 0 ? " - " : " + ");
            else if (c < 0) os << "-";
            Rational mag = abs(c);
            if (mag != 1 || i == 0) os << mag.get_str();
            if (i >= 1) os << "z";
            if (i >= 2) os << "^" << i;
            first = false;
        }
        return os.str();
    }
    friend std::ostream& operator<<(std::ostream& os, const RatPoly& p) { return os << p.str(); }

  private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<Rational> coeffs_;
};

/// [Y]_t = Y (Y-1) ... (Y-t+1); the empty product is 1.
inline RatPoly falling_factorial(const RatPoly& y, long t) {
    if (t < 0) throw std::invalid_argument("falling factorial order must be nonnegative");
    RatPoly out = RatPoly::constant(1);
    for (long u = 0; u < t; ++u) out *= y - RatPoly::constant(u);
    return out;
}

/// Rational-valued [y]_t, same convention as the polynomial form.
inline Rational falling_factorial(const Rational& y, long t) {
    if (t < 0) throw std::invalid_argument("falling factorial order must be nonnegative");
    Rational out = 1;
    for (long u = 0; u < t; ++u) out *= y - u;
    return out;
}

struct ContentSplit {
    Rational content;
    RatPoly primitive;
};

/// h = content * primitive with primitive integral, coefficient gcd 1 and a
/// positive leading coefficient; the sign lives on the content.
inline ContentSplit content_primitive(const RatPoly& h) {
    if (h.is_zero()) throw std::invalid_argument("content of the zero polynomial");
    Integer den_lcm = 1;
    for (const auto& c : h.coeffs()) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    Integer num_gcd = 0;
    for (const auto& c : h.coeffs()) {
        Integer scaled = c.get_num() * (den_lcm / c.get_den());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled.get_mpz_t());
    }
    Rational content = make_rational(num_gcd, den_lcm);
    if (h.leading() < 0) content = -content;
    std::vector<Rational> prim;
    prim.reserve(h.coeffs().size());
    for (const auto& c : h.coeffs()) prim.emplace_back(c / content);
    return {content, RatPoly(std::move(prim))};
}

}  // namespace gnp
