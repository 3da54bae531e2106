#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gnp/arith.hpp"

namespace gnp {

/// Element of Z[zeta_p] in the power basis 1, zeta, ..., zeta^{p-2}.
/// zeta^{p-1} is eliminated through 1 + zeta + ... + zeta^{p-1} = 0, so the
/// representation is canonical.
class CycloInt {
  public:
    CycloInt() = default;
    explicit CycloInt(std::int64_t p) : p_(p), coeffs_(static_cast<std::size_t>(p - 1)) {
        require(p >= 2 && is_prime(static_cast<std::uint64_t>(p)), "cyclotomic ring needs a prime");
    }

    static CycloInt integer(std::int64_t p, const Integer& c) {
        CycloInt x(p);
        x.coeffs_[0] = c;
        return x;
    }
    static CycloInt zeta_power(std::int64_t p, std::int64_t e) {
        std::vector<Integer> raw(static_cast<std::size_t>(p));
        raw[static_cast<std::size_t>(pos_mod(e, p))] = 1;
        return from_exponents(p, raw);
    }

    /// sum_e raw[e] zeta^e for any length (exponents taken mod p).
    static CycloInt from_exponents(std::int64_t p, const std::vector<Integer>& raw) {
        std::vector<Integer> folded(static_cast<std::size_t>(p));
        for (std::size_t e = 0; e < raw.size(); ++e) folded[e % static_cast<std::size_t>(p)] += raw[e];
        CycloInt x(p);
        const Integer& top = folded[static_cast<std::size_t>(p - 1)];
        for (std::int64_t e = 0; e < p - 1; ++e) x.coeffs_[static_cast<std::size_t>(e)] = folded[static_cast<std::size_t>(e)] - top;
        return x;
    }

    std::int64_t p() const { return p_; }
    const std::vector<Integer>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        for (const auto& c : coeffs_) {
            if (c != 0) return false;
        }
        return true;
    }
    /// True when the element lies in Z.
    bool is_rational_integer() const {
        for (std::size_t i = 1; i < coeffs_.size(); ++i) {
            if (coeffs_[i] != 0) return false;
        }
        return true;
    }

    CycloInt& operator+=(const CycloInt& o) {
        check_same(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }
    CycloInt& operator-=(const CycloInt& o) {
        check_same(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }
    CycloInt& operator*=(const Integer& c) {
        for (auto& x : coeffs_) x *= c;
        return *this;
    }
    friend CycloInt operator+(CycloInt a, const CycloInt& b) { return a += b; }
    friend CycloInt operator-(CycloInt a, const CycloInt& b) { return a -= b; }
    friend CycloInt operator*(CycloInt a, const Integer& c) { return a *= c; }

    friend CycloInt operator*(const CycloInt& a, const CycloInt& b) {
        a.check_same(b);
        const auto p = static_cast<std::size_t>(a.p_);
        std::vector<Integer> raw(p);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                if (b.coeffs_[j] == 0) continue;
                const std::size_t e = (i + j) % p;
                mpz_addmul(raw[e].get_mpz_t(), a.coeffs_[i].get_mpz_t(), b.coeffs_[j].get_mpz_t());
            }
        }
        return from_exponents(a.p_, raw);
    }

    /// Exact division by a rational integer; every coordinate must divide.
    CycloInt divided_exactly(const Integer& c) const {
        CycloInt out = *this;
        for (auto& x : out.coeffs_) {
            if (!mpz_divisible_p(x.get_mpz_t(), c.get_mpz_t())) {
                throw ConsistencyError("cyclotomic value is not divisible by " + c.get_str());
            }
            mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
        }
        return out;
    }

    /// Galois conjugate zeta -> zeta^u, u a unit mod p.
    CycloInt conjugate(std::int64_t u) const {
        require(pos_mod(u, p_) != 0, "conjugation exponent must be a unit mod p");
        std::vector<Integer> raw(static_cast<std::size_t>(p_));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            raw[static_cast<std::size_t>(pos_mod(static_cast<std::int64_t>(i) * u, p_))] += coeffs_[i];
        }
        return from_exponents(p_, raw);
    }

    friend bool operator==(const CycloInt& a, const CycloInt& b) { return a.p_ == b.p_ && a.coeffs_ == b.coeffs_; }

    std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i] == 0) continue;
            if (!out.empty()) out += " + ";
            out += coeffs_[i].get_str();
            if (i > 0) out += "*z^" + std::to_string(i);
        }
        return out.empty() ? "0" : out;
    }

  private:
    void check_same(const CycloInt& o) const {
        if (p_ != o.p_) throw std::invalid_argument("cyclotomic elements over different primes");
    }

    std::int64_t p_ = 0;
    std::vector<Integer> coeffs_;
};

/// ord_p normalized so ord_p(p) = 1 and ord_p(1 - zeta) = 1/(p-1).
/// Rewritten in powers of pi = 1 - zeta, the terms b_j pi^j have orders
/// ord_p(b_j) + j/(p-1) with pairwise distinct fractional parts, so the
/// minimum is attained once and nothing cancels.
inline Valuation pi_ord(const CycloInt& x) {
    const std::int64_t p = x.p();
    const auto& a = x.coeffs();
    Valuation best;
    Integer binom;
    for (std::int64_t j = 0; j < p - 1; ++j) {
        Integer b = 0;
        for (std::int64_t i = j; i < p - 1; ++i) {
            mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(i), static_cast<unsigned long>(j));
            b += a[static_cast<std::size_t>(i)] * binom;
        }
        if (b == 0) continue;
        const Valuation v(Rational(ord_p(b, Integer(static_cast<long>(p)))) + make_rational(j, p - 1));
        if (v < best) best = v;
    }
    return best;
}

}  // namespace gnp
