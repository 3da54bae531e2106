#pragma once

// Exact arithmetic substrate: GMP integers and rationals plus the small
// number-theoretic helpers (primality, modular inverse, valuations,
// largest prime factor) used throughout the library.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gnp/errors.hpp"

namespace gnp {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw std::domain_error("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational make_rational(long num, long den = 1) {
    return make_rational(Integer(num), Integer(den));
}

/// "num/den" with an explicit denominator, even when it is 1.
inline std::string fraction_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Accepts "num/den" or a bare integer.
inline Rational parse_fraction(const std::string& text) {
    Rational q;
    if (q.set_str(text, 10) != 0) throw std::invalid_argument("malformed fraction: " + text);
    if (q.get_den() == 0) throw std::domain_error("zero denominator: " + text);
    q.canonicalize();
    return q;
}

inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

/// Least nonnegative residue.
inline std::int64_t pos_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline std::int64_t gcd(std::int64_t a, std::int64_t b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

/// Inverse of a modulo m in 0..m-1 via extended Euclid.
inline std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
    if (m <= 0) throw std::invalid_argument("modulus must be positive");
    if (m == 1) return 0;
    std::int64_t old_r = pos_mod(a, m), r = m;
    std::int64_t old_x = 1, x = 0;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::int64_t t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_x - q * x;
        old_x = x;
        x = t;
    }
    if (old_r != 1) throw HypothesisError("not invertible modulo " + std::to_string(m));
    return pos_mod(old_x, m);
}

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e != 0) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace detail

/// Deterministic Miller-Rabin; the first twelve prime bases cover all of
/// uint64.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    static constexpr std::uint64_t bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (auto b : bases) {
        if (n % b == 0) return n == b;
    }
    std::uint64_t dd = n - 1;
    int twos = 0;
    while ((dd & 1) == 0) {
        dd >>= 1;
        ++twos;
    }
    for (auto b : bases) {
        std::uint64_t x = detail::pow_mod(b, dd, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < twos; ++i) {
            x = detail::mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline bool is_prime(const Integer& n) {
    if (n < 2) return false;
    if (n.fits_ulong_p()) return is_prime(static_cast<std::uint64_t>(n.get_ui()));
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

inline std::int64_t next_prime(std::int64_t n) {
    std::int64_t c = std::max<std::int64_t>(2, n + 1);
    while (!is_prime(static_cast<std::uint64_t>(c))) ++c;
    return c;
}

/// Primes in [lo, hi].
inline std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> out;
    for (std::int64_t c = std::max<std::int64_t>(lo, 2); c <= hi; ++c) {
        if (is_prime(static_cast<std::uint64_t>(c))) out.push_back(c);
    }
    return out;
}

/// n! from a shared, lazily grown table (deque keeps references stable).
inline const Integer& factorial(std::int64_t n) {
    static std::deque<Integer> table{Integer(1)};
    static std::mutex guard;
    if (n < 0) throw std::domain_error("factorial of negative integer");
    std::lock_guard lock(guard);
    while (static_cast<std::int64_t>(table.size()) <= n) {
        table.push_back(table.back() * static_cast<unsigned long>(table.size()));
    }
    return table[static_cast<std::size_t>(n)];
}

/// 1/n!, with the reciprocal-gamma convention 1/n! = 0 for negative n.
inline Rational inverse_factorial(std::int64_t n) {
    if (n < 0) return Rational(0);
    return Rational(Integer(1), factorial(n));
}

/// p-adic valuation with a distinguished infinity for zero.
class Valuation {
  public:
    Valuation() = default;  // infinity
    explicit Valuation(Rational v) : value_(std::move(v)) {}

    static Valuation infinity() { return Valuation(); }

    bool is_infinite() const { return !value_.has_value(); }
    const Rational& value() const {
        if (!value_) throw std::logic_error("valuation is infinite");
        return *value_;
    }

    friend bool operator==(const Valuation& a, const Valuation& b) { return a.value_ == b.value_; }
    friend bool operator<(const Valuation& a, const Valuation& b) {
        if (a.is_infinite()) return false;
        if (b.is_infinite()) return true;
        return *a.value_ < *b.value_;
    }

    std::string str() const { return is_infinite() ? "inf" : fraction_string(*value_); }
    friend std::ostream& operator<<(std::ostream& os, const Valuation& v) { return os << v.str(); }

  private:
    std::optional<Rational> value_;
};

/// Exponent of p in a nonzero integer.
inline long ord_p(const Integer& x, const Integer& p) {
    if (x == 0) throw std::domain_error("ord_p of zero integer");
    Integer rest = abs(x);
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t()));
}

inline Valuation ord_p(const Rational& x, std::int64_t p) {
    require(p > 1 && is_prime(static_cast<std::uint64_t>(p)), "ord_p needs a prime, got " + std::to_string(p));
    if (x == 0) return Valuation::infinity();
    Integer pp(static_cast<long>(p));
    return Valuation(Rational(ord_p(x.get_num(), pp) - ord_p(x.get_den(), pp)));
}

namespace detail {

// Pollard rho with Floyd cycle detection; n composite.
inline Integer pollard_factor(const Integer& n) {
    for (unsigned long c = 1;; ++c) {
        Integer x = 2, y = 2, g = 1;
        auto step = [&](const Integer& v) -> Integer { return (v * v + c) % n; };
        while (g == 1) {
            x = step(x);
            y = step(step(y));
            Integer diff = abs(x - y);
            mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (g != n) return g;
    }
}

inline void largest_prime_factor(Integer n, Integer& best) {
    if (n <= 1) return;
    static constexpr unsigned long small_bound = 100000;
    for (unsigned long q = 2; q <= small_bound && Integer(q) * q <= n; q += (q == 2 ? 1 : 2)) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), q)) {
            best = std::max(best, Integer(q));
            while (mpz_divisible_ui_p(n.get_mpz_t(), q)) n /= q;
        }
    }
    if (n == 1) return;
    if (is_prime(n)) {
        best = std::max(best, n);
        return;
    }
    if (n < Integer(small_bound) * small_bound) {
        // every factor below the bound was removed, so n is prime
        best = std::max(best, n);
        return;
    }
    Integer f = pollard_factor(n);
    largest_prime_factor(f, best);
    largest_prime_factor(n / f, best);
}

}  // namespace detail

/// Largest prime dividing the numerator or the denominator; 1 for +-1.
inline Integer max_prime(const Rational& x) {
    if (x == 0) throw std::domain_error("max_prime of zero");
    Integer best = 1;
    detail::largest_prime_factor(abs(x.get_num()), best);
    detail::largest_prime_factor(x.get_den(), best);
    return best;
}

}  // namespace gnp
