#pragma once

// Generating polynomials for the generic Newton polygon of x^d + a x^s in a
// residue class p = r mod d.
//
// For each minor size n the coefficient h_{r,n,k} of X^k is obtained from a
// p-free integer polynomial h~_{r,n,k}(z): a signed sum over permutations
// sigma and lift vectors ell of products of falling factorials of the
// linear forms i*z + floor(r*i/d). Its primitive part evaluated at -r/d is
// h_{r,n,k}; the least k with h != 0 is the exponent k_{r,n} that shifts the
// n-th vertex of the polygon above the Hodge polygon.

#include <algorithm>
#include <cstdint>
#include <future>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gnp/arith.hpp"
#include "gnp/frobenius.hpp"
#include "gnp/ratpoly.hpp"

namespace gnp {

inline void check_residue(std::int64_t s, std::int64_t d, std::int64_t r) {
    detail::check_generators(s, d);
    require(r >= 2 && r <= d - 1, "residue r must lie in 2..d-1, got " + std::to_string(r));
    require(gcd(r, d) == 1, "residue r must be coprime to d, got r=" + std::to_string(r));
}

inline void check_minor_size(std::int64_t d, std::int64_t n) {
    require(n >= 1 && n <= d - 1, "minor size n must lie in 1..d-1, got " + std::to_string(n));
}

/// Sign of a permutation given by its images (any distinct values).
inline int permutation_sign(const std::vector<int>& sigma) {
    int sign = 1;
    for (std::size_t a = 0; a < sigma.size(); ++a) {
        for (std::size_t b = a + 1; b < sigma.size(); ++b) {
            if (sigma[a] > sigma[b]) sign = -sign;
        }
    }
    return sign;
}

/// Permutation sum sum_i m_{i,sigma(i)} for a 1-based sigma.
inline std::int64_t m_sum(std::int64_t s, std::int64_t d, std::int64_t r, const std::vector<int>& sigma) {
    std::int64_t total = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        total += m_entry(s, d, r, static_cast<std::int64_t>(i) + 1, sigma[i]);
    }
    return total;
}

inline std::int64_t k_min_exhaustive(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t n) {
    check_residue(s, d, r);
    check_minor_size(d, n);
    std::vector<int> sigma(static_cast<std::size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 1);
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    do {
        best = std::min(best, m_sum(s, d, r, sigma));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return best;
}

/// Hungarian algorithm with potentials, O(n^3).
inline std::int64_t k_min_assignment(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t n) {
    check_residue(s, d, r);
    check_minor_size(d, n);
    const auto sz = static_cast<std::size_t>(n);
    constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
    std::vector<std::int64_t> u(sz + 1, 0), v(sz + 1, 0), minv(sz + 1);
    std::vector<std::size_t> match(sz + 1, 0), way(sz + 1, 0);
    std::vector<char> used(sz + 1);
    auto cost = [&](std::size_t i, std::size_t j) {
        return m_entry(s, d, r, static_cast<std::int64_t>(i), static_cast<std::int64_t>(j));
    };
    for (std::size_t row = 1; row <= sz; ++row) {
        match[0] = row;
        std::size_t col0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[col0] = 1;
            const std::size_t i0 = match[col0];
            std::int64_t delta = inf;
            std::size_t col1 = 0;
            for (std::size_t j = 1; j <= sz; ++j) {
                if (used[j]) continue;
                const std::int64_t cur = cost(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = col0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    col1 = j;
                }
            }
            for (std::size_t j = 0; j <= sz; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            col0 = col1;
        } while (match[col0] != 0);
        do {
            const std::size_t col1 = way[col0];
            match[col0] = match[col1];
            col0 = col1;
        } while (col0 != 0);
    }
    std::int64_t total = 0;
    for (std::size_t j = 1; j <= sz; ++j) total += cost(match[j], j);
    return total;
}

/// k°_{r,n}: least permutation sum of the m-matrix.
inline std::int64_t k_min(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t n) {
    return n <= 8 ? k_min_exhaustive(s, d, r, n) : k_min_assignment(s, d, r, n);
}

/// One element of S(k): sum_i m_{i,sigma(i)} + d * sum_i ell_i = k.
struct SkElement {
    std::vector<int> sigma;           // 1-based images
    std::vector<std::int64_t> ells;   // ell_{i,sigma(i)}
    int sign = 1;
};

namespace detail {

// All n-part compositions of total into nonnegative parts.
template <class Fn>
void for_each_composition(std::int64_t total, std::size_t parts, Fn&& fn) {
    std::vector<std::int64_t> cur(parts, 0);
    auto rec = [&](auto&& self, std::size_t idx, std::int64_t left) -> void {
        if (idx + 1 == parts) {
            cur[idx] = left;
            fn(cur);
            return;
        }
        for (std::int64_t x = 0; x <= left; ++x) {
            cur[idx] = x;
            self(self, idx + 1, left - x);
        }
    };
    if (parts == 0) {
        if (total == 0) fn(cur);
        return;
    }
    rec(rec, 0, total);
}

}  // namespace detail

inline std::vector<SkElement> enum_S(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t n, std::int64_t k) {
    check_residue(s, d, r);
    check_minor_size(d, n);
    require(k >= 0, "k must be nonnegative");
    std::vector<SkElement> out;
    std::vector<int> sigma(static_cast<std::size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 1);
    do {
        const std::int64_t base = m_sum(s, d, r, sigma);
        if (base > k || (k - base) % d != 0) continue;
        const int sign = permutation_sign(sigma);
        detail::for_each_composition((k - base) / d, sigma.size(), [&](const std::vector<std::int64_t>& ells) {
            out.push_back({sigma, ells, sign});
        });
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

/// t_{ij} = floor(ri/d) - (ri - j - s m_ij)/d + s ell.
inline std::int64_t t_entry(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t i, std::int64_t j, std::int64_t ell) {
    const std::int64_t m = m_entry(s, d, r, i, j);
    return floor_div(r * i, d) - (r * i - j - s * m) / d + s * ell;
}

/// Which factorial normalizes the Theta weight: (d-1+b)! with b = k - k°
/// (Reduced) or (d-1+k)! (Full). They differ by a constant factor only.
enum class ThetaNorm { Reduced, Full };

namespace detail {

inline Integer theta_weight(std::int64_t s, std::int64_t d, std::int64_t r, const SkElement& e, std::int64_t top) {
    Integer theta = 1;
    for (std::size_t i = 0; i < e.sigma.size(); ++i) {
        const std::int64_t m = m_entry(s, d, r, static_cast<std::int64_t>(i) + 1, e.sigma[i]);
        const std::int64_t low = m + d * e.ells[i];
        if (low > top) throw ConsistencyError("Theta weight is not integral");
        Integer q;
        mpz_divexact(q.get_mpz_t(), factorial(top).get_mpz_t(), factorial(low).get_mpz_t());
        theta *= q;
    }
    return theta;
}

inline std::int64_t theta_top(std::int64_t d, std::int64_t k, std::int64_t kmin, ThetaNorm norm) {
    return d - 1 + (norm == ThetaNorm::Reduced ? k - kmin : k);
}

// Shared driver: sum over S(k) of sign * Theta * prod_i factor(i, t_i).
template <class Value, class Factor>
Value tilde_h_sum(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t n, std::int64_t k, ThetaNorm norm,
                  Factor&& factor) {
    const std::int64_t kmin = k_min(s, d, r, n);
    require(k >= kmin, "k=" + std::to_string(k) + " is below k_min=" + std::to_string(kmin));
    const std::int64_t top = theta_top(d, k, kmin, norm);
    Value total{};
    for (const auto& e : enum_S(s, d, r, n, k)) {
        Value term = factor(0, 0);  // unit
        for (std::size_t i = 0; i < e.sigma.size(); ++i) {
            const auto row = static_cast<std::int64_t>(i) + 1;
            const std::int64_t t = t_entry(s, d, r, row, e.sigma[i], e.ells[i]);
            if (t < 0) throw ConsistencyError("negative falling-factorial order t_ij");
            term = term * factor(row, t);
        }
        Rational weight(theta_weight(s, d, r, e, top) * e.sign);
        total += term * weight;
    }
    return total;
}

}  // namespace detail

/// The linear form i*z + floor(r*i/d).
inline RatPoly n_tilde(std::int64_t d, std::int64_t r, std::int64_t i) {
    return RatPoly::linear(Rational(i), Rational(floor_div(r * i, d)));
}

/// h~_{r,n,k}(z). Zero when S(k) is empty.
inline RatPoly tilde_h(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t n, std::int64_t k,
                       ThetaNorm norm = ThetaNorm::Reduced) {
    std::map<std::pair<std::int64_t, std::int64_t>, RatPoly> cache;
    auto factor = [&](std::int64_t row, std::int64_t t) -> RatPoly {
        if (row == 0) return RatPoly::constant(1);
        auto [it, fresh] = cache.try_emplace({row, t});
        if (fresh) it->second = falling_factorial(n_tilde(d, r, row), t);
        return it->second;
    };
    return detail::tilde_h_sum<RatPoly>(s, d, r, n, k, norm, factor);
}

/// h~_{r,n,k} evaluated at a rational point, without building the polynomial.
inline Rational tilde_h_at(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t n, std::int64_t k,
                           const Rational& z, ThetaNorm norm = ThetaNorm::Reduced) {
    auto factor = [&](std::int64_t row, std::int64_t t) -> Rational {
        if (row == 0) return Rational(1);
        return falling_factorial(Rational(row * z + floor_div(r * row, d)), t);
    };
    return detail::tilde_h_sum<Rational>(s, d, r, n, k, norm, factor);
}

/// h_{r,n,k} = primitive part of h~_{r,n,k} at z = -r/d; 0 when h~ vanishes.
inline Rational h_value(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t n, std::int64_t k) {
    const RatPoly h = tilde_h(s, d, r, n, k);
    if (h.is_zero()) return 0;
    return content_primitive(h).primitive(make_rational(-r, d));
}

struct LowestTerm {
    std::int64_t n = 0;
    std::int64_t k_min = 0;
    std::optional<std::int64_t> k;   // k_{r,n}; empty when the cap was reached
    std::optional<Rational> h;       // h_{r,n,k_{r,n}}, nonzero when present
    std::int64_t searched_up_to = 0;

    bool found() const { return k.has_value(); }
};

/// max_n k° + d(d+2).
inline std::int64_t default_k_cap(std::int64_t s, std::int64_t d, std::int64_t r) {
    std::int64_t worst = 0;
    for (std::int64_t n = 1; n <= d - 1; ++n) worst = std::max(worst, k_min(s, d, r, n));
    return worst + d * (d + 2);
}

/// First k in [k°, k_cap] with h_{r,n,k} != 0. Zero tests go through the
/// cheap evaluation at -r/d; the polynomial is built only for the hit.
inline LowestTerm lowest_term(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t n, std::int64_t k_cap) {
    LowestTerm out;
    out.n = n;
    out.k_min = k_min(s, d, r, n);
    const Rational at = make_rational(-r, d);
    for (std::int64_t k = out.k_min; k <= k_cap; ++k) {
        out.searched_up_to = k;
        if (tilde_h_at(s, d, r, n, k, at) == 0) continue;
        const RatPoly h = tilde_h(s, d, r, n, k);
        const ContentSplit split = content_primitive(h);
        out.k = k;
        out.h = split.primitive(at);
        if (*out.h * split.content != h(at)) throw ConsistencyError("h~ evaluation routes disagree");
        return out;
    }
    return out;
}

/// One LowestTerm per n = 1..d-1. Minors are scanned concurrently and
/// merged in n order.
inline std::vector<LowestTerm> lowest_terms(std::int64_t s, std::int64_t d, std::int64_t r,
                                            std::optional<std::int64_t> k_cap = std::nullopt) {
    check_residue(s, d, r);
    const std::int64_t cap = k_cap.value_or(default_k_cap(s, d, r));
    std::vector<std::future<LowestTerm>> jobs;
    for (std::int64_t n = 1; n <= d - 1; ++n) {
        const std::int64_t need = k_min(s, d, r, n);
        require(cap >= need, "k_cap=" + std::to_string(cap) + " is below k_min=" + std::to_string(need));
        jobs.push_back(std::async(std::launch::async, [=] { return lowest_term(s, d, r, n, cap); }));
    }
    std::vector<LowestTerm> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

/// Per-n ledger of the nonzero coefficients of H_r up to a degree cap.
/// r = 1 is the trivial object H_1 = 1.
struct GeneratingPolynomial {
    std::int64_t s = 0, d = 0, r = 0;
    std::int64_t k_cap = 0;
    bool trivial = false;
    std::map<std::int64_t, std::vector<std::pair<std::int64_t, Rational>>> terms;
    std::vector<std::int64_t> incomplete;  // n with no nonzero term up to k_cap
};

/// With lowest_only each n stops at its first nonzero coefficient.
inline GeneratingPolynomial generating_polynomial(std::int64_t s, std::int64_t d, std::int64_t r,
                                                  std::optional<std::int64_t> k_cap = std::nullopt,
                                                  bool lowest_only = true) {
    GeneratingPolynomial g;
    g.s = s;
    g.d = d;
    g.r = r;
    if (r == 1) {
        detail::check_generators(s, d);
        g.trivial = true;
        return g;
    }
    check_residue(s, d, r);
    g.k_cap = k_cap.value_or(default_k_cap(s, d, r));
    const Rational at = make_rational(-r, d);
    for (std::int64_t n = 1; n <= d - 1; ++n) {
        auto& row = g.terms[n];
        for (std::int64_t k = k_min(s, d, r, n); k <= g.k_cap; ++k) {
            if (tilde_h_at(s, d, r, n, k, at) == 0) continue;
            row.emplace_back(k, h_value(s, d, r, n, k));
            if (lowest_only) break;
        }
        if (row.empty()) g.incomplete.push_back(n);
    }
    return g;
}

/// max(s(d-1), d + max k, 2(d-s) max k, max_n MaxPrime(h_{r,n,k_{r,n}})).
inline Integer bound_N(std::int64_t s, std::int64_t d, std::int64_t r, const std::vector<LowestTerm>& lowest) {
    check_residue(s, d, r);
    require(static_cast<std::int64_t>(lowest.size()) == d - 1, "need one lowest term per n = 1..d-1");
    std::int64_t kmax = 0;
    Integer prime = 1;
    for (const auto& t : lowest) {
        require(t.found(), "lowest term for n=" + std::to_string(t.n) + " is undetermined");
        kmax = std::max(kmax, *t.k);
        prime = std::max(prime, max_prime(*t.h));
    }
    Integer bound = std::max({s * (d - 1), d + kmax, 2 * (d - s) * kmax});
    return std::max(bound, prime);
}

/// True iff h(floor(p/d)) is a p-adic unit.
inline bool certify_unit(const RatPoly& h, std::int64_t r, std::int64_t d, std::int64_t p) {
    require(is_prime(static_cast<std::uint64_t>(p)), std::to_string(p) + " is not prime");
    require(p > d, "certify_unit needs p > d");
    require(pos_mod(p, d) == r, "p is not congruent to r mod d");
    const Valuation v = ord_p(h(Integer(p / d)), p);
    return !v.is_infinite() && v.value() == 0;
}

}  // namespace gnp
