#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "gnp/arith.hpp"
#include "gnp/cyclotomic.hpp"
#include "gnp/newton_polygon.hpp"

namespace testing_support {

using gnp::Integer;
using gnp::Rational;

// Seeded source for property tests.
class Gen {
  public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
    }
    Integer big(int digits) {
        Integer x = 0;
        for (int i = 0; i < digits; ++i) x = x * 10 + integer(0, 9);
        return integer(0, 1) ? x : Integer(-x);
    }
    Rational rational(std::int64_t bound) {
        Rational q(Integer(integer(-bound, bound)), Integer(integer(1, bound)));
        q.canonicalize();
        return q;
    }
    Rational nonzero_rational(std::int64_t bound) {
        for (;;) {
            Rational q = rational(bound);
            if (q != 0) return q;
        }
    }
    bool coin() { return integer(0, 1) == 1; }

    // Points with distinct x in 0..max_x, always including x = 0.
    std::vector<gnp::Point> point_set(std::int64_t max_x, std::int64_t bound) {
        std::vector<gnp::Point> pts{{Rational(0), rational(bound)}};
        for (std::int64_t x = 1; x <= max_x; ++x) {
            if (coin()) pts.push_back({Rational(x), rational(bound)});
        }
        if (pts.size() == 1) pts.push_back({Rational(max_x), rational(bound)});
        return pts;
    }

    std::mt19937_64& engine() { return rng_; }

  private:
    std::mt19937_64 rng_;
};

inline const std::vector<std::pair<std::int64_t, std::int64_t>>& sd_grid() {
    static const std::vector<std::pair<std::int64_t, std::int64_t>> grid{{1, 3}, {2, 3}, {2, 5}, {3, 4}, {3, 5}, {4, 5}};
    return grid;
}

inline std::vector<std::int64_t> valid_residues(std::int64_t d) {
    std::vector<std::int64_t> out;
    for (std::int64_t r = 2; r < d; ++r) {
        if (std::gcd(r, d) == 1) out.push_back(r);
    }
    return out;
}

// Every (m, n) >= 0 with d n + s m = v, by scanning m.
inline std::set<std::pair<std::int64_t, std::int64_t>> brute_solutions(std::int64_t s, std::int64_t d, std::int64_t v) {
    std::set<std::pair<std::int64_t, std::int64_t>> out;
    for (std::int64_t m = 0; s * m <= v; ++m) {
        if ((v - s * m) % d == 0) out.emplace(m, (v - s * m) / d);
    }
    return out;
}

// Least nonnegative x with s x = ri - j mod d, by search.
inline std::int64_t brute_m(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t i, std::int64_t j) {
    for (std::int64_t x = 0; x < d; ++x) {
        if (((s * x - (r * i - j)) % d + d) % d == 0) return x;
    }
    return -1;
}

inline int brute_sign(const std::vector<int>& sigma) {
    int sign = 1;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        for (std::size_t j = i + 1; j < sigma.size(); ++j) {
            if (sigma[i] > sigma[j]) sign = -sign;
        }
    }
    return sign;
}

struct BruteElement {
    std::vector<int> sigma;
    std::vector<std::int64_t> ells;
    friend bool operator<(const BruteElement& a, const BruteElement& b) {
        return std::tie(a.sigma, a.ells) < std::tie(b.sigma, b.ells);
    }
    friend bool operator==(const BruteElement& a, const BruteElement& b) {
        return a.sigma == b.sigma && a.ells == b.ells;
    }
};

// The set S(k): every permutation and every ell-vector in [0, k/d]^n whose
// total hits k.
inline std::set<BruteElement> brute_S(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t n, std::int64_t k) {
    std::set<BruteElement> out;
    std::vector<int> sigma(static_cast<std::size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 1);
    const std::int64_t top = k / d;
    do {
        std::vector<std::int64_t> ells(static_cast<std::size_t>(n), 0);
        for (;;) {
            std::int64_t total = 0;
            for (std::int64_t i = 0; i < n; ++i) total += brute_m(s, d, r, i + 1, sigma[i]) + d * ells[i];
            if (total == k) out.insert({sigma, ells});
            std::size_t pos = 0;
            while (pos < ells.size() && ells[pos] == top) ells[pos++] = 0;
            if (pos == ells.size()) break;
            ++ells[pos];
        }
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

inline std::int64_t brute_kmin(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t n) {
    std::vector<int> sigma(static_cast<std::size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 1);
    std::int64_t best = -1;
    do {
        std::int64_t total = 0;
        for (std::int64_t i = 0; i < n; ++i) total += brute_m(s, d, r, i + 1, sigma[i]);
        if (best < 0 || total < best) best = total;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return best;
}

inline Rational brute_falling(const Rational& y, std::int64_t t) {
    Rational out = 1;
    for (std::int64_t i = 0; i < t; ++i) out *= y - i;
    return out;
}

inline Integer brute_factorial(std::int64_t n) {
    Integer out = 1;
    for (std::int64_t i = 2; i <= n; ++i) out *= i;
    return out;
}

// h~_{r,n,k}(z) straight from its definition, at a rational point.
inline Rational brute_tilde_h(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t n, std::int64_t k,
                              const Rational& z) {
    const std::int64_t b = k - brute_kmin(s, d, r, n);
    Rational total = 0;
    for (const auto& e : brute_S(s, d, r, n, k)) {
        Rational term = brute_sign(e.sigma);
        for (std::int64_t i = 1; i <= n; ++i) {
            const std::int64_t j = e.sigma[static_cast<std::size_t>(i - 1)];
            const std::int64_t ell = e.ells[static_cast<std::size_t>(i - 1)];
            const std::int64_t m = brute_m(s, d, r, i, j);
            const std::int64_t t = (r * i) / d - (r * i - j - s * m) / d + s * ell;
            term *= Rational(brute_factorial(d - 1 + b)) / brute_factorial(m + d * ell);
            term *= brute_falling(Rational(i) * z + (r * i) / d, t);
        }
        total += term;
    }
    return total;
}

// Lower hull by brute force: keep a point iff no chord between two other
// points passes weakly below it, then drop collinear interior points.
inline std::vector<gnp::Point> brute_hull(std::vector<gnp::Point> pts) {
    std::sort(pts.begin(), pts.end(), [](const gnp::Point& a, const gnp::Point& b) { return a.x < b.x; });
    std::vector<gnp::Point> keep;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        bool below = false;
        for (std::size_t i = 0; i < k && !below; ++i) {
            for (std::size_t j = k + 1; j < pts.size() && !below; ++j) {
                const Rational chord = pts[i].y + (pts[j].y - pts[i].y) * (pts[k].x - pts[i].x) / (pts[j].x - pts[i].x);
                if (chord <= pts[k].y) below = true;
            }
        }
        if (!below) keep.push_back(pts[k]);
    }
    return keep;
}

// ord_p of an element of Z[zeta_p] from its norm: the norm has p-adic
// order (p-1) * ord.
inline Rational ord_by_norm(const gnp::CycloInt& x) {
    const std::int64_t p = x.p();
    gnp::CycloInt prod = gnp::CycloInt::integer(p, 1);
    for (std::int64_t u = 1; u < p; ++u) prod = prod * x.conjugate(u);
    return gnp::make_rational(gnp::ord_p(prod.coeffs()[0], Integer(static_cast<long>(p))), p - 1);
}

}  // namespace testing_support
