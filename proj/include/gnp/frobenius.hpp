#pragma once

// Two-generator Frobenius problem d*n + s*m = v for coprime s < d.
//
// Above the Frobenius number ds - d - s every v is representable. The
// solution with the least m (m = s^{-1} v mod d) is the unique minimizer of
// m + n, and every other solution is obtained by trading s copies of d for
// d copies of s: (m + d*ell, n - s*ell).

#include <cstdint>
#include <string>
#include <vector>

#include "gnp/arith.hpp"

namespace gnp {

struct FrobSolution {
    std::int64_t m = 0;
    std::int64_t n = 0;
    std::int64_t ell = 0;

    friend bool operator==(const FrobSolution&, const FrobSolution&) = default;
};

/// Minimal solution data for v = p*i - j.
struct PijData {
    std::int64_t i = 0;
    std::int64_t j = 0;
    std::int64_t m = 0;  // m_ij, in 0..d-1
    std::int64_t n = 0;  // n_ij
    std::int64_t beta = 0;
};

namespace detail {

inline void check_generators(std::int64_t s, std::int64_t d) {
    require(s >= 1 && d > s, "need 1 <= s < d, got s=" + std::to_string(s) + " d=" + std::to_string(d));
    require(gcd(s, d) == 1, "gcd(s,d) must be 1, got s=" + std::to_string(s) + " d=" + std::to_string(d));
}

}  // namespace detail

inline FrobSolution min_solution(std::int64_t s, std::int64_t d, std::int64_t v) {
    detail::check_generators(s, d);
    require(v > d * s - d - s, "v=" + std::to_string(v) + " is not above the Frobenius number " + std::to_string(d * s - d - s));
    const std::int64_t m = pos_mod(mod_inverse(s, d) * pos_mod(v, d), d);
    const std::int64_t n = (v - s * m) / d;
    return {m, n, 0};
}

/// All nonnegative solutions, ordered by ell = 0, 1, ...
inline std::vector<FrobSolution> all_solutions(std::int64_t s, std::int64_t d, std::int64_t v) {
    const FrobSolution base = min_solution(s, d, v);
    std::vector<FrobSolution> out;
    out.reserve(static_cast<std::size_t>(base.n / s + 1));
    for (std::int64_t ell = 0; base.n - s * ell >= 0; ++ell) {
        out.push_back({base.m + d * ell, base.n - s * ell, ell});
    }
    return out;
}

/// m_ij = s^{-1}(r i - j) mod d depends on p only through r = p mod d.
inline std::int64_t m_entry(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t i, std::int64_t j) {
    return pos_mod(mod_inverse(s, d) * pos_mod(r * i - j, d), d);
}

inline PijData pij_data(std::int64_t s, std::int64_t d, std::int64_t p, std::int64_t i, std::int64_t j) {
    detail::check_generators(s, d);
    require(is_prime(static_cast<std::uint64_t>(p)), std::to_string(p) + " is not prime");
    require(p > s * (d - 1), "need p > s(d-1) = " + std::to_string(s * (d - 1)) + ", got p=" + std::to_string(p));
    require(d % p != 0, "p=" + std::to_string(p) + " divides d");
    require(i >= 1 && i <= d - 1 && j >= 1 && j <= d - 1, "indices i, j must lie in 1..d-1");
    const std::int64_t m = m_entry(s, d, pos_mod(p, d), i, j);
    const std::int64_t n = (p * i - j - s * m) / d;
    return {i, j, m, n, m + n};
}

}  // namespace gnp
