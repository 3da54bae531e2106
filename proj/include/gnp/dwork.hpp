#pragma once

// Tame and Artin-Hasse truncations of the Dwork Frobenius matrix for
// x^d + A x^s, and the p-adic orders of their leading principal minors.
//
// Entries are polynomials in A whose coefficients are rational multiples
// of powers of gamma, ord_p(gamma) = 1/(p-1). gamma is never materialized:
// a term is (A-degree, gamma-exponent) -> rational coefficient.

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gnp/arith.hpp"
#include "gnp/frobenius.hpp"
#include "gnp/genpoly.hpp"

namespace gnp {

class GradedAPoly {
  public:
    struct Key {
        std::int64_t a_degree;
        Rational gamma_exp;

        friend bool operator<(const Key& x, const Key& y) {
            if (x.a_degree != y.a_degree) return x.a_degree < y.a_degree;
            return x.gamma_exp < y.gamma_exp;
        }
        friend bool operator==(const Key& x, const Key& y) {
            return x.a_degree == y.a_degree && x.gamma_exp == y.gamma_exp;
        }
    };
    using Terms = std::map<Key, Rational>;

    GradedAPoly() = default;

    static GradedAPoly one() {
        GradedAPoly g;
        g.terms_.emplace(Key{0, Rational(0)}, Rational(1));
        return g;
    }

    void add_term(std::int64_t a_degree, const Rational& gamma_exp, const Rational& coeff) {
        if (coeff == 0) return;
        auto [it, fresh] = terms_.try_emplace(Key{a_degree, gamma_exp}, coeff);
        if (!fresh) {
            it->second += coeff;
            if (it->second == 0) terms_.erase(it);
        }
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    GradedAPoly& operator+=(const GradedAPoly& o) {
        for (const auto& [k, c] : o.terms_) add_term(k.a_degree, k.gamma_exp, c);
        return *this;
    }
    GradedAPoly operator-() const {
        GradedAPoly g = *this;
        for (auto& [k, c] : g.terms_) c = -c;
        return g;
    }

    /// Product, dropping terms whose gamma-exponent exceeds `cutoff`.
    GradedAPoly times(const GradedAPoly& o, const std::optional<Rational>& cutoff = std::nullopt) const {
        GradedAPoly out;
        for (const auto& [ka, ca] : terms_) {
            for (const auto& [kb, cb] : o.terms_) {
                Rational e = ka.gamma_exp + kb.gamma_exp;
                if (cutoff && e > *cutoff) continue;
                out.add_term(ka.a_degree + kb.a_degree, e, ca * cb);
            }
        }
        return out;
    }

    friend bool operator==(const GradedAPoly& a, const GradedAPoly& b) { return a.terms_ == b.terms_; }

  private:
    Terms terms_;
};

/// ord_p of coeff * gamma^e, i.e. ord_p(coeff) + e/(p-1).
inline Valuation term_valuation(const Rational& coeff, const Rational& gamma_exp, std::int64_t p) {
    const Valuation c = ord_p(coeff, p);
    if (c.is_infinite()) return c;
    return Valuation(c.value() + gamma_exp / (p - 1));
}

/// The gamma-grade (p-1) n(n+1) / (2d) shared by every n x n minor.
inline Rational minor_grade(std::int64_t d, std::int64_t p, std::int64_t n) {
    return make_rational((p - 1) * n * (n + 1), 2 * d);
}

namespace detail {

inline void check_dwork_prime(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t p) {
    detail::check_generators(s, d);
    require(is_prime(static_cast<std::uint64_t>(p)), std::to_string(p) + " is not prime");
    require(p > s * (d - 1), "need p > s(d-1) = " + std::to_string(s * (d - 1)));
    require(pos_mod(p, d) == r, "p=" + std::to_string(p) + " is not congruent to r=" + std::to_string(r) + " mod d");
}

// Cofactor expansion along rows, memoized on the set of remaining columns.
inline GradedAPoly determinant(const std::vector<std::vector<GradedAPoly>>& mat,
                               const std::optional<Rational>& cutoff) {
    const std::size_t n = mat.size();
    if (n == 0) return GradedAPoly::one();
    if (n > 20) throw std::invalid_argument("determinant size too large");
    std::map<std::uint32_t, GradedAPoly> memo;
    auto rec = [&](auto&& self, std::uint32_t cols) -> GradedAPoly {
        const auto row = n - static_cast<std::size_t>(std::popcount(cols));
        if (row == n) return GradedAPoly::one();
        if (auto it = memo.find(cols); it != memo.end()) return it->second;
        GradedAPoly acc;
        int position = 0;
        for (std::size_t c = 0; c < n; ++c) {
            if (!(cols & (1u << c))) continue;
            const GradedAPoly& entry = mat[row][c];
            if (!entry.is_zero()) {
                GradedAPoly sub = entry.times(self(self, cols & ~(1u << c)), cutoff);
                acc += (position % 2 == 0) ? sub : -sub;
            }
            ++position;
        }
        memo.emplace(cols, acc);
        return acc;
    };
    return rec(rec, (1u << n) - 1u);
}

}  // namespace detail

/// F_{pi-j, ell_cap}(A) = sum_{ell <= ell_cap} A^{m^ell} gamma^{m^ell + n^ell} / (m^ell! n^ell!)
inline GradedAPoly tame_entry(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t p, std::int64_t i,
                              std::int64_t j, std::int64_t ell_cap) {
    detail::check_dwork_prime(s, d, r, p);
    require(i >= 1 && i <= d - 1 && j >= 1 && j <= d - 1, "indices i, j must lie in 1..d-1");
    require(ell_cap >= 0, "ell_cap must be nonnegative");
    GradedAPoly out;
    for (const auto& sol : all_solutions(s, d, p * i - j)) {
        if (sol.ell > ell_cap) break;
        out.add_term(sol.m, Rational(sol.m + sol.n), inverse_factorial(sol.m) * inverse_factorial(sol.n));
    }
    return out;
}

/// floor((k_cap - k°)/d), the truncation matching a degree cap.
inline std::int64_t default_ell_cap(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t n,
                                    std::optional<std::int64_t> k_cap = std::nullopt) {
    const std::int64_t cap = k_cap.value_or(default_k_cap(s, d, r));
    const std::int64_t b = cap - k_min(s, d, r, n);
    require(b >= 0, "k_cap is below k_min");
    return b / d;
}

/// P_{n, ell_cap}(A) = det(F_{pi-j, ell_cap})_{1 <= i,j <= n}.
inline GradedAPoly tame_minor(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t p, std::int64_t n,
                              std::int64_t ell_cap) {
    check_minor_size(d, n);
    std::vector<std::vector<GradedAPoly>> mat(static_cast<std::size_t>(n));
    for (std::int64_t i = 1; i <= n; ++i) {
        for (std::int64_t j = 1; j <= n; ++j) mat[i - 1].push_back(tame_entry(s, d, r, p, i, j, ell_cap));
    }
    return detail::determinant(mat, std::nullopt);
}

struct AlphaKappa {
    Rational alpha;
    Integer kappa;
};

/// alpha_{r,n,k} and kappa_{r,n,k}; the identity h~(floor(p/d)) = kappa *
/// alpha is checked before returning.
inline AlphaKappa alpha_kappa(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t p, std::int64_t n,
                              std::int64_t k) {
    check_residue(s, d, r);
    check_minor_size(d, n);
    detail::check_dwork_prime(s, d, r, p);
    const std::int64_t b = k - k_min(s, d, r, n);
    require(b >= 0, "k is below k_min");
    require(p >= d + b, "need p >= d + (k - k_min)");

    AlphaKappa out;
    for (const auto& e : enum_S(s, d, r, n, k)) {
        Rational prod = e.sign;
        for (std::size_t idx = 0; idx < e.sigma.size(); ++idx) {
            const PijData base = pij_data(s, d, p, static_cast<std::int64_t>(idx) + 1, e.sigma[idx]);
            prod *= inverse_factorial(base.m + d * e.ells[idx]) * inverse_factorial(base.n - s * e.ells[idx]);
        }
        out.alpha += prod;
    }
    out.kappa = 1;
    for (std::int64_t i = 1; i <= n; ++i) out.kappa *= factorial(d - 1 + b) * factorial(p * i / d);

    const Rational lhs = tilde_h(s, d, r, n, k)(Integer(p / d));
    if (lhs != out.kappa * out.alpha) {
        throw ConsistencyError("kappa*alpha identity fails at s=" + std::to_string(s) + " d=" + std::to_string(d) +
                               " r=" + std::to_string(r) + " p=" + std::to_string(p) + " n=" + std::to_string(n) +
                               " k=" + std::to_string(k));
    }
    return out;
}

struct MinorValuation {
    enum class Status { Unique, Ambiguous };

    Status status = Status::Unique;
    Valuation value;                      // the minimum term valuation
    std::optional<std::int64_t> a_degree;  // where the minimum sits
    /// The minimum also bounds every term the truncation dropped, so it is
    /// the order of the untruncated minor as well.
    bool certified = false;

    bool unambiguous() const { return status == Status::Unique; }
};

namespace detail {

inline MinorValuation unique_minimum(const GradedAPoly& minor, std::int64_t p) {
    MinorValuation out;
    for (const auto& [key, coeff] : minor.terms()) {
        const Valuation v = term_valuation(coeff, key.gamma_exp, p);
        if (v < out.value) {
            out.value = v;
            out.a_degree = key.a_degree;
            out.status = MinorValuation::Status::Unique;
        } else if (v == out.value && !v.is_infinite()) {
            out.status = MinorValuation::Status::Ambiguous;
        }
    }
    return out;
}

}  // namespace detail

/// Order of the tame minor P_{n,ell_cap}. With `a_residue` the minor is read
/// at a Teichmuller lift, whose powers are units and leave term orders
/// unchanged; only nonvanishing mod p is checked.
inline MinorValuation minor_valuation(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t p, std::int64_t n,
                                      std::int64_t ell_cap, std::optional<std::int64_t> a_residue = std::nullopt) {
    if (a_residue) require(pos_mod(*a_residue, p) != 0, "a must be nonzero mod p");
    const GradedAPoly minor = tame_minor(s, d, r, p, n, ell_cap);
    MinorValuation out = detail::unique_minimum(minor, p);
    if (out.unambiguous() && !out.value.is_infinite() && r != 1 && d - 1 + d * ell_cap < p) {
        // dropped terms have A-degree >= k° + d(ell_cap+1) and p-integral coefficients
        const std::int64_t first_dropped = k_min(s, d, r, n) + d * (ell_cap + 1);
        const Rational tail = (minor_grade(d, p, n) + make_rational(d - s, d) * first_dropped) / (p - 1);
        out.certified = out.value.value() < tail;
    }
    return out;
}

/// Coefficients u_t of the Artin-Hasse exponential exp(sum_i X^{p^i}/p^i);
/// lambda_t = u_t gamma^t.
struct ArtinHasseCoeffs {
    std::int64_t p = 0;
    std::vector<Rational> u;
};

/// Power-series exponential: t u_t = sum_{k=1}^t k g_k u_{t-k}.
inline ArtinHasseCoeffs artin_hasse(std::int64_t p, std::int64_t max_degree) {
    require(is_prime(static_cast<std::uint64_t>(p)), std::to_string(p) + " is not prime");
    require(max_degree >= 0, "degree must be nonnegative");
    ArtinHasseCoeffs out;
    out.p = p;
    // k * g_k: nonzero only at k = p^i, where it equals 1.
    std::vector<std::int64_t> powers;
    for (std::int64_t q = 1; q <= max_degree; q *= p) {
        powers.push_back(q);
        if (q > max_degree / p) break;
    }
    out.u.assign(static_cast<std::size_t>(max_degree) + 1, Rational(0));
    out.u[0] = 1;
    for (std::int64_t t = 1; t <= max_degree; ++t) {
        Rational acc = 0;
        for (std::int64_t q : powers) {
            if (q > t) break;
            acc += out.u[static_cast<std::size_t>(t - q)];
        }
        out.u[static_cast<std::size_t>(t)] = acc / t;
    }
    return out;
}

/// F'_{pi-j}(A) = sum over all solutions of u_{n^ell} u_{m^ell} A^{m^ell} gamma^{m^ell + n^ell},
/// keeping gamma-exponents <= cutoff.
inline GradedAPoly fredholm_entry(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t p, std::int64_t i,
                                  std::int64_t j, const Rational& cutoff, const ArtinHasseCoeffs& ah) {
    detail::check_dwork_prime(s, d, r, p);
    GradedAPoly out;
    for (const auto& sol : all_solutions(s, d, p * i - j)) {
        const Rational e(sol.m + sol.n);
        if (e > cutoff) continue;
        out.add_term(sol.m, e, ah.u.at(static_cast<std::size_t>(sol.m)) * ah.u.at(static_cast<std::size_t>(sol.n)));
    }
    return out;
}

/// det(F'_{pi-j})_{1 <= i,j <= n} truncated at gamma-exponent `cutoff`.
inline GradedAPoly fredholm_minor(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t p, std::int64_t n,
                                  const Rational& cutoff) {
    check_minor_size(d, n);
    const Integer top = floor_div(cutoff.get_num(), cutoff.get_den());
    const ArtinHasseCoeffs ah = artin_hasse(p, std::max<long>(0, top.get_si()));
    std::vector<std::vector<GradedAPoly>> mat(static_cast<std::size_t>(n));
    for (std::int64_t i = 1; i <= n; ++i) {
        for (std::int64_t j = 1; j <= n; ++j) mat[i - 1].push_back(fredholm_entry(s, d, r, p, i, j, cutoff, ah));
    }
    return detail::determinant(mat, cutoff);
}

/// Order of the Artin-Hasse minor from its terms up to `gamma_cutoff`.
/// Every dropped term has order > cutoff/(p-1); a minimum above that is
/// not certified and raises PrecisionError.
inline MinorValuation fredholm_minor_valuation(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t p,
                                               std::int64_t n, const Rational& gamma_cutoff) {
    const GradedAPoly minor = fredholm_minor(s, d, r, p, n, gamma_cutoff);
    MinorValuation out = detail::unique_minimum(minor, p);
    const Rational horizon = gamma_cutoff / (p - 1);
    if (out.value.is_infinite() || out.value.value() > horizon) {
        throw PrecisionError("gamma cutoff " + gamma_cutoff.get_str() + " cannot certify the order of the " +
                             std::to_string(n) + "x" + std::to_string(n) + " minor");
    }
    out.certified = out.unambiguous();
    return out;
}

}  // namespace gnp
