#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gnp/arith.hpp"

namespace gnp {

namespace detail {

// Dense polynomials over F_p, index = degree, trimmed.
using FpPoly = std::vector<std::uint64_t>;

inline void fp_trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline FpPoly fp_mul_mod(const FpPoly& a, const FpPoly& b, const FpPoly& f, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    FpPoly prod(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    }
    // f is monic
    const std::size_t k = f.size() - 1;
    for (std::size_t t = prod.size(); t-- > k;) {
        const std::uint64_t c = prod[t];
        if (c == 0) continue;
        for (std::size_t i = 0; i < k; ++i) prod[t - k + i] = (prod[t - k + i] + (p - c) * f[i]) % p;
        prod[t] = 0;
    }
    fp_trim(prod);
    return prod;
}

inline FpPoly fp_pow_mod(FpPoly base, std::uint64_t e, const FpPoly& f, std::uint64_t p) {
    FpPoly out{1};
    while (e != 0) {
        if (e & 1) out = fp_mul_mod(out, base, f, p);
        base = fp_mul_mod(base, base, f, p);
        e >>= 1;
    }
    return out;
}

inline FpPoly fp_mod(FpPoly a, const FpPoly& b, std::uint64_t p) {
    const std::uint64_t inv = pow_mod(b.back(), p - 2, p);
    while (a.size() >= b.size()) {
        const std::uint64_t c = a.back() * inv % p;
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = (a[shift + i] + (p - c) * b[i] % p) % p;
        fp_trim(a);
    }
    return a;
}

inline FpPoly fp_gcd(FpPoly a, FpPoly b, std::uint64_t p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        FpPoly r = fp_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// x^(p^m) mod f
inline FpPoly frobenius_power_of_x(const FpPoly& f, std::uint64_t p, std::int64_t m) {
    FpPoly h{0, 1};
    h = fp_mod(h, f, p);
    for (std::int64_t i = 0; i < m; ++i) h = fp_pow_mod(h, p, f, p);
    return h;
}

inline FpPoly fp_sub_x(FpPoly h, std::uint64_t p) {
    if (h.size() < 2) h.resize(2, 0);
    h[1] = (h[1] + p - 1) % p;
    fp_trim(h);
    return h;
}

}  // namespace detail

/// Rabin's test: f | x^{p^k} - x and gcd(x^{p^{k/q}} - x, f) = 1 for every
/// prime q | k. `f` is monic, coefficients c_0..c_k.
inline bool is_irreducible(const std::vector<std::uint64_t>& f, std::uint64_t p) {
    const auto k = static_cast<std::int64_t>(f.size()) - 1;
    if (k < 1 || f.back() != 1) return false;
    if (k == 1) return true;
    if (!detail::fp_sub_x(detail::frobenius_power_of_x(f, p, k), p).empty()) return false;
    for (std::int64_t q = 2; q <= k; ++q) {
        if (k % q != 0 || !is_prime(static_cast<std::uint64_t>(q))) continue;
        const auto g = detail::fp_gcd(f, detail::fp_sub_x(detail::frobenius_power_of_x(f, p, k / q), p), p);
        if (g.size() != 1) return false;
    }
    return true;
}

/// F_{p^k} = F_p[x]/(modulus), elements in the power basis.
class FiniteField {
  public:
    static constexpr std::int64_t max_degree = 8;
    using Elem = std::array<std::uint64_t, max_degree>;

    FiniteField(std::int64_t p, std::vector<std::uint64_t> modulus) : p_(static_cast<std::uint64_t>(p)), modulus_(std::move(modulus)) {
        k_ = static_cast<std::int64_t>(modulus_.size()) - 1;
        require(k_ >= 1 && k_ <= max_degree, "extension degree out of range");
        require(p_ < (1u << 24), "characteristic too large for word-sized field arithmetic");
        require(is_irreducible(modulus_, p_), "modulus is not irreducible");
        size_ = 1;
        for (std::int64_t i = 0; i < k_; ++i) size_ *= p_;
        for (std::int64_t i = 0; i < k_; ++i) {
            Elem basis{};
            basis[static_cast<std::size_t>(i)] = 1;
            basis_trace_[static_cast<std::size_t>(i)] = trace_by_orbit(basis);
        }
    }

    std::int64_t p() const { return static_cast<std::int64_t>(p_); }
    std::int64_t degree() const { return k_; }
    std::uint64_t size() const { return size_; }
    /// Monic modulus coefficients c_0..c_k.
    const std::vector<std::uint64_t>& modulus() const { return modulus_; }

    Elem from_index(std::uint64_t idx) const {
        Elem e{};
        for (std::int64_t i = 0; i < k_; ++i) {
            e[static_cast<std::size_t>(i)] = idx % p_;
            idx /= p_;
        }
        return e;
    }
    Elem from_prime_field(std::uint64_t c) const {
        Elem e{};
        e[0] = c % p_;
        return e;
    }

    /// Odometer step through the power basis, matching from_index order.
    void increment(Elem& e) const {
        for (std::int64_t i = 0; i < k_; ++i) {
            auto& c = e[static_cast<std::size_t>(i)];
            if (++c < p_) return;
            c = 0;
        }
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem out{};
        for (std::int64_t i = 0; i < k_; ++i) {
            const auto u = static_cast<std::size_t>(i);
            out[u] = (a[u] + b[u]) % p_;
        }
        return out;
    }

    Elem mul(const Elem& a, const Elem& b) const {
        std::array<std::uint64_t, 2 * max_degree> prod{};
        const auto k = static_cast<std::size_t>(k_);
        for (std::size_t i = 0; i < k; ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = 0; j < k; ++j) prod[i + j] += a[i] * b[j];
        }
        for (std::size_t t = 2 * k - 1; t-- > 0;) prod[t] %= p_;
        for (std::size_t t = 2 * k - 1; t-- > k;) {
            const std::uint64_t c = prod[t];
            if (c == 0) continue;
            for (std::size_t i = 0; i < k; ++i) prod[t - k + i] = (prod[t - k + i] + (p_ - c) * modulus_[i]) % p_;
        }
        Elem out{};
        for (std::size_t i = 0; i < k; ++i) out[i] = prod[i];
        return out;
    }

    Elem pow(Elem base, std::uint64_t e) const {
        Elem out = from_prime_field(1);
        while (e != 0) {
            if (e & 1) out = mul(out, base);
            base = mul(base, base);
            e >>= 1;
        }
        return out;
    }

    /// x + x^p + ... + x^{p^{k-1}}, which lies in the prime field.
    std::uint64_t trace_by_orbit(const Elem& x) const {
        Elem acc{};
        Elem conj = x;
        for (std::int64_t i = 0; i < k_; ++i) {
            acc = add(acc, conj);
            conj = pow(conj, p_);
        }
        for (std::int64_t i = 1; i < k_; ++i) {
            if (acc[static_cast<std::size_t>(i)] != 0) throw ConsistencyError("trace left the prime field");
        }
        return acc[0];
    }

    /// Trace through the precomputed traces of the power basis.
    std::uint64_t trace(const Elem& x) const {
        std::uint64_t t = 0;
        for (std::int64_t i = 0; i < k_; ++i) {
            const auto u = static_cast<std::size_t>(i);
            t += x[u] * basis_trace_[u];
        }
        return t % p_;
    }

  private:
    std::uint64_t p_;
    std::vector<std::uint64_t> modulus_;
    std::int64_t k_ = 0;
    std::uint64_t size_ = 0;
    std::array<std::uint64_t, max_degree> basis_trace_{};
};

/// Deterministic field: the first monic irreducible of degree k when
/// candidates are ordered by (c_{k-1}, ..., c_0) lexicographically.
inline FiniteField build_field(std::int64_t p, std::int64_t k) {
    require(is_prime(static_cast<std::uint64_t>(p)), std::to_string(p) + " is not prime");
    require(k >= 1 && k <= FiniteField::max_degree, "extension degree out of range");
    const auto up = static_cast<std::uint64_t>(p);
    std::uint64_t count = 1;
    for (std::int64_t i = 0; i < k; ++i) count *= up;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::vector<std::uint64_t> f(static_cast<std::size_t>(k) + 1, 0);
        std::uint64_t rest = idx;
        for (std::int64_t i = 0; i < k; ++i) {
            f[static_cast<std::size_t>(i)] = rest % up;
            rest /= up;
        }
        f.back() = 1;
        if (is_irreducible(f, up)) return FiniteField(p, std::move(f));
    }
    throw ConsistencyError("no irreducible polynomial found");
}

}  // namespace gnp
