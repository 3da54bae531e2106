#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "gnp/arith.hpp"
#include "gnp/cyclotomic.hpp"
#include "gnp/finite_field.hpp"
#include "gnp/newton_polygon.hpp"

namespace gnp {

/// Joint counts H[u * p + v] = #{x in F_{p^k} : Tr(x^d) = u, Tr(x^s) = v}.
/// Since Tr is F_p-linear, N_t(a) = sum over u + a v = t of H[u * p + v].
struct TraceHistogram {
    std::int64_t p = 0;
    std::int64_t k = 0;
    std::vector<std::uint64_t> counts;
};

/// Largest p for which the p x p joint histogram is kept.
inline constexpr std::int64_t joint_histogram_limit = 512;

namespace detail {

inline unsigned worker_count(std::uint64_t work) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (work < 4096) return 1;
    return static_cast<unsigned>(std::min<std::uint64_t>(hw, work / 1024));
}

// Runs body(begin, end, bucket) over disjoint index ranges with a private
// bucket per worker, then sums the buckets.
template <class Body>
std::vector<std::uint64_t> bucketed_scan(std::uint64_t total, std::size_t buckets, Body body) {
    const unsigned workers = worker_count(total);
    std::vector<std::vector<std::uint64_t>> local(workers, std::vector<std::uint64_t>(buckets, 0));
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t begin = std::min(total, w * chunk);
        const std::uint64_t end = std::min(total, begin + chunk);
        pool.emplace_back([&, w, begin, end] { body(begin, end, local[w]); });
    }
    for (auto& t : pool) t.join();
    std::vector<std::uint64_t> out(buckets, 0);
    for (const auto& l : local) {
        for (std::size_t i = 0; i < buckets; ++i) out[i] += l[i];
    }
    return out;
}

inline std::pair<FiniteField::Elem, FiniteField::Elem> powers(const FiniteField& field, const FiniteField::Elem& x,
                                                              std::int64_t s, std::int64_t d) {
    const auto xs = field.pow(x, static_cast<std::uint64_t>(s));
    const auto xd = field.mul(xs, field.pow(x, static_cast<std::uint64_t>(d - s)));
    return {xd, xs};
}

inline void check_exponents(std::int64_t s, std::int64_t d) {
    require(d >= 1 && s >= 0 && s <= d, "need 0 <= s <= d and d >= 1");
}

inline void check_counts(const std::vector<std::uint64_t>& n, const FiniteField& field) {
    std::uint64_t total = 0;
    for (auto c : n) total += c;
    if (total != field.size()) throw ConsistencyError("trace counts do not sum to the field size");
}

}  // namespace detail

inline TraceHistogram trace_histogram(std::int64_t s, std::int64_t d, const FiniteField& field) {
    detail::check_exponents(s, d);
    const auto p = static_cast<std::uint64_t>(field.p());
    require(field.p() <= joint_histogram_limit, "joint histogram needs p <= " + std::to_string(joint_histogram_limit));
    TraceHistogram h;
    h.p = field.p();
    h.k = field.degree();
    h.counts = detail::bucketed_scan(field.size(), p * p, [&](std::uint64_t begin, std::uint64_t end, auto& bucket) {
        auto x = field.from_index(begin);
        for (std::uint64_t i = begin; i < end; ++i, field.increment(x)) {
            const auto [xd, xs] = detail::powers(field, x, s, d);
            ++bucket[field.trace(xd) * p + field.trace(xs)];
        }
    });
    detail::check_counts(h.counts, field);
    return h;
}

/// N_t = #{x : Tr(x^d + a x^s) = t} for t = 0..p-1.
inline std::vector<std::uint64_t> trace_counts(std::int64_t s, std::int64_t d, std::int64_t a, const FiniteField& field) {
    detail::check_exponents(s, d);
    const auto p = static_cast<std::uint64_t>(field.p());
    const auto abar = static_cast<std::uint64_t>(pos_mod(a, field.p()));
    auto n = detail::bucketed_scan(field.size(), p, [&](std::uint64_t begin, std::uint64_t end, auto& bucket) {
        auto x = field.from_index(begin);
        for (std::uint64_t i = begin; i < end; ++i, field.increment(x)) {
            const auto [xd, xs] = detail::powers(field, x, s, d);
            ++bucket[(field.trace(xd) + abar * field.trace(xs)) % p];
        }
    });
    detail::check_counts(n, field);
    return n;
}

inline std::vector<std::uint64_t> trace_counts(const TraceHistogram& h, std::int64_t a) {
    const auto p = static_cast<std::uint64_t>(h.p);
    const auto abar = static_cast<std::uint64_t>(pos_mod(a, h.p));
    std::vector<std::uint64_t> n(p, 0);
    for (std::uint64_t u = 0; u < p; ++u) {
        for (std::uint64_t v = 0; v < p; ++v) n[(u + abar * v) % p] += h.counts[u * p + v];
    }
    return n;
}

inline CycloInt sum_of_counts(std::int64_t p, const std::vector<std::uint64_t>& n) {
    std::vector<Integer> raw(n.size());
    for (std::size_t t = 0; t < n.size(); ++t) raw[t] = Integer(static_cast<unsigned long>(n[t]));
    return CycloInt::from_exponents(p, raw);
}

/// S_k = sum over F_{p^k} of zeta^{Tr(x^d + a x^s)}, k = field.degree().
inline CycloInt exp_sum(std::int64_t s, std::int64_t d, std::int64_t a, const FiniteField& field) {
    return sum_of_counts(field.p(), trace_counts(s, d, a, field));
}

/// Sum of p^k over k = 1..d-1: field elements visited for one family.
inline Integer oracle_cost(std::int64_t p, std::int64_t d) {
    Integer total = 0;
    Integer pk = 1;
    for (std::int64_t k = 1; k <= d - 1; ++k) {
        pk *= p;
        total += pk;
    }
    return total;
}

inline void check_budget(std::int64_t p, std::int64_t d, const Integer& budget) {
    const Integer cost = oracle_cost(p, d);
    if (cost > budget) {
        throw BudgetError("oracle for p=" + std::to_string(p) + ", d=" + std::to_string(d) + " needs " + cost.get_str() +
                          " evaluations, budget is " + budget.get_str());
    }
}

/// The exponential sums S_1..S_{d-1} of x^d + a x^s over F_p for every a,
/// sharing one scan of each extension field across all a.
class SumFamily {
  public:
    SumFamily(std::int64_t s, std::int64_t d, std::int64_t p, std::int64_t max_k)
        : s_(s), d_(d), p_(p) {
        require(is_prime(static_cast<std::uint64_t>(p)), std::to_string(p) + " is not prime");
        detail::check_exponents(s, d);
        require(max_k >= 1 && max_k <= FiniteField::max_degree, "extension degree out of range");
        for (std::int64_t k = 1; k <= max_k; ++k) fields_.push_back(build_field(p, k));
        if (p <= joint_histogram_limit) {
            for (const auto& f : fields_) histograms_.push_back(trace_histogram(s, d, f));
        }
    }

    std::int64_t s() const { return s_; }
    std::int64_t d() const { return d_; }
    std::int64_t p() const { return p_; }
    std::int64_t max_k() const { return static_cast<std::int64_t>(fields_.size()); }

    std::vector<std::uint64_t> counts(std::int64_t a, std::int64_t k) const {
        require(k >= 1 && k <= max_k(), "extension degree not available");
        const auto i = static_cast<std::size_t>(k - 1);
        if (!histograms_.empty()) return trace_counts(histograms_[i], a);
        return trace_counts(s_, d_, a, fields_[i]);
    }
    CycloInt sum(std::int64_t a, std::int64_t k) const { return sum_of_counts(p_, counts(a, k)); }

  private:
    std::int64_t s_, d_, p_;
    std::vector<FiniteField> fields_;
    std::vector<TraceHistogram> histograms_;
};

struct LFunction {
    std::int64_t p = 0, s = 0, d = 0, a = 0;
    std::vector<CycloInt> coeffs;  // c_0 = 1, ..., c_{d-1}
};

/// c_i from i c_i = sum_{j=1..i} S_j c_{i-j}, given S_1..S_m.
inline std::vector<CycloInt> newton_recursion(std::int64_t p, const std::vector<CycloInt>& sums) {
    std::vector<CycloInt> c{CycloInt::integer(p, 1)};
    for (std::size_t i = 1; i <= sums.size(); ++i) {
        CycloInt acc(p);
        for (std::size_t j = 1; j <= i; ++j) acc += sums[j - 1] * c[i - j];
        c.push_back(acc.divided_exactly(Integer(static_cast<unsigned long>(i))));
    }
    return c;
}

namespace detail {

inline void check_l_hypotheses(std::int64_t s, std::int64_t d, std::int64_t p) {
    require(is_prime(static_cast<std::uint64_t>(p)), std::to_string(p) + " is not prime");
    require(d >= 2 && s >= 0 && s < d, "need d >= 2 and 0 <= s < d");
    require(d % p != 0, "p must not divide d");
    require(d - 1 <= FiniteField::max_degree, "d too large for the oracle");
}

inline LFunction assemble_l(const SumFamily& fam, std::int64_t a, bool check_degree) {
    const std::int64_t p = fam.p(), d = fam.d();
    std::vector<CycloInt> sums;
    const std::int64_t top = check_degree ? d : d - 1;
    for (std::int64_t k = 1; k <= top; ++k) sums.push_back(fam.sum(a, k));
    auto c = newton_recursion(p, sums);
    if (check_degree) {
        if (!c.back().is_zero()) throw ConsistencyError("L-function has degree >= d");
        c.pop_back();
    }
    if (c.back().is_zero()) throw ConsistencyError("L-function has degree < d-1");
    const Valuation top_ord = pi_ord(c.back());
    if (!(top_ord == Valuation(make_rational(d - 1, 2)))) {
        throw ConsistencyError("leading L coefficient has valuation " + top_ord.str() + ", expected (d-1)/2");
    }
    return LFunction{p, fam.s(), d, pos_mod(a, p), std::move(c)};
}

}  // namespace detail

/// L(T) = exp(sum S_k T^k / k) for x^d + a x^s over F_p. With check_degree
/// the sum S_d is also counted and c_d = 0 is verified.
inline LFunction l_polynomial(std::int64_t s, std::int64_t d, std::int64_t a, std::int64_t p, bool check_degree = false) {
    detail::check_l_hypotheses(s, d, p);
    const SumFamily fam(s, d, p, check_degree ? d : d - 1);
    return detail::assemble_l(fam, a, check_degree);
}

inline LFunction l_polynomial(const SumFamily& fam, std::int64_t a) {
    detail::check_l_hypotheses(fam.s(), fam.d(), fam.p());
    require(fam.max_k() >= fam.d() - 1, "family lacks extension degrees up to d-1");
    return detail::assemble_l(fam, a, false);
}

inline NewtonPolygon newton_polygon(const LFunction& l) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < l.coeffs.size(); ++i) {
        const Valuation v = pi_ord(l.coeffs[i]);
        if (!v.is_infinite()) pts.push_back({Rational(static_cast<long>(i)), v.value()});
    }
    return lower_hull(std::move(pts));
}

inline NewtonPolygon newton_polygon(std::int64_t s, std::int64_t d, std::int64_t a, std::int64_t p) {
    return newton_polygon(l_polynomial(s, d, a, p));
}

struct ExhaustiveGnp {
    NewtonPolygon gnp;
    std::optional<std::int64_t> witness;  // least a whose NP equals gnp
    std::vector<std::int64_t> witnesses;  // every such a, ascending
    std::map<std::int64_t, NewtonPolygon> per_a;
};

/// Lower envelope of NP(x^d + a x^s) over a in F_p^*.
inline ExhaustiveGnp exhaustive_gnp(const SumFamily& fam) {
    const std::int64_t p = fam.p();
    ExhaustiveGnp out;
    std::map<Rational, Rational> lowest;
    for (std::int64_t a = 1; a < p; ++a) {
        auto np = newton_polygon(l_polynomial(fam, a));
        for (const auto& v : np.vertices()) {
            auto it = lowest.find(v.x);
            if (it == lowest.end() || v.y < it->second) lowest[v.x] = v.y;
        }
        out.per_a.emplace(a, std::move(np));
    }
    std::vector<Point> pts;
    for (const auto& [x, y] : lowest) pts.push_back({x, y});
    out.gnp = lower_hull(std::move(pts));
    for (const auto& [a, np] : out.per_a) {
        if (np == out.gnp) out.witnesses.push_back(a);
    }
    if (!out.witnesses.empty()) out.witness = out.witnesses.front();
    return out;
}

inline ExhaustiveGnp exhaustive_gnp(std::int64_t s, std::int64_t d, std::int64_t p) {
    detail::check_l_hypotheses(s, d, p);
    return exhaustive_gnp(SumFamily(s, d, p, d - 1));
}

/// Product of the Galois conjugates of L over zeta -> zeta^u, u = 1..p-1:
/// integer coefficients of T^0..T^{(d-1)(p-1)}.
inline std::vector<Integer> zeta_numerator(const LFunction& l) {
    const std::int64_t p = l.p;
    std::vector<CycloInt> prod{CycloInt::integer(p, 1)};
    for (std::int64_t u = 1; u < p; ++u) {
        std::vector<CycloInt> conj;
        for (const auto& c : l.coeffs) conj.push_back(c.conjugate(u));
        std::vector<CycloInt> next(prod.size() + conj.size() - 1, CycloInt(p));
        for (std::size_t i = 0; i < prod.size(); ++i) {
            for (std::size_t j = 0; j < conj.size(); ++j) next[i + j] += prod[i] * conj[j];
        }
        prod = std::move(next);
    }
    std::vector<Integer> out;
    for (const auto& c : prod) {
        if (!c.is_rational_integer()) throw ConsistencyError("zeta numerator has a non-integer coefficient");
        out.push_back(c.coeffs()[0]);
    }
    return out;
}

inline std::vector<Integer> zeta_numerator(std::int64_t s, std::int64_t d, std::int64_t a, std::int64_t p) {
    return zeta_numerator(l_polynomial(s, d, a, p));
}

/// The p-adic Newton polygon of an integer polynomial, both axes divided by
/// `scale`.
inline NewtonPolygon integer_newton_polygon(const std::vector<Integer>& coeffs, std::int64_t p, std::int64_t scale = 1) {
    require(scale >= 1, "scale must be positive");
    std::vector<Point> pts;
    const Integer pp(static_cast<long>(p));
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0) continue;
        pts.push_back({make_rational(static_cast<long>(i), scale), make_rational(ord_p(coeffs[i], pp), scale)});
    }
    return lower_hull(std::move(pts));
}

}  // namespace gnp
