#include <gtest/gtest.h>

#include "gnp/cyclotomic.hpp"
#include "gnp/finite_field.hpp"
#include "gnp/gnpredict.hpp"
#include "gnp/oracle.hpp"

#include "support.hpp"

using namespace gnp;
namespace ts = testing_support;

namespace {

NewtonPolygon poly(std::initializer_list<std::pair<long, Rational>> pts) {
    std::vector<Point> v;
    for (const auto& [x, y] : pts) v.push_back({Rational(x), y});
    return NewtonPolygon::from_vertices(v);
}

// No root in F_p: irreducible for degree <= 3.
bool rootless(const std::vector<std::uint64_t>& f, std::uint64_t p) {
    for (std::uint64_t x = 0; x < p; ++x) {
        std::uint64_t acc = 0;
        for (auto it = f.rbegin(); it != f.rend(); ++it) acc = (acc * x + *it) % p;
        if (acc == 0) return false;
    }
    return true;
}

// The last monic irreducible in build_field's order.
FiniteField last_field(std::int64_t p, std::int64_t k) {
    const auto up = static_cast<std::uint64_t>(p);
    std::uint64_t count = 1;
    for (std::int64_t i = 0; i < k; ++i) count *= up;
    for (std::uint64_t idx = count; idx-- > 0;) {
        std::vector<std::uint64_t> f(static_cast<std::size_t>(k) + 1, 0);
        std::uint64_t rest = idx;
        for (std::int64_t i = 0; i < k; ++i) {
            f[static_cast<std::size_t>(i)] = rest % up;
            rest /= up;
        }
        f.back() = 1;
        if (is_irreducible(f, up)) return FiniteField(p, f);
    }
    throw std::logic_error("no irreducible");
}

CycloInt naive_prime_field_sum(std::int64_t s, std::int64_t d, std::int64_t a, std::int64_t p) {
    std::vector<Integer> raw(static_cast<std::size_t>(p));
    for (std::int64_t x = 0; x < p; ++x) {
        const auto up = static_cast<std::uint64_t>(p);
        const auto ux = static_cast<std::uint64_t>(x);
        const std::uint64_t v = (detail::pow_mod(ux, static_cast<std::uint64_t>(d), up) +
                                 static_cast<std::uint64_t>(pos_mod(a, p)) * detail::pow_mod(ux, static_cast<std::uint64_t>(s), up)) % up;
        raw[v] += 1;
    }
    return CycloInt::from_exponents(p, raw);
}

}  // namespace

TEST(BuildField, Deterministic) {
    EXPECT_EQ(build_field(11, 1).modulus(), (std::vector<std::uint64_t>{0, 1}));
    EXPECT_EQ(build_field(5, 2).modulus(), (std::vector<std::uint64_t>{2, 0, 1}));
    const auto f33 = build_field(3, 3).modulus();
    EXPECT_TRUE(rootless(f33, 3));
    EXPECT_EQ(build_field(3, 3).modulus(), f33);
    // nothing earlier in the order is rootless
    for (std::uint64_t idx = 0;; ++idx) {
        std::vector<std::uint64_t> f{idx % 3, (idx / 3) % 3, idx / 9, 1};
        if (f == f33) break;
        EXPECT_FALSE(rootless(f, 3));
    }
    EXPECT_THROW(build_field(9, 2), HypothesisError);
}

TEST(BuildField, RabinAgreesWithRootTest) {
    for (std::uint64_t p : {2, 3, 5, 7}) {
        for (std::uint64_t idx = 0; idx < p * p * p; ++idx) {
            std::vector<std::uint64_t> f2{idx % p, (idx / p) % p, 1};
            std::vector<std::uint64_t> f3{idx % p, (idx / p) % p, idx / (p * p), 1};
            EXPECT_EQ(is_irreducible(f3, p), rootless(f3, p));
            if (idx < p * p) {
                EXPECT_EQ(is_irreducible(f2, p), rootless(f2, p));
            }
        }
    }
}

TEST(FiniteField, FieldLaws) {
    ts::Gen gen(7);
    for (auto [p, k] : std::vector<std::pair<std::int64_t, std::int64_t>>{{2, 5}, {3, 4}, {5, 3}, {7, 2}, {13, 3}}) {
        const auto field = build_field(p, k);
        for (int trial = 0; trial < 200; ++trial) {
            const auto a = field.from_index(static_cast<std::uint64_t>(gen.integer(0, static_cast<std::int64_t>(field.size()) - 1)));
            const auto b = field.from_index(static_cast<std::uint64_t>(gen.integer(0, static_cast<std::int64_t>(field.size()) - 1)));
            const auto c = field.from_index(static_cast<std::uint64_t>(gen.integer(0, static_cast<std::int64_t>(field.size()) - 1)));
            EXPECT_EQ(field.mul(a, b), field.mul(b, a));
            EXPECT_EQ(field.mul(field.mul(a, b), c), field.mul(a, field.mul(b, c)));
            EXPECT_EQ(field.mul(a, field.add(b, c)), field.add(field.mul(a, b), field.mul(a, c)));
            EXPECT_EQ(field.pow(a, field.size()), a);
            EXPECT_EQ(field.trace(a), field.trace_by_orbit(a));
            EXPECT_EQ(field.trace(field.add(a, b)), (field.trace(a) + field.trace(b)) % static_cast<std::uint64_t>(p));
        }
    }
}

TEST(ExpSum, Examples) {
    // x^3 + x^2 over F_5 takes the values 0, 2, 2, 1, 0
    const auto s1 = exp_sum(2, 3, 1, build_field(5, 1));
    EXPECT_EQ(s1, CycloInt::from_exponents(5, {2, 1, 2, 0, 0}));
    EXPECT_EQ(s1, naive_prime_field_sum(2, 3, 1, 5));
    // f = x: a complete character sum
    EXPECT_TRUE(exp_sum(0, 1, 0, build_field(7, 1)).is_zero());
    EXPECT_TRUE(exp_sum(0, 1, 0, build_field(3, 2)).is_zero());
}

TEST(ExpSum, PrimeFieldAgainstDirectEvaluation) {
    for (std::int64_t p : {5, 7, 11, 13}) {
        for (std::int64_t a = 0; a < p; ++a) {
            EXPECT_EQ(exp_sum(2, 3, a, build_field(p, 1)), naive_prime_field_sum(2, 3, a, p));
            EXPECT_EQ(exp_sum(3, 5, a, build_field(p, 1)), naive_prime_field_sum(3, 5, a, p));
        }
    }
}

TEST(ExpSum, IndependentOfModulusAndRoute) {
    for (auto [p, k] : std::vector<std::pair<std::int64_t, std::int64_t>>{{5, 2}, {7, 2}, {3, 3}, {5, 3}, {3, 4}}) {
        const auto first = build_field(p, k);
        const auto last = last_field(p, k);
        ASSERT_NE(first.modulus(), last.modulus());
        const auto hist = trace_histogram(2, 5, first);
        for (std::int64_t a = 0; a < p; ++a) {
            const auto counts = trace_counts(2, 5, a, first);
            std::uint64_t mass = 0;
            for (auto c : counts) mass += c;
            EXPECT_EQ(mass, first.size());
            EXPECT_EQ(counts, trace_counts(2, 5, a, last));
            EXPECT_EQ(counts, trace_counts(hist, a));
        }
    }
}

TEST(CycloInt, Arithmetic) {
    const std::int64_t p = 7;
    const auto z = CycloInt::zeta_power(p, 1);
    CycloInt acc = CycloInt::integer(p, 1);
    for (int i = 0; i < 7; ++i) acc = acc * z;
    EXPECT_EQ(acc, CycloInt::integer(p, 1));
    CycloInt total(p);
    for (std::int64_t e = 0; e < p; ++e) total += CycloInt::zeta_power(p, e);
    EXPECT_TRUE(total.is_zero());
    EXPECT_EQ(z.conjugate(3), CycloInt::zeta_power(p, 3));
    EXPECT_THROW(z.conjugate(7), HypothesisError);
    EXPECT_THROW((z * Integer(3) + CycloInt::integer(p, 1)).divided_exactly(3), ConsistencyError);
}

TEST(PiOrd, Examples) {
    for (std::int64_t p : {3, 5, 11}) {
        EXPECT_EQ(pi_ord(CycloInt::integer(p, p)), Valuation(Rational(1)));
        EXPECT_EQ(pi_ord(CycloInt::integer(p, 1) - CycloInt::zeta_power(p, 1)), Valuation(make_rational(1, p - 1)));
        std::vector<Integer> ones(static_cast<std::size_t>(p), 1);
        EXPECT_TRUE(pi_ord(CycloInt::from_exponents(p, ones)).is_infinite());
    }
}

TEST(PiOrd, AgreesWithNormAndIgnoresRepresentative) {
    ts::Gen gen(29);
    for (std::int64_t p : {3, 5, 7, 11}) {
        for (int trial = 0; trial < 60; ++trial) {
            std::vector<Integer> raw(static_cast<std::size_t>(p));
            for (auto& c : raw) c = gen.integer(-30, 30) * (gen.coin() ? p : 1);
            const auto x = CycloInt::from_exponents(p, raw);
            if (x.is_zero()) continue;
            EXPECT_EQ(pi_ord(x).value(), ts::ord_by_norm(x));
            auto shifted = raw;
            const auto c = gen.integer(-50, 50);
            for (auto& v : shifted) v += c;
            EXPECT_EQ(CycloInt::from_exponents(p, shifted), x);
            EXPECT_EQ(pi_ord(CycloInt::from_exponents(p, shifted)), pi_ord(x));
        }
    }
}

TEST(LPolynomial, SmallDegrees) {
    for (std::int64_t p : {5, 7, 11}) {
        const auto l2 = l_polynomial(1, 2, 1, p);
        ASSERT_EQ(l2.coeffs.size(), 2u);
        EXPECT_EQ(l2.coeffs[1], exp_sum(1, 2, 1, build_field(p, 1)));

        const auto l3 = l_polynomial(2, 3, 1, p);
        const auto s1 = exp_sum(2, 3, 1, build_field(p, 1));
        const auto s2 = exp_sum(2, 3, 1, build_field(p, 2));
        EXPECT_EQ(l3.coeffs[1], s1);
        EXPECT_EQ(l3.coeffs[2], (s1 * s1 + s2).divided_exactly(2));
    }
}

TEST(LPolynomial, DegreeLaw) {
    for (std::int64_t d = 2; d <= 5; ++d) {
        for (std::int64_t p = 2; p <= 31; ++p) {
            if (!is_prime(static_cast<std::uint64_t>(p)) || d % p == 0) continue;
            if (d == 5 && p > 13) continue;
            for (std::int64_t s = 1; s < d; ++s) {
                for (std::int64_t a : {std::int64_t{1}, p - 1}) {
                    const auto l = l_polynomial(s, d, a, p, true);
                    EXPECT_EQ(static_cast<std::int64_t>(l.coeffs.size()), d);
                }
            }
        }
    }
    EXPECT_THROW(l_polynomial(1, 3, 1, 3), HypothesisError);
}

TEST(NewtonPolygon, AcceptanceInstance) {
    EXPECT_EQ(newton_polygon(2, 3, 1, 11), poly({{0, Rational(0)}, {1, make_rational(2, 5)}, {2, Rational(1)}}));
}

TEST(NewtonPolygon, HodgeWhenPIsOneModD) {
    for (auto [s, d, p] : std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>>{
             {1, 3, 7}, {2, 3, 7}, {1, 4, 5}, {3, 4, 13}, {2, 5, 11}}) {
        for (std::int64_t a = 1; a < p; ++a) EXPECT_EQ(newton_polygon(s, d, a, p), hodge_polygon(d)) << s << d << p << a;
    }
}

TEST(ExhaustiveGnp, WorkedInstance) {
    const auto g = exhaustive_gnp(2, 3, 11);
    EXPECT_EQ(g.gnp, poly({{0, Rational(0)}, {1, make_rational(2, 5)}, {2, Rational(1)}}));
    EXPECT_EQ(g.witness, 1);
    EXPECT_EQ(g.witnesses.size(), 10u);
}

TEST(ExhaustiveGnp, ChainLawAndStickelberger) {
    for (const auto& [s, d] : ts::sd_grid()) {
        for (std::int64_t p = d + 1; p <= 23; ++p) {
            if (!is_prime(static_cast<std::uint64_t>(p))) continue;
            const auto g = exhaustive_gnp(s, d, p);
            const auto hp = hodge_polygon(d);
            const Point end{Rational(d - 1), make_rational(d - 1, 2)};
            EXPECT_EQ(g.gnp.back(), end);
            for (const auto& [a, np] : g.per_a) EXPECT_TRUE(check_chain(np, g.gnp, hp)) << s << d << p << a;
            if (p % d != 1) {
                const auto np0 = newton_polygon(s, d, 0, p);
                EXPECT_TRUE(lies_over(np0, g.gnp));
                const auto pred = predict_gnp(s, d, p);
                if (pred.valid && pred.convex) {
                    EXPECT_NE(np0, g.gnp) << s << d << p;
                }
                EXPECT_EQ(np0.back(), end);
            } else {
                EXPECT_EQ(g.gnp, hp);
            }
        }
    }
}

TEST(ExhaustiveGnp, MonomialMeetsEnvelopeAtSmallPrimes) {
    // x^d can sit on the envelope below the bound, or when a predicted
    // vertex falls on the chord
    for (auto [s, d, p] : std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>>{{1, 3, 5}, {2, 3, 5}, {2, 5, 7}}) {
        const auto pred = predict_gnp(s, d, p);
        EXPECT_FALSE(pred.valid && pred.convex);
        EXPECT_EQ(newton_polygon(s, d, 0, p), exhaustive_gnp(s, d, p).gnp) << s << d << p;
    }
}

TEST(ZetaNumerator, DegreeTwo) {
    for (std::int64_t p : {3, 5, 7, 11}) {
        const auto z = zeta_numerator(1, 2, 1, p);
        EXPECT_EQ(static_cast<std::int64_t>(z.size()), p);
        EXPECT_EQ(integer_newton_polygon(z, p, p - 1), poly({{0, Rational(0)}, {1, make_rational(1, 2)}}));
    }
}

TEST(ZetaNumerator, AcceptanceInstance) {
    const auto l = l_polynomial(2, 3, 1, 11);
    const auto z = zeta_numerator(l);
    EXPECT_EQ(z.size(), 21u);
    EXPECT_EQ(integer_newton_polygon(z, 11, 10), newton_polygon(l));
}

TEST(ZetaNumerator, GaloisStableAndPointCount) {
    for (auto [s, d, p] : std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>>{
             {2, 3, 5}, {2, 3, 7}, {1, 4, 7}, {3, 5, 7}}) {
        for (std::int64_t a = 0; a < p; ++a) {
            const auto l = l_polynomial(s, d, a, p);
            const auto z = zeta_numerator(l);
            auto twisted = l;
            for (auto& c : twisted.coeffs) c = c.conjugate(2);
            EXPECT_EQ(zeta_numerator(twisted), z);
            // T-coefficient: the trace of S_1, which is p * #{f = 0} - p
            std::int64_t zeros = 0;
            for (std::int64_t x = 0; x < p; ++x) {
                const auto ux = static_cast<std::uint64_t>(x), up = static_cast<std::uint64_t>(p);
                if ((detail::pow_mod(ux, static_cast<std::uint64_t>(d), up) +
                     static_cast<std::uint64_t>(a) * detail::pow_mod(ux, static_cast<std::uint64_t>(s), up)) % up == 0) {
                    ++zeros;
                }
            }
            EXPECT_EQ(z[1], Integer(p * zeros - p));
            EXPECT_EQ(integer_newton_polygon(z, p, p - 1), newton_polygon(l));
        }
    }
}

TEST(Budget, CostAndCheck) {
    EXPECT_EQ(oracle_cost(11, 3), 11 + 121);
    EXPECT_NO_THROW(check_budget(11, 3, 132));
    EXPECT_THROW(check_budget(11, 3, 131), BudgetError);
}
