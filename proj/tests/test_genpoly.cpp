#include <gtest/gtest.h>

#include <set>

#include "gnp/genpoly.hpp"

#include "support.hpp"

using namespace gnp;
namespace ts = testing_support;

namespace {

struct Case {
    std::int64_t s, d, r;
};

std::vector<Case> small_cases() {
    std::vector<Case> out;
    for (const auto& [s, d] : ts::sd_grid()) {
        for (auto r : ts::valid_residues(d)) out.push_back({s, d, r});
    }
    return out;
}

}  // namespace

TEST(KMin, Examples) {
    EXPECT_EQ(k_min(2, 3, 2, 1), 2);
    EXPECT_EQ(k_min(2, 3, 2, 2), 0);
    EXPECT_THROW(k_min(2, 3, 1, 1), HypothesisError);
    EXPECT_THROW(k_min(2, 4, 3, 1), HypothesisError);
}

TEST(KMin, AgreesWithBruteForceAndAssignment) {
    for (const auto& c : small_cases()) {
        for (std::int64_t n = 1; n < c.d; ++n) {
            const auto expect = ts::brute_kmin(c.s, c.d, c.r, n);
            EXPECT_EQ(k_min(c.s, c.d, c.r, n), expect);
            EXPECT_EQ(k_min_assignment(c.s, c.d, c.r, n), expect);
        }
    }
    // larger d, beyond the exhaustive range, against the exhaustive scan
    for (const auto& [s, d, r] : std::vector<Case>{{2, 11, 3}, {3, 10, 7}, {5, 12, 7}}) {
        for (std::int64_t n = 1; n <= 8 && n < d; ++n) {
            EXPECT_EQ(k_min_assignment(s, d, r, n), k_min_exhaustive(s, d, r, n)) << s << d << r << n;
        }
    }
}

TEST(KMin, SEqualsOneFormula) {
    for (std::int64_t d = 3; d <= 7; ++d) {
        for (auto r : ts::valid_residues(d)) {
            for (std::int64_t n = 1; n < d; ++n) {
                std::vector<int> sigma(static_cast<std::size_t>(n));
                std::iota(sigma.begin(), sigma.end(), 1);
                std::int64_t best = -1;
                do {
                    std::int64_t t = 0;
                    for (std::int64_t i = 1; i <= n; ++i) t += pos_mod(r * i - sigma[i - 1], d);
                    if (best < 0 || t < best) best = t;
                } while (std::next_permutation(sigma.begin(), sigma.end()));
                EXPECT_EQ(k_min(1, d, r, n), best);
            }
        }
    }
}

TEST(EnumS, Examples) {
    auto e = enum_S(2, 3, 2, 1, 2);
    ASSERT_EQ(e.size(), 1u);
    EXPECT_EQ(e[0].sigma, std::vector<int>{1});
    EXPECT_EQ(e[0].ells, std::vector<std::int64_t>{0});

    e = enum_S(2, 3, 2, 2, 0);
    ASSERT_EQ(e.size(), 1u);
    EXPECT_EQ(e[0].sigma, (std::vector<int>{2, 1}));
    EXPECT_EQ(e[0].sign, -1);

    EXPECT_TRUE(enum_S(2, 3, 2, 1, 3).empty());
}

TEST(EnumS, EqualsIndependentEnumerator) {
    for (const auto& c : small_cases()) {
        for (std::int64_t n = 1; n < c.d; ++n) {
            const auto kmin = k_min(c.s, c.d, c.r, n);
            for (std::int64_t k = 0; k <= kmin + 2 * c.d; ++k) {
                std::set<ts::BruteElement> got;
                for (const auto& e : enum_S(c.s, c.d, c.r, n, k)) {
                    EXPECT_EQ(e.sign, ts::brute_sign(e.sigma));
                    for (auto ell : e.ells) EXPECT_LE(ell, (k - kmin) / c.d);
                    got.insert({e.sigma, e.ells});
                }
                EXPECT_EQ(got, ts::brute_S(c.s, c.d, c.r, n, k)) << c.s << c.d << c.r << n << k;
            }
        }
    }
}

TEST(TildeH, Examples) {
    EXPECT_EQ(tilde_h(2, 3, 2, 1, 2), RatPoly({0, 1}));
    EXPECT_EQ(tilde_h(2, 3, 2, 2, 0), RatPoly({-4}));
    EXPECT_TRUE(tilde_h(2, 3, 2, 1, 3).is_zero());
    EXPECT_THROW(tilde_h(2, 3, 2, 1, 1), HypothesisError);
}

TEST(TildeH, MatchesDefinitionAtRationalPoints) {
    ts::Gen gen(3);
    for (const auto& c : small_cases()) {
        for (std::int64_t n = 1; n < c.d; ++n) {
            const auto kmin = k_min(c.s, c.d, c.r, n);
            for (std::int64_t k = kmin; k <= kmin + c.d; ++k) {
                const RatPoly h = tilde_h(c.s, c.d, c.r, n, k);
                for (int i = 0; i < 3; ++i) {
                    const Rational z = gen.rational(9);
                    const Rational expect = ts::brute_tilde_h(c.s, c.d, c.r, n, k, z);
                    EXPECT_EQ(h(z), expect);
                    EXPECT_EQ(tilde_h_at(c.s, c.d, c.r, n, k, z), expect);
                }
            }
        }
    }
}

TEST(TildeH, IntegralityDegreeAndTRange) {
    for (const auto& c : small_cases()) {
        for (std::int64_t n = 1; n < c.d; ++n) {
            const auto kmin = k_min(c.s, c.d, c.r, n);
            for (std::int64_t k = kmin; k <= kmin + 2 * c.d; ++k) {
                const std::int64_t b = k - kmin;
                const RatPoly h = tilde_h(c.s, c.d, c.r, n, k);
                EXPECT_TRUE(h.has_integer_coeffs());
                EXPECT_LE(h.degree(), n * c.s * (b + 1));
                for (const auto& e : enum_S(c.s, c.d, c.r, n, k)) {
                    for (std::int64_t i = 1; i <= n; ++i) {
                        const auto t = t_entry(c.s, c.d, c.r, i, e.sigma[i - 1], e.ells[i - 1]);
                        EXPECT_GE(t, 0);
                        EXPECT_LE(t, c.s * (b + 1));
                    }
                }
            }
        }
    }
}

TEST(TildeH, ThetaNormalizationsDifferByConstant) {
    for (const auto& c : small_cases()) {
        for (std::int64_t n = 1; n < c.d; ++n) {
            const auto kmin = k_min(c.s, c.d, c.r, n);
            for (std::int64_t k = kmin; k <= kmin + c.d; ++k) {
                const RatPoly reduced = tilde_h(c.s, c.d, c.r, n, k, ThetaNorm::Reduced);
                const RatPoly full = tilde_h(c.s, c.d, c.r, n, k, ThetaNorm::Full);
                Integer ratio = factorial(c.d - 1 + k) / factorial(c.d - 1 + k - kmin);
                Integer scale = 1;
                for (std::int64_t i = 0; i < n; ++i) scale *= ratio;
                EXPECT_EQ(full, reduced * Rational(scale));
                if (!reduced.is_zero()) {
                    EXPECT_EQ(content_primitive(full).primitive, content_primitive(reduced).primitive);
                }
            }
        }
    }
}

TEST(HValue, Examples) {
    EXPECT_EQ(h_value(2, 3, 2, 1, 2), make_rational(-2, 3));
    EXPECT_EQ(h_value(2, 3, 2, 2, 0), 1);
    EXPECT_EQ(h_value(2, 3, 2, 1, 3), 0);
}

TEST(LowestTerms, WorkedInstance) {
    const auto lt = lowest_terms(2, 3, 2, 6);
    ASSERT_EQ(lt.size(), 2u);
    EXPECT_EQ(lt[0].k, 2);
    EXPECT_EQ(lt[0].h, make_rational(-2, 3));
    EXPECT_EQ(lt[1].k, 0);
    EXPECT_EQ(abs(*lt[1].h), 1);
    EXPECT_EQ(bound_N(2, 3, 2, lt), 5);
}

TEST(LowestTerms, LeastNonvanishingDegree) {
    for (const auto& c : small_cases()) {
        for (const auto& t : lowest_terms(c.s, c.d, c.r)) {
            ASSERT_TRUE(t.found()) << c.s << c.d << c.r << t.n;
            EXPECT_NE(*t.h, 0);
            for (std::int64_t k = t.k_min; k < *t.k; ++k) EXPECT_EQ(h_value(c.s, c.d, c.r, t.n, k), 0);
            EXPECT_EQ(h_value(c.s, c.d, c.r, t.n, *t.k), *t.h);
        }
    }
}

TEST(LowestTerms, FloorForSEqualsOne) {
    for (std::int64_t d = 3; d <= 5; ++d) {
        for (auto r : ts::valid_residues(d)) {
            for (const auto& t : lowest_terms(1, d, r)) EXPECT_EQ(t.k, t.k_min) << d << r << t.n;
        }
    }
}

TEST(LowestTerms, StrictlyAboveFloorForTwoFive) {
    const auto lt = lowest_terms(2, 5, 3, 12);
    bool strict = false;
    for (const auto& t : lt) strict = strict || (t.found() && *t.k > t.k_min);
    EXPECT_TRUE(strict);
    EXPECT_EQ(lt[1].k, 8);
    EXPECT_EQ(lt[1].h, make_rational(-24, 25));
}

TEST(LowestTerms, CapReachedIsReported) {
    const auto t = lowest_term(2, 5, 3, 2, 5);
    EXPECT_FALSE(t.found());
    EXPECT_EQ(t.searched_up_to, 5);
    EXPECT_THROW(bound_N(2, 5, 3, lowest_terms(2, 5, 3, 5)), HypothesisError);
}

TEST(GeneratingPolynomial, TrivialAndLedger) {
    const auto one = generating_polynomial(2, 3, 1);
    EXPECT_TRUE(one.trivial);
    EXPECT_TRUE(one.terms.empty());

    const auto g = generating_polynomial(2, 3, 2, 6, false);
    EXPECT_TRUE(g.incomplete.empty());
    ASSERT_FALSE(g.terms.at(1).empty());
    EXPECT_EQ(g.terms.at(1).front(), std::make_pair(std::int64_t{2}, make_rational(-2, 3)));
    for (const auto& [n, row] : g.terms) {
        for (const auto& [k, h] : row) EXPECT_NE(h, 0);
    }
}

TEST(BoundN, Formula) {
    EXPECT_EQ(bound_N(1, 3, 2, lowest_terms(1, 3, 2)),
              std::max<Integer>({Integer(2), Integer(3 + 1), Integer(4), max_prime(*lowest_terms(1, 3, 2)[0].h),
                                 max_prime(*lowest_terms(1, 3, 2)[1].h)}));
}

TEST(CertifyUnit, Examples) {
    EXPECT_TRUE(certify_unit(RatPoly({0, 1}), 2, 3, 11));
    EXPECT_TRUE(certify_unit(RatPoly({1, 0, 1}), 2, 3, 5));
    for (std::int64_t p : {11, 17, 23, 29, 41}) EXPECT_FALSE(certify_unit(RatPoly({2, 3}), 2, 3, p));
    EXPECT_THROW(certify_unit(RatPoly({0, 1}), 2, 3, 2), HypothesisError);
}

TEST(CertifyUnit, GuaranteedAboveMaxPrime) {
    for (const auto& c : small_cases()) {
        for (const auto& t : lowest_terms(c.s, c.d, c.r)) {
            const RatPoly prim = content_primitive(tilde_h(c.s, c.d, c.r, t.n, *t.k)).primitive;
            for (std::int64_t p = c.d + 1; p < 300; ++p) {
                if (!is_prime(static_cast<std::uint64_t>(p)) || p % c.d != c.r || Integer(p) <= max_prime(*t.h)) continue;
                EXPECT_TRUE(certify_unit(prim, c.r, c.d, p)) << c.s << c.d << c.r << t.n << " p=" << p;
            }
        }
    }
}
