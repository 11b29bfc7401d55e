#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "asep/hecke.hpp"
#include "asep/process.hpp"

using namespace asep;

namespace {

const Interval I2(1, 2);
const Permutation S12 = Permutation::reversal(I2);

ExactHecke random_probability(Interval iv, const Rational& q, std::mt19937_64& rng) {
    ExactHecke e(iv, q);
    Rational total = 0;
    const auto& g = e.group();
    for (int a = 0; a < g.order(); ++a) {
        e.coeff(a) = Rational(static_cast<long>(rng() % 5));
        total += e.coeff(a);
    }
    if (total == 0) {
        e.coeff(0) = 1;
        total = 1;
    }
    e *= Rational(1) / total;
    return e;
}

} // namespace

TEST(Hecke, GeneratorOnTwoSites) {
    const Rational q(1, 3);
    const auto id = ExactHecke::unit(I2, q);
    EXPECT_EQ(left_mul_generator(1, id), ExactHecke::basis(I2, q, S12));
    auto expect = ExactHecke::basis(I2, q, S12) * (1 - q) + id * q;
    EXPECT_EQ(left_mul_generator(1, ExactHecke::basis(I2, q, S12)), expect);
    EXPECT_THROW(left_mul_generator(2, id), Error);
}

TEST(Hecke, GeneratorPreservesMass) {
    std::mt19937_64 rng(1);
    const Interval iv(1, 3);
    for (int r = 0; r < 20; ++r) {
        const auto A = random_probability(iv, Rational(1, 4), rng);
        for (int i = 1; i <= 2; ++i) {
            const auto B = left_mul_generator(i, A);
            EXPECT_EQ(B.coefficient_sum(), A.coefficient_sum());
            EXPECT_TRUE(B.is_probability());
        }
    }
}

TEST(Hecke, MultiplyBasics) {
    std::mt19937_64 rng(2);
    const Interval iv(1, 3);
    const Rational q(1, 2);
    const auto A = random_probability(iv, q, rng), B = random_probability(iv, q, rng);
    EXPECT_EQ(multiply(ExactHecke::unit(iv, q), B), B);
    EXPECT_TRUE(multiply(A, B).is_probability());
    EXPECT_THROW(multiply(A, ExactHecke::unit(iv, Rational(1, 3))), Error);
    EXPECT_THROW(multiply(A, ExactHecke::unit(Interval(1, 2), q)), Error);
}

TEST(Hecke, Involution) {
    const Interval iv(1, 3);
    const Rational q(1, 2);
    const auto cyc = ExactHecke::basis(iv, q, Permutation(iv, {2, 3, 1}));
    EXPECT_EQ(involution(cyc), ExactHecke::basis(iv, q, Permutation(iv, {3, 1, 2})));
    for (int i = 1; i <= 2; ++i) {
        auto s = Permutation::identity(iv);
        s.swap_adjacent(i);
        EXPECT_EQ(involution(ExactHecke::basis(iv, q, s)), ExactHecke::basis(iv, q, s));
    }
    std::mt19937_64 rng(3);
    const auto A = random_probability(iv, q, rng);
    EXPECT_EQ(involution(involution(A)), A);
}

TEST(Hecke, MallowsElement) {
    const Rational q(2, 5);
    const auto M = mallows_element(1, 2, q);
    const auto want = (ExactHecke::unit(I2, q) * q + ExactHecke::basis(I2, q, S12)) * (Rational(1) / (1 + q));
    EXPECT_EQ(M, want);
    EXPECT_EQ(left_mul_generator(1, M), M);
    const auto M3 = mallows_element(1, 3, q);
    EXPECT_TRUE(M3.is_probability());
    EXPECT_EQ(involution(M3), M3);
    EXPECT_EQ(M3.coeff(Permutation::reversal(Interval(1, 3))), mallows_prob(make_mallows(Interval(1, 3), q),
                                                                           Permutation::reversal(Interval(1, 3))));
    EXPECT_THROW(mallows_element(1, 8, q), Error);
}

TEST(Hecke, ShuffleElementTwoSites) {
    const Rational q(1, 2);
    EXPECT_EQ(shuffle_element(1, 3, q, 0).element.coeff(0), 1.0);
    for (double t : {0.1, 0.7, 2.5}) {
        const auto W = shuffle_element(1, 2, q, t);
        const double want = 1.0 / 3.0 + 2.0 / 3.0 * std::exp(-1.5 * t);
        EXPECT_NEAR(W.element.coeff(Permutation::identity(I2)), want, 1e-12);
        EXPECT_LT(W.defect, 1e-12);
    }
}

TEST(Hecke, ShuffleElementConverges) {
    const Rational q(1, 2);
    const auto W = shuffle_element(1, 3, q, 10.0);
    const auto M = mallows_element(1, 3, q);
    HeckeElement<double> Md(Interval(1, 3), 0.5);
    for (int a = 0; a < 6; ++a) Md.coeff(a) = M.coeff(a).get_d();
    EXPECT_LT(W.element.l1_distance(Md), 1e-3);
}

TEST(Hecke, ShuffleSemigroup) {
    const Rational q(1, 4);
    const auto a = shuffle_element(1, 4, q, 0.4), b = shuffle_element(1, 4, q, 0.9);
    const auto ab = shuffle_element(1, 4, q, 1.3);
    EXPECT_LT(multiply(a.element, b.element).l1_distance(ab.element), 1e-9);
}

// The interval process started at the identity has law W(t) at time t.
TEST(Hecke, ShuffleElementMatchesSimulation) {
    const Rational q(1, 2);
    const double t = 0.7;
    const Interval iv(1, 3);
    const auto W = shuffle_element(1, 3, q, t);
    std::map<Permutation, int> counts;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i) {
        const auto cs = gen_clocks(Interval(1, 2), q, t, trial_seed(17, i));
        counts[evolve({ProcessState::multi(Permutation::identity(iv))}, cs, t)[0].perm()]++;
    }
    double tv = 0;
    for (int a = 0; a < 6; ++a) {
        const auto w = W.element.group().perm(a);
        tv += std::abs(W.element.coeff(a) - static_cast<double>(counts[w]) / trials);
    }
    EXPECT_LT(tv / 2, 0.01);
}

TEST(Hecke, IncreasingRecompose) {
    const Interval iv(1, 4);
    const Permutation w(iv, {3, 1, 4, 2});
    EXPECT_EQ(increasing_recompose(w, I2, Permutation::identity(I2)), Permutation(iv, {1, 3, 4, 2}));
    EXPECT_EQ(increasing_recompose(w, I2, S12), Permutation(iv, {3, 1, 4, 2}));
    EXPECT_EQ(increasing_recompose(w, Interval(2, 4), Permutation::reversal(Interval(2, 4))), Permutation(iv, {3, 4, 2, 1}));
    EXPECT_THROW(increasing_recompose(w, Interval(3, 5), Permutation::identity(Interval(3, 5))), Error);
    EXPECT_THROW(increasing_recompose(w, I2, Permutation::identity(Interval(1, 3))), Error);
}

// Recomposing with a Mallows permutation of sub realizes M_sub · T_w.
TEST(Hecke, IncreasingRecomposeLaw) {
    const Interval iv(1, 4), sub(2, 4);
    const Rational q(1, 2);
    const auto law = mallows_law(make_mallows(sub, q));
    const auto Msub = mallows_element_on(iv, sub, q);
    std::mt19937_64 rng(5);
    const auto g = SymmetricGroup::get(iv);
    for (int a = 0; a < g->order(); ++a) {
        const auto w = g->perm(a);
        ExactHecke pushed(iv, q);
        for (const auto& [v, p] : law) pushed.coeff(g->index(increasing_recompose(w, sub, v))) += p;
        ASSERT_EQ(pushed, multiply(Msub, ExactHecke::basis(iv, q, w))) << format_permutation(w);
    }

    const Permutation w(iv, {3, 1, 4, 2});
    const auto exact = multiply(Msub, ExactHecke::basis(iv, q, w));
    const auto model = make_mallows(sub, q);
    std::map<Permutation, int> counts;
    const int trials = 1000000;
    for (int i = 0; i < trials; ++i) counts[increasing_recompose(w, sub, sample_mallows(model, rng))]++;
    double tv = 0;
    for (int a = 0; a < g->order(); ++a)
        tv += std::abs(exact.coeff(a).get_d() - static_cast<double>(counts[g->perm(a)]) / trials);
    EXPECT_LT(tv / 2, 0.01);
}

TEST(Hecke, VerifyOnS3) {
    for (const Rational& q : {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
        const auto checks = verify_hecke(Interval(1, 3), q, 8);
        ASSERT_EQ(checks.size(), 8u);
        std::map<std::string, long> cases;
        for (const auto& c : checks) {
            EXPECT_TRUE(c.passed()) << c.name;
            cases[c.name] = c.cases;
        }
        EXPECT_EQ(cases["associativity"], 216);
        EXPECT_EQ(cases["involution-anti-homomorphism"], 36);
        EXPECT_EQ(cases["exchange-two-blocks"], 9 * 6 * 6);
    }
}

// The exchange comparison is not vacuous: an element that is not involution-fixed breaks it.
TEST(Hecke, ExchangeIdentityIsSensitive) {
    const Interval iv(1, 3);
    const Rational q(1, 2);
    const auto W = shuffle_series_terms(iv, q, 2)[2];
    const auto A = mallows_element_on(iv, Interval(1, 2), q);
    EXPECT_EQ(multiply(W, A), involution(multiply(A, W)));
    const auto bogus = ExactHecke::basis(iv, q, Permutation(iv, {2, 3, 1}));
    EXPECT_NE(multiply(W, bogus), involution(multiply(bogus, W)));
}

TEST(Hecke, DumpIsCanonical) {
    const auto M = mallows_element(1, 2, Rational(1, 2));
    EXPECT_EQ(dump(M), "1,2 : 1/3\n2,1 : 2/3\n");
}
