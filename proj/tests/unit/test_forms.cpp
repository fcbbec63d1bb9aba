#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "apollo/forms.hpp"
#include "apollo/orbit.hpp"
#include "../oracles.hpp"

using namespace apollo;

namespace {

const Quadruple kRoot{{-1, 2, 2, 3}};

std::vector<Quadruple> random_quadruples(int count, int max_len, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> len(0, max_len), gen(1, 4);
    std::vector<Quadruple> out;
    for (int i = 0; i < count; ++i) {
        Quadruple q = kRoot;
        int last = 0;
        for (int n = len(rng); n > 0; --n) {
            int g;
            do g = gen(rng);
            while (g == last);
            q = reflect(q, g);
            last = g;
        }
        out.push_back(q);
    }
    return out;
}

std::vector<i64> to_vector(const std::set<i64>& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(Forms, TangencyFormExamples) {
    auto tf = tangency_form(Quadruple{{2, -1, 2, 3}});
    EXPECT_EQ(tf.form, BinaryQuadraticForm(1, 2, 5));
    EXPECT_EQ(tf.form.disc(), -16);
    EXPECT_EQ(tf.shift, 2);
    tf = tangency_form(Quadruple{{3, -1, 2, 2}});
    EXPECT_EQ(tf.form, BinaryQuadraticForm(2, 2, 5));
    EXPECT_EQ(tf.form.disc(), -36);
    tf = tangency_form(kRoot);
    EXPECT_EQ(tf.form.disc(), -4);
    EXPECT_TRUE(tf.form.positive_definite());
}

TEST(Forms, TangencyFormErrors) {
    EXPECT_THROW(tangency_form(Quadruple{{1, 1, 1, 1}}), InvalidInput);
    EXPECT_THROW(tangency_form(Quadruple{{0, 0, 1, 1}}), InvalidInput);
    EXPECT_THROW(rotate_to_front(kRoot, 0), InvalidInput);
    EXPECT_EQ(rotate_to_front(kRoot, 3), (Quadruple{{2, -1, 2, 3}}));
}

TEST(Forms, DiscriminantOnRandomQuadruples) {
    for (const auto& q : random_quadruples(1000, 12, 11)) {
        for (int i = 1; i <= 4; ++i) {
            const Quadruple v = rotate_to_front(q, i);
            if (v[0] == 0) continue;
            const auto tf = tangency_form(v);
            ASSERT_EQ(tf.form.disc(), -4 * v[0] * v[0]) << to_string(v);
            ASSERT_TRUE(tf.form.positive_definite());
            ASSERT_EQ(tf.form.a(), v[1] + v[0]);
            ASSERT_EQ(tf.form.c(), v[3] + v[0]);
        }
    }
}

TEST(Forms, ParseAndPrint) {
    EXPECT_EQ(parse_form("1, 2,5"), BinaryQuadraticForm(1, 2, 5));
    EXPECT_EQ(to_string(BinaryQuadraticForm(2, -2, 5)), "2,-2,5");
    EXPECT_THROW(parse_form("1,3,5"), InvalidInput);
    EXPECT_THROW(parse_form("1,2"), InvalidInput);
    EXPECT_THROW(parse_form("1,2,5,7"), InvalidInput);
    EXPECT_THROW(parse_form("1,x,5"), InvalidInput);
    EXPECT_THROW(BinaryQuadraticForm(1, 1, 1), InvalidInput);
}

TEST(Forms, ValueSetMatchesBoxOracle) {
    for (const auto& q : random_quadruples(25, 5, 3)) {
        for (int i = 1; i <= 4; ++i) {
            const Quadruple v = rotate_to_front(q, i);
            if (v[0] == 0) continue;
            const auto tf = tangency_form(v);
            for (bool coprime : {true, false})
                for (Quadrant quad : {Quadrant::full, Quadrant::nonneg}) {
                    ValueSetOptions opts;
                    opts.coprime_only = coprime;
                    opts.quadrant = quad;
                    const auto ref = oracle::value_set(tf.form.a(), tf.form.b(), tf.form.c(), tf.shift, 3000,
                                                       coprime, quad == Quadrant::nonneg);
                    ASSERT_EQ(value_set(tf, 3000, opts), to_vector(ref)) << to_string(v);
                }
        }
    }
}

TEST(Forms, NonnegQuadrantIsASubset) {
    const auto tf = tangency_form(rotate_to_front(reflect(kRoot, 4), 4));
    ValueSetOptions nonneg;
    nonneg.quadrant = Quadrant::nonneg;
    const auto part = value_set(tf, 100000, nonneg);
    const auto full = value_set(tf, 100000);
    EXPECT_TRUE(std::includes(full.begin(), full.end(), part.begin(), part.end()));
    EXPECT_LT(part.size(), full.size());
}

TEST(Forms, ValueSetThreadIndependent) {
    const auto tf = tangency_form(Quadruple{{3, -1, 2, 2}});
    ValueSetOptions one, many;
    many.threads = 4;
    EXPECT_EQ(value_set(tf, 200000, one), value_set(tf, 200000, many));
}

TEST(Forms, RepresentationCountMatchesOracle) {
    const std::vector<BinaryQuadraticForm> forms{{1, 0, 1}, {1, 2, 5}, {2, 2, 5}, {3, 2, 7}, {5, -4, 8}};
    for (const auto& f : forms)
        for (i64 n = 1; n <= 300; ++n)
            for (bool coprime : {true, false})
                ASSERT_EQ(representation_count(f, n, coprime), oracle::rep_count(f.a(), f.b(), f.c(), n, coprime))
                    << to_string(f) << " n=" << n;
    EXPECT_EQ(representation_count(BinaryQuadraticForm(1, 0, 1), 25, false), 12u);
    EXPECT_EQ(representation_count(BinaryQuadraticForm(1, 0, 1), 25, true), 8u);
    EXPECT_EQ(representation_count(BinaryQuadraticForm(1, 0, 1), 0), 0u);
}

TEST(Forms, RepresentationAgreesWithValueSet) {
    const BinaryQuadraticForm f(2, 2, 5);
    const auto bits = value_bits(f, 0, 5000);
    for (i64 n = 1; n <= 5000; ++n)
        ASSERT_EQ(bits.test(static_cast<u64>(n)), representation_count(f, n) > 0) << n;
}

TEST(Forms, U0MatchesOracle) {
    for (const BinaryQuadraticForm& f : {BinaryQuadraticForm(1, 0, 1), BinaryQuadraticForm(2, 2, 5)}) {
        const auto ref = oracle::value_set(f.a(), f.b(), f.c(), 0, 20000, true, false);
        EXPECT_EQ(distinct_count_U0(f, 20000), ref.size());
        EXPECT_EQ(distinct_count_U0(f, 20000, 3), ref.size());
    }
    EXPECT_EQ(distinct_count_U0(BinaryQuadraticForm(1, 0, 1), 10), 4u);  // 1, 2, 5, 10
}

TEST(Forms, ReductionAndMinimum) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> e(-20, 20);
    int tested = 0;
    while (tested < 300) {
        const i64 a = e(rng), b = 2 * e(rng), c = e(rng);
        if (a <= 0 || b * b - 4 * a * c >= 0) continue;
        ++tested;
        const BinaryQuadraticForm f(a, b, c);
        const auto r = reduce_form(f);
        EXPECT_EQ(r.disc(), f.disc());
        EXPECT_LE(std::abs(r.b()), r.a());
        EXPECT_LE(r.a(), r.c());
        EXPECT_EQ(min_represented(f), oracle::min_value(a, b, c, 40)) << to_string(f);
        EXPECT_EQ(oracle::value_set(a, b, c, 0, 300, false, false), oracle::value_set(r.a(), r.b(), r.c(), 0, 300, false, false));
    }
    EXPECT_THROW(reduce_form(BinaryQuadraticForm(1, 4, 1)), InvalidInput);
}

TEST(Forms, JamesRatioIsStable) {
    const BinaryQuadraticForm f(1, 0, 1);
    const auto lo = james_density_check(f, 1'000'000);
    const auto hi = james_density_check(f, 10'000'000);
    EXPECT_NEAR(lo.ratio, 0.494228, 1e-6);
    EXPECT_LT(std::fabs(hi.ratio - lo.ratio) / lo.ratio, 0.15);
    EXPECT_THROW(james_density_check(f, 2), InvalidInput);
}

TEST(Forms, ValueSetGuards) {
    const auto tf = tangency_form(kRoot);
    EXPECT_TRUE(value_set(tf, 0).empty());
    EXPECT_THROW(value_set(tf, kMaxCurvatureBound + 1), InvalidInput);
    ValueSetOptions opts;
    opts.budget = Budget{1000};
    EXPECT_THROW(value_set(tf, 1'000'000, opts), BudgetError);
    EXPECT_THROW(value_bits(BinaryQuadraticForm(1, 4, 1), 0, 10), InvalidInput);
}
