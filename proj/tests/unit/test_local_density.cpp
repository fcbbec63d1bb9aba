#include <gtest/gtest.h>

#include <cmath>

#include "apollo/density.hpp"
#include "apollo/local_density.hpp"
#include "apollo/number_theory.hpp"
#include "../oracles.hpp"

using namespace apollo;

namespace {

const Quadruple kRoot{{-1, 2, 2, 3}};

// Curvatures tangent to the circle of curvature 2, with their forms.
const std::vector<std::pair<i64, TangencyForm>>& tangent_forms() {
    static const auto forms = [] {
        std::vector<std::pair<i64, TangencyForm>> out;
        for (i64 a = 3; a <= 120; ++a)
            if (auto w = tangent_witness(kRoot, 2, a)) out.emplace_back(a, tangency_form(*w));
        return out;
    }();
    return forms;
}

QuaternaryForm pair(i64 a, i64 a_prime) {
    const TangencyForm* fa = nullptr;
    const TangencyForm* fb = nullptr;
    for (const auto& [c, tf] : tangent_forms()) {
        if (c == a) fa = &tf;
        if (c == a_prime) fb = &tf;
    }
    if (!fa || !fb) throw std::runtime_error("curvature not tangent to the circle of curvature 2");
    return make_quaternary(*fa, *fb);
}

Rational oracle_sigma(const QuaternaryForm& qf, i64 p, int k) {
    i64 q = 1;
    for (int i = 0; i < k; ++i) q *= p;
    const auto& f = qf.fa.form;
    const auto& g = qf.fa_prime.form;
    const auto count = oracle::local_count({f.a(), f.b(), f.c()}, {g.a(), g.b(), g.c()}, qf.target(), q);
    return Rational(count) / Rational(q * q * q);
}

}  // namespace

TEST(LocalDensity, WitnessesExist) {
    EXPECT_GE(tangent_forms().size(), 20u);
    for (i64 a : {4, 5, 7, 8, 9, 10}) EXPECT_FALSE(tangent_witness(kRoot, 2, a).has_value()) << a;
    for (i64 a : {3, 6, 11, 15, 18, 23, 27}) EXPECT_TRUE(tangent_witness(kRoot, 2, a).has_value()) << a;
    const auto w = tangent_witness(kRoot, 2, 3);
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ((*w)[0], 3);
    EXPECT_TRUE(is_descartes(*w));
}

TEST(LocalDensity, ClassifyPrime) {
    EXPECT_EQ(classify_prime(6, 9, 3), PrimeCase::common_divisor);
    EXPECT_EQ(classify_prime(6, 7, 3), PrimeCase::case3);
    EXPECT_EQ(classify_prime(7, 6, 3), PrimeCase::case3);
    EXPECT_EQ(classify_prime(7, 10, 3), PrimeCase::case2);
    EXPECT_EQ(classify_prime(7, 11, 3), PrimeCase::case1);
}

TEST(LocalDensity, DiscriminantProduct) {
    const auto qf = pair(3, 6);
    EXPECT_EQ(qf.disc_product(), static_cast<i128>(16) * 9 * 36);
    EXPECT_EQ(qf.target(), -3);
}

TEST(LocalDensity, ExhaustiveAndLiftedMatchTheOracle) {
    const std::vector<std::pair<i64, i64>> pairs{{3, 6}, {6, 11}, {11, 18}, {3, 11}, {18, 27}};
    for (auto [a, b] : pairs) {
        const auto qf = pair(a, b);
        for (auto [p, k] : std::vector<std::pair<i64, int>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {5, 1}, {5, 2}, {7, 1}}) {
            const Rational ref = oracle_sigma(qf, p, k);
            EXPECT_EQ(sigma_p_exhaustive(qf, p, k), ref) << a << "," << b << " p=" << p << " k=" << k;
            EXPECT_EQ(sigma_p_lifted(qf, p, k), ref) << a << "," << b << " p=" << p << " k=" << k;
        }
    }
}

TEST(LocalDensity, LiftedMatchesExhaustiveAtHigherPowers) {
    for (auto [a, b] : std::vector<std::pair<i64, i64>>{{3, 6}, {6, 35}, {27, 39}}) {
        const auto qf = pair(a, b);
        for (auto [p, k] : std::vector<std::pair<i64, int>>{{2, 4}, {3, 3}, {5, 2}, {7, 2}, {11, 1}, {13, 1}})
            EXPECT_EQ(sigma_p_lifted(qf, p, k), sigma_p_exhaustive(qf, p, k)) << a << "," << b << " p=" << p;
    }
}

TEST(LocalDensity, AutomaticMethodChoice) {
    const auto qf = pair(3, 6);
    EXPECT_EQ(sigma_p(qf, 3, 2).method, SigmaMethod::exhaustive);
    const auto big = sigma_p(qf, 101, 2);
    EXPECT_EQ(big.method, SigmaMethod::lifted);
    EXPECT_THROW(sigma_p_exhaustive(qf, 101, 2, Budget{1000}), BudgetError);
}

TEST(LocalDensity, CaseOneIsStableInK) {
    int checked = 0;
    for (auto [a, b] : std::vector<std::pair<i64, i64>>{{3, 6}, {6, 11}, {11, 18}, {23, 27}}) {
        const auto qf = pair(a, b);
        for (i64 p : {3, 5, 7, 11, 13}) {
            if (classify_prime(a, b, p) != PrimeCase::case1) continue;
            const Rational s1 = sigma_p_lifted(qf, p, 1);
            EXPECT_EQ(sigma_p_lifted(qf, p, 2), s1) << a << "," << b << " p=" << p;
            EXPECT_EQ(sigma_p_lifted(qf, p, 3), s1) << a << "," << b << " p=" << p;
            EXPECT_EQ(s1, Rational(p * p - 1, p * p)) << a << "," << b << " p=" << p;
            ++checked;
        }
    }
    EXPECT_GE(checked, 8);
}

TEST(LocalDensity, CommonDivisorPrimesStayBelowTwo) {
    int triples = 0;
    const auto& forms = tangent_forms();
    for (std::size_t i = 0; i < forms.size() && triples < 40; ++i)
        for (std::size_t j = i + 1; j < forms.size() && triples < 40; ++j) {
            const i64 a = forms[i].first, b = forms[j].first;
            const auto qf = make_quaternary(forms[i].second, forms[j].second);
            for (i64 p : distinct_prime_factors(std::gcd(a, b))) {
                if (p > 7) continue;
                // the bound concerns the count mod p, at most 2 p^3 solutions
                EXPECT_LE(sigma_p(qf, p, 1).sigma, 2) << a << "," << b << " p=" << p;
                EXPECT_EQ(sigma_p(qf, p, 1).sigma, oracle_sigma(qf, p, 1));
                ++triples;
            }
        }
    EXPECT_GE(triples, 20);
}

TEST(LocalDensity, CommonDivisorDensityAtDeeperLevels) {
    // mod 9 and beyond the density at p = 3 settles above 2
    const auto qf = pair(3, 39);
    EXPECT_EQ(sigma_p(qf, 3, 1).sigma, Rational(5, 3));
    EXPECT_EQ(sigma_p(qf, 3, 2).sigma, Rational(7, 3));
    EXPECT_EQ(sigma_p(qf, 3, 3).sigma, Rational(20, 9));
    EXPECT_EQ(sigma_p(qf, 3, 4).sigma, Rational(20, 9));
    EXPECT_EQ(oracle_sigma(qf, 3, 2), Rational(7, 3));
}

TEST(LocalDensity, SingularSeriesReport) {
    const auto qf = pair(3, 11);
    const auto rep = singular_series_truncated(qf, 50, 2);
    EXPECT_EQ(rep.entries.size(), primes_up_to(50).size());
    Rational product = 1;
    for (const auto& e : rep.entries) {
        EXPECT_GE(e.sigma, 0);
        EXPECT_EQ(e.prime_case, classify_prime(3, 11, e.p));
        product *= e.sigma;
    }
    EXPECT_EQ(product, rep.truncated_product);
    EXPECT_TRUE(rep.within_ceiling);
    EXPECT_EQ(rep.constant, kSingularSeriesConstant);
    EXPECT_THROW(singular_series_truncated(pair(3, 3), 50, 2), InvalidInput);
    EXPECT_EQ(singular_series_truncated(qf, 50, 2, 4).truncated_product, rep.truncated_product);
}

TEST(LocalDensity, SingularSeriesConvergesAndStaysUnderTheCeiling) {
    for (auto [a, b] : std::vector<std::pair<i64, i64>>{{3, 6}, {6, 11}, {11, 35}, {27, 39}, {15, 38}}) {
        const auto qf = pair(a, b);
        const auto r50 = singular_series_truncated(qf, 50, 2);
        const auto r100 = singular_series_truncated(qf, 100, 2);
        const double v50 = r50.truncated_product.convert_to<double>();
        const double v100 = r100.truncated_product.convert_to<double>();
        EXPECT_LT(std::fabs(v100 - v50) / v50, 0.10) << a << "," << b;
        EXPECT_TRUE(r50.within_ceiling) << a << "," << b;
        EXPECT_LE(v50, kSingularSeriesConstant * r50.ceiling);
    }
}

TEST(LocalDensity, ArithmeticFactor) {
    EXPECT_DOUBLE_EQ(pair_arithmetic_factor(2, 3), 1.5 * (4.0 / 3.0));
    EXPECT_DOUBLE_EQ(pair_arithmetic_factor(6, 9), 2.0 * 1.5);  // (6,9) = 3; 2 | 54 only
    EXPECT_THROW(pair_arithmetic_factor(5, 5), InvalidInput);
}

TEST(LocalDensity, DecimalRendering) {
    EXPECT_EQ(to_decimal(Rational(1, 3), 4), "0.3333");
    EXPECT_EQ(to_decimal(Rational(2, 3), 4), "0.6667");
    EXPECT_EQ(to_decimal(Rational(1, 8), 2), "0.13");
    EXPECT_EQ(to_decimal(Rational(-5, 4), 1), "-1.3");
    EXPECT_EQ(to_decimal(Rational(7), 0), "7");
    EXPECT_EQ(to_decimal(Rational(-1, 1000), 2), "0.00");
}
