#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "apollo/density.hpp"
#include "../oracles.hpp"

using namespace apollo;

namespace {

const Quadruple kRoot{{-1, 2, 2, 3}};

TangencyForm form_for(i64 a) {
    const auto w = tangent_witness(kRoot, 2, a);
    if (!w) throw std::runtime_error("no witness");
    return tangency_form(*w);
}

std::vector<i64> tangent_curvatures(i64 lo, i64 hi) {
    std::vector<i64> out;
    for (i64 a = lo; a <= hi; ++a)
        if (tangent_witness(kRoot, 2, a)) out.push_back(a);
    return out;
}

// Values of f over the box |A x + B y| <= sqrt(A X), |a y| <= sqrt(A X), by
// plain loops, with the points that produce them.
struct BoxPoint {
    i64 x, y, value;
};

std::vector<BoxPoint> box_points(const TangencyForm& tf, i64 bound) {
    const i64 A = tf.form.a(), B = tf.form.half_b(), C = tf.form.c(), a = std::abs(tf.shift);
    const i64 ax = A * bound;
    std::vector<BoxPoint> out;
    i64 y_max = 0;
    while (a * a * (y_max + 1) * (y_max + 1) <= ax) ++y_max;
    for (i64 y = -y_max; y <= y_max; ++y)
        for (i64 x = -(bound + 5); x <= bound + 5; ++x) {
            const i64 u = A * x + B * y;
            if (u * u <= ax) out.push_back({x, y, A * x * x + 2 * B * x * y + C * y * y});
        }
    return out;
}

std::vector<i64> oracle_select(const std::vector<i64>& A0, double eta, i64 a_lo, i64 a_hi, int k) {
    const double start = std::ldexp(1.0, k);
    const double len = eta * start / std::sqrt(k);
    const int windows = static_cast<int>(std::ceil(std::sqrt(k) / eta));
    std::vector<std::vector<i64>> in(static_cast<std::size_t>(windows));
    for (int n = 0; n < windows; ++n)
        for (i64 a : A0) {
            const double v = static_cast<double>(a);
            if (v >= start + n * len && v <= start + (n + 1) * len && v <= 2 * start && a >= a_lo && a <= a_hi)
                in[static_cast<std::size_t>(n)].push_back(a);
        }
    std::size_t best = 0;
    for (std::size_t n = 1; n < in.size(); ++n)
        if (in[n].size() > in[best].size()) best = n;
    return in[best];
}

}  // namespace

TEST(Density, BuildA0MatchesOracle) {
    const Quadruple v = rotate_to_front(kRoot, 2);
    const auto tf = tangency_form(v);
    for (bool coprime : {false, true}) {
        const auto ref = oracle::value_set(tf.form.a(), tf.form.b(), tf.form.c(), tf.shift, 20000, coprime, true);
        EXPECT_EQ(build_A0(v, 20000, coprime), std::vector<i64>(ref.begin(), ref.end()));
    }
    const auto coprime = build_A0(v, 20000, true, 3);
    for (i64 a : coprime) {
        if (a > 300) break;
        EXPECT_TRUE(tangent_witness(kRoot, 2, a).has_value()) << a;
    }
}

TEST(Density, SelectionHandExample) {
    const std::vector<i64> A0{50, 51, 52, 55, 56, 57, 58, 70, 71, 99};
    const auto sel = select_Ak(A0, 0.5, 50, 100);
    ASSERT_EQ(sel.levels.size(), 2u);
    EXPECT_EQ(sel.levels[0].k, 5);
    EXPECT_EQ(sel.levels[0].window_count, 5);
    EXPECT_EQ(sel.levels[0].selected, 3);
    EXPECT_EQ(sel.levels[0].members, (std::vector<i64>{55, 56, 57, 58}));
    EXPECT_EQ(sel.levels[1].k, 6);
    EXPECT_EQ(sel.levels[1].selected, 0);
    EXPECT_EQ(sel.levels[1].members, (std::vector<i64>{70, 71}));
    EXPECT_EQ(sel.members(), (std::vector<i64>{55, 56, 57, 58, 70, 71}));
    EXPECT_TRUE(sel.warning.empty());
}

TEST(Density, SelectionTiesGoToTheFirstWindow) {
    const auto sel = select_Ak({50, 56}, 0.5, 50, 63);
    ASSERT_EQ(sel.levels.size(), 1u);
    EXPECT_EQ(sel.levels[0].selected, 2);
    EXPECT_EQ(sel.levels[0].members, std::vector<i64>{50});
}

TEST(Density, SelectionMatchesOracleOnRandomSets) {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<i64> val(1, 3000);
    for (int trial = 0; trial < 50; ++trial) {
        std::set<i64> s;
        for (int i = 0; i < 400; ++i) s.insert(val(rng));
        const std::vector<i64> A0(s.begin(), s.end());
        for (double eta : {0.1, 0.5, 0.9}) {
            const auto sel = select_Ak(A0, eta, 40, 2500);
            for (const auto& level : sel.levels) {
                ASSERT_EQ(level.members, oracle_select(A0, eta, 40, 2500, level.k)) << "k=" << level.k;
                ASSERT_EQ(level.counts.size(), static_cast<std::size_t>(level.window_count));
            }
            EXPECT_EQ(sel.levels.front().k, 5);
            EXPECT_EQ(sel.levels.back().k, 11);
        }
    }
}

TEST(Density, SelectionWarningsAndErrors) {
    EXPECT_FALSE(select_Ak({1, 2, 3}, 0.5, 50, 100).warning.empty());
    EXPECT_THROW(select_Ak({1}, 0.0, 50, 100), InvalidInput);
    EXPECT_THROW(select_Ak({1}, 1.0, 50, 100), InvalidInput);
    EXPECT_THROW(select_Ak({3, 1}, 0.5, 50, 100), InvalidInput);
    EXPECT_THROW(select_Ak({1}, 0.5, 100, 50), InvalidInput);
}

TEST(Density, SaSizesAndLowerBound) {
    const std::vector<i64> as{50, 51, 83, 87};
    std::vector<TangencyForm> forms;
    for (i64 a : as) forms.push_back(form_for(a));
    const i64 bound = 100000;
    const auto sa = sum_Sa(forms, bound, 0.5);
    ASSERT_EQ(sa.entries.size(), as.size());
    u64 total = 0;
    for (std::size_t i = 0; i < as.size(); ++i) {
        const auto& e = sa.entries[i];
        EXPECT_EQ(e.a, as[i]);
        EXPECT_EQ(e.size, value_set(forms[i], bound).size());
        EXPECT_EQ(e.floor_bound, static_cast<u64>(std::floor(kSaLowerConstant * bound / as[i])));
        EXPECT_GE(e.size, e.floor_bound);
        total += e.size;
    }
    EXPECT_EQ(sa.total, total);
    EXPECT_DOUBLE_EQ(sa.ratio, static_cast<double>(total) / (0.5 * bound));
    EXPECT_EQ(sum_Sa(forms, bound, 0.5, 4).total, total);
}

TEST(Density, IntersectionMatchesOracle) {
    const auto fa = form_for(3), fb = form_for(6);
    const auto a = oracle::value_set(fa.form.a(), fa.form.b(), fa.form.c(), fa.shift, 20000, true, false);
    const auto b = oracle::value_set(fb.form.a(), fb.form.b(), fb.form.c(), fb.shift, 20000, true, false);
    std::vector<i64> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    EXPECT_EQ(intersection_exact(fa, fb, 20000), both.size());
    EXPECT_EQ(intersection_exact(fa, fa, 20000), a.size());
}

TEST(Density, RepresentationCountMatchesBoxOracle) {
    for (auto [a, b] : std::vector<std::pair<i64, i64>>{{3, 6}, {6, 11}, {11, 15}, {3, 27}}) {
        const auto qf = make_quaternary(form_for(a), form_for(b));
        const i64 bound = 3000;
        std::map<i64, u64> right;
        for (const auto& p : box_points(qf.fa_prime, bound)) ++right[p.value];
        u64 ref = 0;
        for (const auto& p : box_points(qf.fa, bound)) {
            auto it = right.find(p.value - qf.target());
            if (it != right.end()) ref += it->second;
        }
        EXPECT_EQ(representation_count_R(qf, bound), ref) << a << "," << b;
        EXPECT_EQ(representation_count_R(qf, bound, {}, 3), ref);
    }
}

TEST(Density, BoxPointsStayBelowTwiceTheBound) {
    const auto tf = form_for(11);
    const i64 bound = 5000;
    const auto box = make_box(make_quaternary(tf, form_for(3)), bound);
    for (const auto& p : box_points(tf, bound)) {
        EXPECT_LE(p.value, kBoxValueFactor * bound);
        EXPECT_TRUE(box.side_a.contains(p.x, p.y));
    }
}

TEST(Density, ExactnessChain) {
    for (auto [a, b] : std::vector<std::pair<i64, i64>>{{3, 6}, {6, 11}, {15, 18}}) {
        const auto qf = make_quaternary(form_for(a), form_for(b));
        const i64 bound = 10000;
        const u64 boxed = box_intersection(qf, bound);
        EXPECT_LE(boxed, intersection_exact(qf.fa, qf.fa_prime, bound));
        EXPECT_LE(boxed, representation_count_R(qf, bound));
        EXPECT_EQ(box_intersection(qf, bound, 4), boxed);
    }
}

TEST(Density, DiagonalRepresentationCount) {
    const auto tf = form_for(11);
    const auto qf = make_quaternary(tf, tf);
    const i64 bound = 2000;
    EXPECT_GE(representation_count_R(qf, bound), box_points(tf, bound).size());
}

TEST(Density, SingularIntegralBehaviour) {
    const auto q36 = make_quaternary(form_for(3), form_for(6));
    const auto s4 = singular_integral_estimate(q36, 10000);
    const auto s5 = singular_integral_estimate(q36, 100000);
    EXPECT_GT(s4.estimate, 0);
    EXPECT_LE(s4.estimate, s4.ceiling);
    EXPECT_NEAR(s4.ceiling, 8 * M_PI * 10000 / 18.0, 1e-6);
    EXPECT_LT(s4.last_change, 0.05);
    EXPECT_LT(std::fabs(s5.estimate / s4.estimate / 10.0 - 1.0), 0.10);

    const auto q1115 = make_quaternary(form_for(11), form_for(15));
    const auto far = singular_integral_estimate(q1115, 10000);
    EXPECT_LT(far.estimate, s4.estimate);
    EXPECT_THROW(singular_integral_estimate(q36, 10000, 0.0), InvalidInput);
}

TEST(Density, RepresentationCountTracksTheMainTerm) {
    // R against half of (1/eps) Vol times the singular series
    const auto pairs = std::vector<std::pair<i64, i64>>{{3, 6}, {6, 11}, {11, 15}, {15, 18}, {18, 23}, {3, 11}};
    for (auto [a, b] : pairs) {
        const auto qf = make_quaternary(form_for(a), form_for(b));
        const i64 bound = 20000;
        const double r = static_cast<double>(representation_count_R(qf, bound));
        const double vol = singular_integral_estimate(qf, bound).estimate;
        const double series = singular_series_truncated(qf, 50, 2).truncated_product.convert_to<double>();
        const double ratio = r / (0.5 * vol * series);
        EXPECT_GT(ratio, 0.7) << a << "," << b;
        EXPECT_LT(ratio, 1.3) << a << "," << b;
    }
}

TEST(Density, ProgressionSums) {
    const auto s = progression_weighted_sum({3, 5, 7, 9, 10}, 3, 0, 0.5);
    EXPECT_EQ(s.sum, Rational(1, 3) + Rational(1, 9));
    EXPECT_NEAR(s.ratio, (4.0 / 9.0) / (0.5 * std::log(std::log(3.0)) / 3.0), 1e-9);
    EXPECT_EQ(progression_weighted_sum({3, 5}, 2, 1, 0.5).ratio, 0.0);
    EXPECT_THROW(progression_weighted_sum({3}, 4, 1, 0.5), InvalidInput);
    EXPECT_THROW(progression_weighted_sum({3}, 5, 5, 0.5), InvalidInput);
    EXPECT_THROW(progression_weighted_sum({3}, 1, 0, 0.5), InvalidInput);
}

TEST(Density, WitnessErrors) {
    EXPECT_THROW(tangent_witness(kRoot, 0, 3), InvalidInput);
    EXPECT_THROW(tangent_witness(kRoot, 2, 0), InvalidInput);
}

TEST(Density, ExperimentInvariants) {
    DensityConfig cfg;
    cfg.bound = 100000;
    const auto rep = density_experiment(cfg);
    EXPECT_TRUE(rep.bonferroni);
    EXPECT_TRUE(rep.union_within_kappa);
    EXPECT_EQ(rep.lower_bound, static_cast<i64>(rep.sum_sa) - static_cast<i64>(rep.sum_pairs));
    EXPECT_GE(static_cast<i64>(rep.union_size), rep.lower_bound);
    EXPECT_LE(rep.union_size, rep.sum_sa);
    EXPECT_LE(rep.union_size, rep.kappa);
    const auto members = rep.selection.members();
    EXPECT_EQ(rep.pairs.size(), members.size() * (members.size() - 1) / 2);
    for (const auto& p : rep.pairs) {
        EXPECT_LT(p.a, p.a_prime);
        EXPECT_LE(p.shape_constant, 3.0);
    }
    u64 pair_total = 0;
    for (const auto& p : rep.pairs) pair_total += p.intersection;
    EXPECT_EQ(pair_total, rep.sum_pairs);

    cfg.threads = 4;
    const auto again = density_experiment(cfg);
    EXPECT_EQ(again.union_size, rep.union_size);
    EXPECT_EQ(again.sum_pairs, rep.sum_pairs);
    EXPECT_EQ(again.selection.members(), members);
}

TEST(Density, ExperimentAtTheDefaultScale) {
    const auto rep = density_experiment(DensityConfig{});
    EXPECT_EQ(rep.A0_size, 105676u);
    EXPECT_EQ(rep.selection.members(), (std::vector<i64>{50, 51, 83, 87}));
    EXPECT_EQ(rep.sum_sa, 54742u);
    EXPECT_EQ(rep.sum_pairs, 3428u);
    EXPECT_EQ(rep.union_size, 51391u);
    EXPECT_EQ(rep.kappa, 333273u);
    EXPECT_GE(rep.lower_bound, static_cast<i64>(0.04 * 1e6));

    // sums of 1/a over progressions stay within a recorded multiple of eta log log q / q
    constexpr double kProgressionBound = 3.0;
    for (i64 q : {3, 5, 7, 11, 13, 15})
        for (i64 r = 0; r < q; ++r)
            EXPECT_LE(progression_weighted_sum(rep.selection.members(), q, r, 0.5).ratio, kProgressionBound)
                << q << " " << r;
}

TEST(Density, ExperimentErrors) {
    DensityConfig cfg;
    cfg.a0_index = 5;
    EXPECT_THROW(density_experiment(cfg), InvalidInput);
    cfg = {};
    cfg.root = Quadruple{{2, -1, 2, 3}};
    EXPECT_THROW(density_experiment(cfg), InvalidInput);
    cfg = {};
    cfg.bound = 80;
    EXPECT_THROW(density_experiment(cfg), InvalidInput);
}
