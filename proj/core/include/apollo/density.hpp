#pragma once

// The counting apparatus behind the positive-density lower bound: the
// curvature set A_0, dyadic selections A^(k), value sets S_a and their
// pairwise intersections, lattice counts on the quadric F = a - a', and the
// end-to-end inclusion-exclusion experiment.

#include <optional>
#include <string>
#include <vector>

#include "apollo/forms.hpp"
#include "apollo/local_density.hpp"
#include "apollo/orbit.hpp"

namespace apollo {

/// A_0: integers a <= bound with a = f_{a0}(x, y) - a0 for some x, y >= 0,
/// where the form comes from `a0_quadruple` (fixed circle first). The
/// definition imposes no coprimality; `coprime_only` adds it.
std::vector<i64> build_A0(const Quadruple& a0_quadruple, i64 bound, bool coprime_only = false, unsigned threads = 1);

struct DyadicLevel {
    int k = 0;
    double window_length = 0;  // eta 2^k / sqrt(k)
    int window_count = 0;      // ceil(sqrt(k) / eta)
    int selected = 0;          // argmax window, ties to the smallest index
    std::vector<u64> counts;   // |A_0 ∩ window n| for each n
    double lo = 0, hi = 0;     // selected window after clipping
    std::vector<i64> members;  // A^(k)
    double average = 0;        // mean count over the windows
    double pigeonhole_ratio = 0;  // |A^(k)| / (eta 2^k / k)
};

struct DyadicSelection {
    double eta = 0;
    i64 a_lo = 0, a_hi = 0;
    std::vector<DyadicLevel> levels;
    std::string warning;  // set when no element of A_0 falls in range

    /// Union of all A^(k), ascending.
    std::vector<i64> members() const;
};

/// For every k with [2^k, 2^{k+1}) meeting [a_lo, a_hi] (k >= 1), splits
/// [2^k, 2^{k+1}] into ceil(sqrt(k)/eta) closed windows of length
/// eta 2^k/sqrt(k) starting at 2^k, clips them to the dyadic interval and to
/// [a_lo, a_hi], and keeps the window holding the most elements of A_0.
DyadicSelection select_Ak(const std::vector<i64>& A0, double eta, i64 a_lo, i64 a_hi);

/// A quadruple from the A_i suborbit of `root` (i = fixed_index) holding
/// curvature a in a slot other than i, rotated so that a comes first. The
/// search is the sequential suborbit traversal up to curvature a, so the
/// result is deterministic.
std::optional<Quadruple> tangent_witness(const Quadruple& root, int fixed_index, i64 a);

/// Recorded constant c in |S_a| >= floor(c X / a).
inline constexpr double kSaLowerConstant = 0.5;

struct SaEntry {
    i64 a = 0;
    Quadruple witness;
    BinaryQuadraticForm form;
    u64 size = 0;         // |S_a|
    u64 floor_bound = 0;  // floor(kSaLowerConstant X / a)
};

struct SaSummary {
    i64 bound = 0;
    double eta = 0;
    std::vector<SaEntry> entries;
    u64 total = 0;
    u64 max_size = 0;
    double ratio = 0;  // total / (eta X)
};

/// |S_a| for each witness (full quadrant, coprime arguments).
SaSummary sum_Sa(const std::vector<TangencyForm>& forms, i64 bound, double eta, unsigned threads = 1,
                 Budget budget = {});

/// |S_a ∩ S_a'| with S over [1, bound] under `opts`.
u64 intersection_exact(const TangencyForm& fa, const TangencyForm& fa_prime, i64 bound,
                       const ValueSetOptions& opts = {});

/// Constant c in the box sqrt(X) B_a: points satisfy f_a <= c X.
inline constexpr i64 kBoxValueFactor = 2;

/// One factor of sqrt(X) B_a for f = A x^2 + 2B xy + C y^2 with AC - B^2 = a^2:
/// |A x + B y| <= sqrt(A X) and |a y| <= sqrt(A X). Since
/// A f = (A x + B y)^2 + a^2 y^2, every point has f <= 2X.
struct BoxSide {
    BinaryQuadraticForm form;
    i64 a = 0;
    i64 ax = 0;  // A X
    i64 y_max = 0;

    bool contains(i64 x, i64 y) const;
    /// Inclusive x range of row y (empty when lo > hi).
    std::pair<i64, i64> row(i64 y) const;
};

struct BoxRegion {
    i64 bound = 0;
    BoxSide side_a, side_a_prime;
};

BoxRegion make_box(const QuaternaryForm& qf, i64 bound);

/// R = #{(x, y, x', y') in the box : F = a - a'}, counting every lattice
/// point (no coprimality). Each (x, y) in the f_a box is matched against
/// the f_a' box rows solved exactly at value f_a(x, y) - (a - a').
u64 representation_count_R(const QuaternaryForm& qf, i64 bound, Budget budget = {}, unsigned threads = 1);

/// Distinct n in [1, bound] with n + a = f_a(P), n + a' = f_a'(P'), P and
/// P' coprime pairs inside the respective boxes.
u64 box_intersection(const QuaternaryForm& qf, i64 bound, unsigned threads = 1);

struct SingularIntegral {
    double estimate = 0;
    double ceiling = 0;       // 8 pi X / (a a'), an exact upper bound for the limit
    int grid = 0;             // cells per side in the final pass
    double last_change = 0;   // relative change from the previous grid
};

/// (1/eps) Vol{x in the box : |F(x) - (a - a')| < eps}. After the linear
/// change u = A x + B y, w = a y (and scaling by sqrt(A)) each box becomes
/// the square [-sqrt X, sqrt X]^2 with f = u^2 + w^2, so the inner pair is
/// the exact area of disk-square intersections and only the outer pair is
/// sampled on a midpoint grid, refined until the relative change is < 5%.
SingularIntegral singular_integral_estimate(const QuaternaryForm& qf, i64 bound, double eps = 1.0,
                                            Budget budget = {});

struct ProgressionSum {
    i64 q = 0, r = 0;
    Rational sum;        // sum of 1/a over a = r mod q
    double ratio = 0;    // sum / (eta log log q / q)
};

/// Requires q > 1 squarefree and 0 <= r < q.
ProgressionSum progression_weighted_sum(const std::vector<i64>& selection, i64 q, i64 r, double eta);

struct PairEntry {
    i64 a = 0, a_prime = 0;
    u64 intersection = 0;
    double shape_constant = 0;  // intersection / ((X / a a') pair_arithmetic_factor)
};

struct DensityConfig {
    Quadruple root{{-1, 2, 2, 3}};
    int a0_index = 2;  // 1..4, the fixed circle defining A_0
    i64 bound = 1'000'000;
    double eta = 0.5;
    i64 a_lo = 50, a_hi = 100;
    unsigned threads = 1;
    Budget budget{};
};

struct DensityReport {
    DensityConfig config;
    i64 a0 = 0;
    BinaryQuadraticForm a0_form;
    u64 A0_size = 0;
    DyadicSelection selection;
    SaSummary sa;
    std::vector<PairEntry> pairs;  // unordered, a < a'
    u64 sum_sa = 0;
    u64 sum_pairs = 0;
    i64 lower_bound = 0;     // sum_sa - sum_pairs
    u64 union_size = 0;
    double union_ratio = 0;  // union / X
    u64 kappa = 0;
    double kappa_ratio = 0;  // kappa / X
    double max_shape_constant = 0;
    bool bonferroni = false;         // union >= lower_bound
    bool union_within_kappa = false; // union ⊆ curvature set
};

/// Full pipeline: A_0 (coprime arguments, so every a is a realized tangent
/// curvature), dyadic selection, witnesses and S_a, all pairwise
/// intersections, the exact union, and kappa(P, X).
DensityReport density_experiment(const DensityConfig& config);

}  // namespace apollo
